// Copyright 2026 The Setpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "setpred/dataset.hpp"
#include "setpred/rng.hpp"
#include "setpred/size_function.hpp"

namespace setpred {

// One-dimensional classification with Gaussian class conditionals.
struct Gauss1DSpec {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
  Eigen::VectorXd priors;
};

// d-dimensional classification; each class is an even mixture of two
// isotropic Gaussians with standard deviation sigma around frozen centers.
struct MixtureSpec {
  int k = 24;
  int d = 4;
  double sigma = 0.5;
  Eigen::MatrixXd means_a;  // k x d
  Eigen::MatrixXd means_b;  // k x d
};

// One-dimensional regression on x in [0,1]; the response is a two-component
// mixture of truncated Gaussians with x-dependent weight, locations and a
// heteroscedastic first component:
//   m1(x) = m1_base + m1_amp sin(2 pi x),   s1(x) = s1_base + s1_slope x
//   m2(x) = m2_base + m2_slope x,           s2 constant
//   weight of the first component w(x) = w_base + w_slope x.
// Responses are discretized to `cells` for set prediction.
struct Regression1DSpec {
  CellGrid cells{0.0, 1.0, 40};
  double m1_base = 0.25, m1_amp = 0.1;
  double m2_base = 0.7, m2_slope = 0.15;
  double s1_base = 0.04, s1_slope = 0.03;
  double s2 = 0.05;
  double w_base = 0.35, w_slope = 0.3;
};

// Synthetic data source with the exact conditional law available for oracle
// evaluation. Sampling is bit-reproducible given (seed, stream).
class Generator {
 public:
  enum class Kind { kGauss1D, kMixture, kRegression1D };

  static Generator gauss1d(Gauss1DSpec spec, std::uint64_t seed);
  static Generator mixture(MixtureSpec spec, std::uint64_t seed);
  static Generator regression1d(Regression1DSpec spec, std::uint64_t seed);

  Kind kind() const { return kind_; }
  int k() const;      // ground-set size (classes or cells)
  int xdim() const;
  std::uint64_t seed() const { return seed_; }
  const Regression1DSpec& regression_spec() const { return reg_; }

  Dataset sample(int n, std::uint64_t stream) const;

  // Exact conditional law of the label / cell index given x.
  Eigen::VectorXd true_conditional(const Eigen::VectorXd& x) const;
  Eigen::VectorXd true_conditional(double x) const;  // 1D kinds

  // Marginal input density (up to the discrete grid in use).
  double x_density(const Eigen::VectorXd& x) const;

  // Deterministic evaluation grid: linspace over the relevant range in one
  // dimension, a seeded sample otherwise.
  Eigen::MatrixXd x_grid(int n) const;

  nlohmann::json to_json() const;
  static Generator from_json(const nlohmann::json& j);

  // Empty placeholder; any real instance comes from the factories above.
  Generator() = default;

 private:
  Kind kind_ = Kind::kGauss1D;
  std::uint64_t seed_ = 0;
  Gauss1DSpec gauss_;
  MixtureSpec mix_;
  Regression1DSpec reg_;
};

// Standard normal CDF and its inverse (bisection; deterministic).
double normal_cdf(double z);
double normal_quantile(double p);

// Fill `labels` from `y_real` under a cell grid.
void assign_cells(Dataset& data, const CellGrid& grid);

}  // namespace setpred
