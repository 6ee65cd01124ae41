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

#include <string>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace setpred {

// Kernel families:
//   exponential        k(x,y) = exp(-alpha ||x-y||)
//   polynomial         k(x,y) = (1 + alpha x'y)^degree
//   negative_distance  k(x,y) = -||x-y|| + shift
// The negative-distance kernel is only conditionally positive definite; the
// shift makes the Gram matrix positive semidefinite on bounded data. Fitted
// with an unpenalized intercept it extrapolates linearly in one dimension,
// which is what the "spline" configuration in the experiment files selects.
struct KernelSpec {
  enum class Family { kExponential, kPolynomial, kNegativeDistance };

  Family family = Family::kExponential;
  double alpha = 1.0;
  int degree = 1;
  double shift = 0.0;

  static KernelSpec exponential(double alpha);
  static KernelSpec polynomial(double alpha, int degree);
  static KernelSpec negative_distance(double shift);
  // Shift derived from the data when the feature map is built.
  static KernelSpec spline();

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  std::string name() const;

  nlohmann::json to_json() const;
  static KernelSpec from_json(const nlohmann::json& j);
};

// Smallest shift making the negative-distance Gram matrix of X positive
// semidefinite (with a tiny margin), clamped from below by the closed-form
// radius bound (2R/sqrt(pi)) sqrt(d/2).
double negative_distance_shift(const Eigen::MatrixXd& X);

// Gram matrix K[i][j] = k(X.row(i), Xp.row(j)); rows are samples.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xp);

}  // namespace setpred
