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

#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "setpred/kernel.hpp"

namespace setpred {

// Finite-dimensional feature map phi(x) = G^{-1} (k(x, x_i))_{i in I} from a
// pivoted incomplete Cholesky factorization, K_II = G G' with G lower
// triangular, so phi(x)' phi(y) is the Nystrom approximation and inner
// products on pivots reproduce K_II exactly. When `intercept` is set,
// embed() appends a constant 1 coordinate which the trainers leave
// unpenalized.
struct FeatureMap {
  KernelSpec kernel;
  std::vector<int> pivots;        // indices into the build inputs
  Eigen::MatrixXd pivot_inputs;   // |I| x d
  Eigen::MatrixXd G;              // lower-triangular, |I| x |I|
  bool intercept = true;

  int rank() const { return static_cast<int>(pivots.size()); }
  int dim() const { return rank() + (intercept ? 1 : 0); }

  Eigen::VectorXd embed(const Eigen::VectorXd& x) const;
  // One row per input row.
  Eigen::MatrixXd embed_all(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static FeatureMap from_json(const nlohmann::json& j);
};

// Greedy pivot selection on the largest residual diagonal, stopping when the
// residual trace drops to tol * tr(K). A negative_distance spec with
// shift < 0 gets the data-derived shift. Throws NumericalError if a residual
// diagonal falls below -1e-8 (kernel not positive semidefinite).
FeatureMap incomplete_cholesky(const KernelSpec& spec, const Eigen::MatrixXd& X, double tol,
                               bool intercept = true);

}  // namespace setpred
