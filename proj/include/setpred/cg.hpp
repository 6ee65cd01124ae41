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

#include <functional>

#include <Eigen/Core>

namespace setpred {

using MatVec = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

struct CgResult {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

// Preconditioned conjugate gradient for an SPD operator. `x` is used as the
// starting point. `jacobi`, when given, holds the diagonal used as a
// preconditioner (entries must be positive). Stops when
// ||Ax - b|| <= tol * max(||b||, tiny).
CgResult conjugate_gradient(const MatVec& apply, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                            double tol = 1e-10, int max_iter = -1,
                            const Eigen::VectorXd* jacobi = nullptr);

}  // namespace setpred
