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

#include "setpred/cg.hpp"

#include <cmath>

namespace setpred {

CgResult conjugate_gradient(const MatVec& apply, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                            double tol, int max_iter, const Eigen::VectorXd* jacobi) {
  const Eigen::Index n = b.size();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);
  if (max_iter < 0) max_iter = static_cast<int>(10 * n + 100);

  Eigen::VectorXd r(n), z(n), p(n), ap(n);
  apply(x, ap);
  r = b - ap;
  const double target = tol * std::max(b.norm(), 1e-300);

  auto precondition = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    if (jacobi)
      out = in.cwiseQuotient(*jacobi);
    else
      out = in;
  };

  precondition(r, z);
  p = z;
  double rz = r.dot(z);
  CgResult res;
  res.residual_norm = r.norm();
  for (int it = 0; it < max_iter; ++it) {
    if (res.residual_norm <= target) {
      res.converged = true;
      return res;
    }
    apply(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;  // loss of positive definiteness
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    precondition(r, z);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    res.residual_norm = r.norm();
    res.iterations = it + 1;
  }
  res.converged = res.residual_norm <= target;
  return res;
}

}  // namespace setpred
