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

#include "setpred/size_function.hpp"

namespace setpred::detail {

// Decomposition of a Lovasz extension into a linear part plus non-negative
// multiples of "sum of the r largest entries over idx" terms:
//   v(f) = linear' f + sum_t coeff_t * S_{r_t}(f[idx_t]).
// Concave-cardinality functions use ranks 1..k-1 over all elements; set
// covers use one max (r = 1) term per cover point. Each term is handled by
// the variational form
//   S_r(f) = min_t  r t + sum_j (f_j - t)_+
// whose absolute values get the eta-reweighting with a floor.
struct RankTerm {
  double coeff;
  double rank;
  std::vector<int> idx;
};

// Smoothed |u|: |u| when |u| >= eps, else u^2/(2 eps) + eps/2.
double abs_eps(double u, double eps);
// Its derivative: sign(u) when |u| >= eps, else u/eps.
double sgn_eps(double u, double eps);

// v(f) = linear'f + rank terms, exactly (up to the eta floor smoothing).
void decompose_extension(const SizeFunction& v, Eigen::VectorXd& linear,
                         std::vector<RankTerm>& terms);

// Root of  r - sum_j (1/2 + 1/2 sgn_eps(f_j - t))  in t (the optimal
// threshold of the smoothed variational form); bisection to `bracket_tol`.
double threshold_search(const Eigen::VectorXd& f, const std::vector<int>& idx, double rank,
                        double eps, double bracket_tol);

// coeff * [ r t* + sum_j ((f_j - t*)/2 + |f_j - t*|_eps / 2) ] at optimal t*.
double term_value(const RankTerm& term, const Eigen::VectorXd& f, double eps, double bracket_tol);

// Smoothed Lovasz extension value for a decomposed function.
double smoothed_extension(const Eigen::VectorXd& linear, const std::vector<RankTerm>& terms,
                          const Eigen::VectorXd& f, double eps, double bracket_tol);

}  // namespace setpred::detail
