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

#include <Eigen/Core>

#include "setpred/size_function.hpp"

namespace setpred {

struct SeparableMinOptions {
  // Slack used when deciding whether a set attains the parametric minimum.
  double tie_tol = 1e-12;
};

// Minimizer of  v(f) + 1/2 sum_i q_i (f_i - a_i)^2  over f in R^k, where v is
// the Lovasz extension of V. Requires q > 0 (strict convexity).
//
// Routes by family:
//   modular                closed form  f_i = a_i - m_i / q_i
//   concave card., a = 0   sort q descending + weighted isotonic regression
//   otherwise              divide-and-conquer on the parametric set problems
//                          min_B V(B) + sum_{i in B} q_i (lambda - a_i), with
//                          a sorting oracle for concave-cardinality functions
//                          and a min-cut oracle for set covers.
Eigen::VectorXd separable_min(const SizeFunction& v, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& a, const SeparableMinOptions& opts = {});

// Convenience overload with a = 0.
Eigen::VectorXd separable_min(const SizeFunction& v, const Eigen::VectorXd& q,
                              const SeparableMinOptions& opts = {});

// Value of the objective above at f.
double separable_objective(const SizeFunction& v, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& a, const Eigen::VectorXd& f);

}  // namespace setpred
