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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "setpred/size_function.hpp"

namespace setpred {

// Score vector g(x, .) over the ground set for one input, tagged with the
// identity of the predictor that produced it.
struct ScoreTable {
  Eigen::VectorXd scores;
  std::string source;
};

// The nested family of level sets of one score vector,
//   empty = B_0 < B_1 < ... < B_m = full set,
// with sizes V(B_j) and, when a conditional law is supplied, exact
// miscoverage alpha_j = P(Y not in B_j). Sets are prefixes of `order`:
// B_j = { order[0], .., order[cuts[j]-1] }.
struct PredictionCurve {
  std::vector<int> order;       // descending-score permutation of 0..k-1
  std::vector<int> cuts;        // m+1 entries; cuts[0] = 0, cuts[m] = k
  std::vector<int> position;    // position[y] = rank of y in `order`
  Eigen::VectorXd thresholds;   // entering score of B_j; +inf for the empty set
  Eigen::VectorXd sizes;        // V(B_j)
  std::optional<Eigen::VectorXd> alphas;
  double total = 0.0;           // V of the full ground set
  std::string v_signature;

  int segments() const { return static_cast<int>(cuts.size()) - 1; }
  bool contains(int j, int y) const { return position[y] < cuts[j]; }
  std::vector<int> set(int j) const;
  // Index of the smallest level set containing y (>= 1).
  int first_containing(int y) const;
};

// Level sets use >= with equal-score grouping at absolute tolerance 1e-12.
// If `cond` is given it must be a probability vector; alphas are then the
// exact tail sums.
PredictionCurve build_curve(const SizeFunction& v, const Eigen::VectorXd& f,
                            const std::optional<Eigen::VectorXd>& cond = std::nullopt);

struct AreaTriple {
  double plus = 0.0;
  double minus = 0.0;
  double mid = 0.0;
};

// Per-observation area losses of the nested family vs the realized y:
//   plus  = sum_j (V(B_j)-V(B_{j-1})) 1{y not in B_{j-1}}   (size-conservative)
//   minus = sum_j (V(B_j)-V(B_{j-1})) 1{y not in B_j}       (coverage-conservative)
//   mid   = their average                                   (randomized)
AreaTriple area_losses(const PredictionCurve& curve, int y);

// Miscoverage of the affine (randomized) interpolant at size s.
double alpha_at_size(const PredictionCurve& curve, double s);

// Area under the affine interpolant; equals the mid area when alphas are the
// exact conditional miscoverage values.
double curve_area(const PredictionCurve& curve);

// Size grid with the mean miscoverage of the affine interpolants.
struct AveragedCurve {
  Eigen::VectorXd s;
  Eigen::VectorXd alpha;
  double area() const;  // trapezoid
};
AveragedCurve averaged_curve(const std::vector<PredictionCurve>& curves, int grid_points = 1001);

// Lower convex envelope of the (size, miscoverage) points, restricted to the
// touching subset of the original sets. Requires exact alphas.
PredictionCurve convex_envelope(const PredictionCurve& curve);

}  // namespace setpred
