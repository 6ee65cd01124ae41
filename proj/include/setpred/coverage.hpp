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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "setpred/curve.hpp"
#include "setpred/generators.hpp"
#include "setpred/size_function.hpp"

namespace setpred {

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

struct ConditionalEstimate {
  Eigen::VectorXd p;
  bool uniform_fallback = false;  // raw inversion came out all zero
};

// Inverts trained scores into a conditional law: with mu the greedy
// subgradient at f, raw_y = mu_y / max(-f_y, delta). Without smoothing the
// raw vector is normalized; with smoothing eps M is subtracted first and the
// result projected onto the simplex.
ConditionalEstimate estimate_conditional(const SizeFunction& v, const Eigen::VectorXd& f,
                                         double eps_smooth, double delta = 1e-9);

// Bracketing thresholds around miscoverage alpha on a curve with exact
// alphas. The smaller set B_{j_minus} is predicted with probability q, the
// larger B_{j_plus} with 1-q, so that q alpha_minus + (1-q) alpha_plus =
// alpha. Deterministic prediction takes the larger set.
struct ThresholdPair {
  double lambda_minus = 0.0;  // -inf when the smaller set is empty
  double lambda_plus = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  int j_minus = 0;
  int j_plus = 0;
  bool impossible = false;  // alpha below the miscoverage of the full set
};
ThresholdPair thresholds_for_alpha(const PredictionCurve& curve, double alpha);

enum class ConformalConvention { kAdditive, kRatio };

// Conformity score of (f, y) at level alpha: f_y + lambda*(alpha, x) for the
// additive convention, f_y / max(lambda*, 1e-9) for the ratio one, with
// lambda* the deterministic threshold under the estimated conditional law.
double conformity_score(const SizeFunction& v, double eps_smooth, const Eigen::VectorXd& f, int y,
                        double alpha, ConformalConvention convention);

struct ConformalCalibration {
  ConformalConvention convention = ConformalConvention::kAdditive;
  double alpha = 0.1;
  int n = 0;
  double q_hat = 0.0;
  bool full_set = false;  // ceil((n+1)(1-alpha)) > n: threshold is -inf
};

// Split-conformal threshold: q_hat is minus the ceil((n+1)(1-alpha))-th
// smallest negated score; the predicted set is { y : score(x,y) >= q_hat }.
ConformalCalibration conformalize(const std::vector<double>& calibration_scores, double alpha,
                                  ConformalConvention convention);

enum class CoverageMode { kMarginalLambda, kConditionalLambda };

struct CoverageRow {
  double x = 0.0;  // input coordinate (first coordinate for d > 1)
  double coverage_marginal_lambda = 0.0;
  double coverage_conditional_lambda = 0.0;
  double coverage_randomized = 0.0;
  double set_size = 0.0;
};

struct CoverageReport {
  std::vector<CoverageRow> rows;
  double marginal_coverage_marginal_lambda = 0.0;
  double marginal_coverage_conditional_lambda = 0.0;
  double marginal_coverage_randomized = 0.0;
  double average_size = 0.0;
};

struct CoverageOptions {
  double alpha = 0.1;
  int grid_points = 200;
  // When set, the marginal-lambda column mixes the two global sets so the
  // average miscoverage is exactly alpha; otherwise it takes the larger set.
  bool randomized_marginal = true;
};

using ScoreFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Conditional-coverage report against the exact generator law. The
// conditional-lambda columns use per-x thresholds from the estimated
// conditional law; the marginal-lambda column uses one global threshold
// calibrated so the density-weighted average miscoverage over the grid is
// alpha. All coverages are evaluated under the true conditional law.
CoverageReport coverage_report(const ScoreFunction& scores, const SizeFunction& v,
                               double eps_smooth, const Generator& gen,
                               const CoverageOptions& opts);

void write_coverage_csv(const std::string& path, const CoverageReport& report);

}  // namespace setpred
