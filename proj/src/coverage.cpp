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

#include "setpred/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "setpred/csv.hpp"

namespace setpred {

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int k = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int rho = 0;
  for (int j = 0; j < k; ++j) {
    cum += u[j];
    const double t = (1.0 - cum) / (j + 1);
    if (u[j] + t > 0.0) {
      rho = j + 1;
      tau = t;
    }
  }
  Eigen::VectorXd p(k);
  for (int i = 0; i < k; ++i) p[i] = std::max(v[i] + tau, 0.0);
  (void)rho;
  return p;
}

ConditionalEstimate estimate_conditional(const SizeFunction& v, const Eigen::VectorXd& f,
                                         double eps_smooth, double delta) {
  if (!f.allFinite()) throw std::invalid_argument("estimate_conditional: non-finite scores");
  const Eigen::VectorXd mu = v.greedy_subgradient(f);
  const int k = v.ground_size();
  Eigen::VectorXd raw(k);
  for (int y = 0; y < k; ++y) raw[y] = mu[y] / std::max(-f[y], delta);

  ConditionalEstimate out;
  out.uniform_fallback = raw.maxCoeff() <= 0.0;
  if (eps_smooth > 0.0) {
    out.p = project_simplex(raw - eps_smooth * v.dominated_measure());
    return out;
  }
  const double total = raw.sum();
  if (total <= 0.0) {
    out.p = Eigen::VectorXd::Constant(k, 1.0 / k);
    return out;
  }
  out.p = raw / total;
  return out;
}

ThresholdPair thresholds_for_alpha(const PredictionCurve& curve, double alpha) {
  if (!curve.alphas) throw std::invalid_argument("thresholds_for_alpha: exact alphas required");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("thresholds_for_alpha: alpha in [0,1)");
  const Eigen::VectorXd& a = *curve.alphas;
  const int m = curve.segments();

  ThresholdPair pair;
  pair.alpha = alpha;
  int j_plus = -1;
  for (int j = 0; j <= m; ++j)
    if (a[j] <= alpha + 1e-15) {
      j_plus = j;
      break;
    }
  if (j_plus < 0) {  // alpha below the miscoverage of the full set
    pair.impossible = true;
    pair.j_minus = pair.j_plus = m;
    pair.lambda_minus = pair.lambda_plus = -curve.thresholds[m];
    pair.q = 0.0;
    return pair;
  }
  pair.j_plus = j_plus;
  if (std::abs(a[j_plus] - alpha) <= 1e-15 || j_plus == 0) {
    pair.j_minus = j_plus;  // the level is achieved exactly
    pair.q = 0.0;
  } else {
    pair.j_minus = j_plus - 1;
    pair.q = (alpha - a[j_plus]) / (a[pair.j_minus] - a[j_plus]);
  }
  pair.lambda_plus = -curve.thresholds[pair.j_plus];
  pair.lambda_minus = -curve.thresholds[pair.j_minus];  // -inf for the empty set
  return pair;
}

double conformity_score(const SizeFunction& v, double eps_smooth, const Eigen::VectorXd& f, int y,
                        double alpha, ConformalConvention convention) {
  const ConditionalEstimate est = estimate_conditional(v, f, eps_smooth);
  const PredictionCurve curve = build_curve(v, f, est.p);
  const ThresholdPair pair = thresholds_for_alpha(curve, alpha);
  if (convention == ConformalConvention::kAdditive) return f[y] + pair.lambda_plus;
  return f[y] / std::max(pair.lambda_plus, 1e-9);
}

ConformalCalibration conformalize(const std::vector<double>& calibration_scores, double alpha,
                                  ConformalConvention convention) {
  if (calibration_scores.empty()) throw std::invalid_argument("conformalize: empty calibration set");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("conformalize: alpha in (0,1)");
  ConformalCalibration cal;
  cal.convention = convention;
  cal.alpha = alpha;
  cal.n = static_cast<int>(calibration_scores.size());
  const int rank = static_cast<int>(std::ceil((cal.n + 1) * (1.0 - alpha)));
  if (rank > cal.n) {
    cal.full_set = true;
    cal.q_hat = -std::numeric_limits<double>::infinity();
    return cal;
  }
  std::vector<double> neg(calibration_scores.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -calibration_scores[i];
  std::sort(neg.begin(), neg.end());
  cal.q_hat = -neg[rank - 1];
  return cal;
}

namespace {

// Miscoverage under `alphas` of the level set at threshold lambda: the set
// is B_j with j the largest index whose entering score is >= -lambda.
double alpha_at_lambda(const PredictionCurve& curve, const Eigen::VectorXd& alphas, double lambda) {
  const double nu = -lambda;
  int lo = 0, hi = curve.segments();  // thresholds are non-increasing in j
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (curve.thresholds[mid] >= nu)
      lo = mid;
    else
      hi = mid - 1;
  }
  return alphas[lo];
}

}  // namespace

CoverageReport coverage_report(const ScoreFunction& scores, const SizeFunction& v,
                               double eps_smooth, const Generator& gen,
                               const CoverageOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
    throw std::invalid_argument("coverage_report: alpha in (0,1)");
  const Eigen::MatrixXd grid = gen.x_grid(opts.grid_points);
  const int n = static_cast<int>(grid.rows());

  Eigen::VectorXd weights(n);
  for (int i = 0; i < n; ++i) weights[i] = gen.x_density(grid.row(i).transpose());
  if (weights.sum() <= 0.0) weights.setOnes();
  weights /= weights.sum();

  // Per-x curves with miscoverage under the estimated law (drives threshold
  // selection) and under the true law (drives evaluation).
  std::vector<PredictionCurve> curves(n);
  std::vector<Eigen::VectorXd> true_alphas(n);
  std::vector<ThresholdPair> pairs(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = grid.row(i).transpose();
    const Eigen::VectorXd f = scores(x);
    const ConditionalEstimate est = estimate_conditional(v, f, eps_smooth);
    curves[i] = build_curve(v, f, est.p);
    pairs[i] = thresholds_for_alpha(curves[i], opts.alpha);

    const Eigen::VectorXd pi = gen.true_conditional(x);
    Eigen::VectorXd ta(curves[i].segments() + 1);
    ta[0] = 1.0;
    double covered = 0.0;
    for (int j = 1; j <= curves[i].segments(); ++j) {
      for (int r = curves[i].cuts[j - 1]; r < curves[i].cuts[j]; ++r)
        covered += pi[curves[i].order[r]];
      ta[j] = std::max(0.0, 1.0 - covered);
    }
    true_alphas[i] = std::move(ta);
  }

  // Global threshold: grid-weighted average miscoverage under the true law,
  // swept over every candidate jump.
  std::vector<double> candidates;
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= curves[i].segments(); ++j) candidates.push_back(-curves[i].thresholds[j]);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto mean_alpha = [&](double lambda) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += weights[i] * alpha_at_lambda(curves[i], true_alphas[i], lambda);
    return s;
  };

  double lambda_plus_glob = candidates.back();
  double lambda_minus_glob = -std::numeric_limits<double>::infinity();
  double alpha_plus_glob = mean_alpha(candidates.back());
  double alpha_minus_glob = 1.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double ma = mean_alpha(candidates[c]);
    if (ma <= opts.alpha + 1e-15) {
      lambda_plus_glob = candidates[c];
      alpha_plus_glob = ma;
      if (c > 0) {
        lambda_minus_glob = candidates[c - 1];
        alpha_minus_glob = mean_alpha(candidates[c - 1]);
      }
      break;
    }
  }
  double q_glob = 0.0;
  if (opts.randomized_marginal && alpha_minus_glob > alpha_plus_glob + 1e-15)
    q_glob = (opts.alpha - alpha_plus_glob) / (alpha_minus_glob - alpha_plus_glob);

  CoverageReport report;
  report.rows.resize(n);
  for (int i = 0; i < n; ++i) {
    CoverageRow& row = report.rows[i];
    row.x = grid(i, 0);
    const ThresholdPair& pair = pairs[i];
    const double at_plus = true_alphas[i][pair.j_plus];
    const double at_minus = true_alphas[i][pair.j_minus];
    row.coverage_conditional_lambda = 1.0 - at_plus;
    row.coverage_randomized = 1.0 - (pair.q * at_minus + (1.0 - pair.q) * at_plus);
    row.set_size = curves[i].sizes[pair.j_plus];

    const double am_plus = alpha_at_lambda(curves[i], true_alphas[i], lambda_plus_glob);
    const double am_minus = std::isinf(lambda_minus_glob)
                                ? 1.0
                                : alpha_at_lambda(curves[i], true_alphas[i], lambda_minus_glob);
    row.coverage_marginal_lambda =
        1.0 - (q_glob * am_minus + (1.0 - q_glob) * am_plus);

    report.marginal_coverage_marginal_lambda += weights[i] * row.coverage_marginal_lambda;
    report.marginal_coverage_conditional_lambda += weights[i] * row.coverage_conditional_lambda;
    report.marginal_coverage_randomized += weights[i] * row.coverage_randomized;
    report.average_size += weights[i] * row.set_size;
  }
  return report;
}

void write_coverage_csv(const std::string& path, const CoverageReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(report.rows.size());
  for (const CoverageRow& r : report.rows)
    rows.push_back({format_float(r.x), format_float(r.coverage_marginal_lambda),
                    format_float(r.coverage_conditional_lambda),
                    format_float(r.coverage_randomized), format_float(r.set_size)});
  write_table_csv(path,
                  {"x", "coverage_marginal_lambda", "coverage_conditional_lambda",
                   "coverage_randomized", "set_size"},
                  rows);
}

}  // namespace setpred
