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

#include "setpred/feature_map.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "setpred/errors.hpp"

namespace setpred {

namespace {
constexpr double kPivotFloor = 1e-12;   // stop before numerical breakdown
constexpr double kPsdSlack = -1e-8;     // residual diagonals below this abort
}  // namespace

FeatureMap incomplete_cholesky(const KernelSpec& spec, const Eigen::MatrixXd& X, double tol,
                               bool intercept) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("incomplete_cholesky: tol in (0,1)");
  const Eigen::Index n = X.rows();
  if (n < 1) throw std::invalid_argument("incomplete_cholesky: empty input");

  KernelSpec effective = spec;
  if (effective.family == KernelSpec::Family::kNegativeDistance && effective.shift < 0.0)
    effective.shift = negative_distance_shift(X);

  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = effective.eval(X.row(i), X.row(i));
  const double trace = diag.sum();
  const double target = tol * trace;

  // L holds the selected columns of the factorization; row i of L is the
  // embedding of sample i before the triangular correction.
  Eigen::MatrixXd L(n, 0);
  std::vector<int> pivots;
  double residual = trace;
  while (residual > target && static_cast<Eigen::Index>(pivots.size()) < n) {
    Eigen::Index best = 0;
    double best_diag = -1.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (diag[i] > best_diag) {
        best_diag = diag[i];
        best = i;
      }
    if (best_diag < kPsdSlack)
      throw NumericalError("incomplete_cholesky: residual diagonal " + std::to_string(best_diag) +
                           "; effective kernel is not positive semidefinite");
    if (best_diag <= kPivotFloor) break;

    const int t = static_cast<int>(pivots.size());
    L.conservativeResize(Eigen::NoChange, t + 1);
    const double root = std::sqrt(best_diag);
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = effective.eval(X.row(i), X.row(best));
      if (t > 0) v -= L.row(i).head(t).dot(L.row(best).head(t));
      L(i, t) = v / root;
    }
    pivots.push_back(static_cast<int>(best));
    residual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      diag[i] -= L(i, t) * L(i, t);
      if (diag[i] < kPsdSlack)
        throw NumericalError("incomplete_cholesky: residual diagonal " + std::to_string(diag[i]) +
                             " at sample " + std::to_string(i) +
                             "; effective kernel is not positive semidefinite");
      if (diag[i] < 0.0) diag[i] = 0.0;
      residual += diag[i];
    }
    diag[best] = 0.0;
  }

  FeatureMap map;
  map.kernel = effective;
  map.pivots = pivots;
  map.intercept = intercept;
  const int r = static_cast<int>(pivots.size());
  map.pivot_inputs.resize(r, X.cols());
  for (int i = 0; i < r; ++i) map.pivot_inputs.row(i) = X.row(pivots[i]);
  // Exact Cholesky of K_II; the greedy pass only chose the pivots.
  Eigen::MatrixXd kii(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      kii(i, j) = effective.eval(map.pivot_inputs.row(i), map.pivot_inputs.row(j));
  Eigen::LLT<Eigen::MatrixXd> llt(kii);
  if (llt.info() != Eigen::Success)
    throw NumericalError("incomplete_cholesky: pivot block factorization failed");
  map.G = llt.matrixL();
  return map;
}

Eigen::VectorXd FeatureMap::embed(const Eigen::VectorXd& x) const {
  const int r = rank();
  Eigen::VectorXd kx(r);
  for (int i = 0; i < r; ++i) kx[i] = kernel.eval(x, pivot_inputs.row(i));
  Eigen::VectorXd phi(dim());
  if (r > 0) phi.head(r) = G.triangularView<Eigen::Lower>().solve(kx);  // G^{-1} k_I(x)
  if (intercept) phi[r] = 1.0;
  return phi;
}

Eigen::MatrixXd FeatureMap::embed_all(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(X.rows(), dim());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = embed(X.row(i));
  return out;
}

nlohmann::json FeatureMap::to_json() const {
  nlohmann::json j;
  j["kernel"] = kernel.to_json();
  j["pivots"] = pivots;
  j["intercept"] = intercept;
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < pivot_inputs.rows(); ++i) {
    std::vector<double> row(pivot_inputs.cols());
    for (Eigen::Index c = 0; c < pivot_inputs.cols(); ++c) row[c] = pivot_inputs(i, c);
    rows.push_back(std::move(row));
  }
  j["pivot_inputs"] = rows;
  std::vector<std::vector<double>> g;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    std::vector<double> row(G.cols());
    for (Eigen::Index c = 0; c < G.cols(); ++c) row[c] = G(i, c);
    g.push_back(std::move(row));
  }
  j["G"] = g;
  return j;
}

FeatureMap FeatureMap::from_json(const nlohmann::json& j) {
  FeatureMap map;
  map.kernel = KernelSpec::from_json(j.at("kernel"));
  map.pivots = j.at("pivots").get<std::vector<int>>();
  map.intercept = j.at("intercept").get<bool>();
  const auto rows = j.at("pivot_inputs").get<std::vector<std::vector<double>>>();
  const int r = static_cast<int>(rows.size());
  const int d = r > 0 ? static_cast<int>(rows[0].size()) : 0;
  map.pivot_inputs.resize(r, d);
  for (int i = 0; i < r; ++i)
    for (int c = 0; c < d; ++c) map.pivot_inputs(i, c) = rows[i][c];
  const auto g = j.at("G").get<std::vector<std::vector<double>>>();
  map.G.resize(r, r);
  for (int i = 0; i < r; ++i)
    for (int c = 0; c < r; ++c) map.G(i, c) = g[i][c];
  return map;
}

}  // namespace setpred
