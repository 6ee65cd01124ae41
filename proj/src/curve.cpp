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

#include "setpred/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace setpred {

namespace {
constexpr double kTieTol = 1e-12;
}

std::vector<int> PredictionCurve::set(int j) const {
  return std::vector<int>(order.begin(), order.begin() + cuts[j]);
}

int PredictionCurve::first_containing(int y) const {
  for (int j = 1; j < static_cast<int>(cuts.size()); ++j)
    if (contains(j, y)) return j;
  throw std::logic_error("PredictionCurve: element not found in the full set");
}

PredictionCurve build_curve(const SizeFunction& v, const Eigen::VectorXd& f,
                            const std::optional<Eigen::VectorXd>& cond) {
  const int k = v.ground_size();
  if (f.size() != k) throw std::invalid_argument("build_curve: dimension mismatch");
  if (!f.allFinite()) throw std::invalid_argument("build_curve: non-finite scores");
  if (cond) {
    if (cond->size() != k) throw std::invalid_argument("build_curve: conditional law dimension");
    if ((cond->array() < 0.0).any() || std::abs(cond->sum() - 1.0) > 1e-9)
      throw std::invalid_argument("build_curve: conditional law must be a probability vector");
  }

  PredictionCurve curve;
  curve.order = sort_descending(f);
  curve.position.assign(k, 0);
  for (int i = 0; i < k; ++i) curve.position[curve.order[i]] = i;
  curve.total = v.total();
  curve.v_signature = v.signature();

  curve.cuts.push_back(0);
  std::vector<double> nus{std::numeric_limits<double>::infinity()};
  for (int i = 0; i < k; ++i) {
    if (i + 1 < k && f[curve.order[i + 1]] >= f[curve.order[i]] - kTieTol) continue;
    curve.cuts.push_back(i + 1);
    nus.push_back(f[curve.order[i]]);  // entering value of the block boundary
  }
  const int m = static_cast<int>(curve.cuts.size()) - 1;
  curve.thresholds = Eigen::Map<Eigen::VectorXd>(nus.data(), m + 1);

  Eigen::VectorXd prefix;
  v.prefix_values(curve.order, prefix);
  curve.sizes.resize(m + 1);
  curve.sizes[0] = 0.0;
  for (int j = 1; j <= m; ++j) curve.sizes[j] = prefix[curve.cuts[j] - 1];

  if (cond) {
    Eigen::VectorXd alphas(m + 1);
    alphas[0] = 1.0;
    double covered = 0.0;
    for (int j = 1; j <= m; ++j) {
      for (int i = curve.cuts[j - 1]; i < curve.cuts[j]; ++i) covered += (*cond)[curve.order[i]];
      alphas[j] = std::max(0.0, 1.0 - covered);
    }
    curve.alphas = std::move(alphas);
  }
  return curve;
}

AreaTriple area_losses(const PredictionCurve& curve, int y) {
  if (y < 0 || y >= static_cast<int>(curve.position.size()))
    throw std::invalid_argument("area_losses: label out of range");
  AreaTriple out;
  const int m = curve.segments();
  for (int j = 1; j <= m; ++j) {
    const double inc = curve.sizes[j] - curve.sizes[j - 1];
    if (!curve.contains(j - 1, y)) out.plus += inc;
    if (!curve.contains(j, y)) out.minus += inc;
  }
  out.mid = 0.5 * (out.plus + out.minus);
  return out;
}

double alpha_at_size(const PredictionCurve& curve, double s) {
  if (!curve.alphas) throw std::invalid_argument("alpha_at_size: exact alphas required");
  const Eigen::VectorXd& a = *curve.alphas;
  const Eigen::VectorXd& sz = curve.sizes;
  const int m = curve.segments();
  if (s <= sz[0]) return a[0];
  for (int j = 1; j <= m; ++j) {
    if (s <= sz[j] + 1e-15) {
      if (sz[j] - sz[j - 1] <= 1e-15) continue;  // zero-width step, keep walking
      const double w = (s - sz[j - 1]) / (sz[j] - sz[j - 1]);
      return (1.0 - w) * a[j - 1] + w * a[j];
    }
  }
  return a[m];
}

double curve_area(const PredictionCurve& curve) {
  if (!curve.alphas) throw std::invalid_argument("curve_area: exact alphas required");
  const Eigen::VectorXd& a = *curve.alphas;
  double area = 0.0;
  for (int j = 1; j <= curve.segments(); ++j)
    area += (curve.sizes[j] - curve.sizes[j - 1]) * 0.5 * (a[j] + a[j - 1]);
  return area;
}

double AveragedCurve::area() const {
  double out = 0.0;
  for (int i = 1; i < s.size(); ++i) out += (s[i] - s[i - 1]) * 0.5 * (alpha[i] + alpha[i - 1]);
  return out;
}

AveragedCurve averaged_curve(const std::vector<PredictionCurve>& curves, int grid_points) {
  if (curves.empty()) throw std::invalid_argument("averaged_curve: no curves");
  if (grid_points < 2) throw std::invalid_argument("averaged_curve: need at least two grid points");
  const std::string& sig = curves.front().v_signature;
  for (const auto& c : curves) {
    if (c.v_signature != sig)
      throw std::invalid_argument("averaged_curve: curves built from different size functions");
    if (!c.alphas) throw std::invalid_argument("averaged_curve: exact alphas required");
  }
  AveragedCurve out;
  out.s = Eigen::VectorXd::LinSpaced(grid_points, 0.0, curves.front().total);
  out.alpha = Eigen::VectorXd::Zero(grid_points);
  for (const auto& c : curves)
    for (int i = 0; i < grid_points; ++i) out.alpha[i] += alpha_at_size(c, out.s[i]);
  out.alpha /= static_cast<double>(curves.size());
  return out;
}

PredictionCurve convex_envelope(const PredictionCurve& curve) {
  if (!curve.alphas) throw std::invalid_argument("convex_envelope: exact alphas required");
  const Eigen::VectorXd& a = *curve.alphas;
  const Eigen::VectorXd& s = curve.sizes;
  const int m = curve.segments();

  // Collapse ties in size to their lowest alpha (alphas are non-increasing,
  // so the last index of a tie group wins), then take the lower hull.
  std::vector<int> pts;
  for (int j = 0; j <= m; ++j) {
    if (j < m && s[j + 1] - s[j] <= 1e-15) continue;
    pts.push_back(j);
  }
  std::vector<int> hull;
  for (int j : pts) {
    while (hull.size() >= 2) {
      const int p = hull[hull.size() - 2], q = hull[hull.size() - 1];
      const double cross =
          (s[q] - s[p]) * (a[j] - a[p]) - (a[q] - a[p]) * (s[j] - s[p]);
      if (cross < -1e-14)
        hull.pop_back();  // q strictly above the chord p-j; collinear stays
      else
        break;
    }
    hull.push_back(j);
  }

  PredictionCurve env;
  env.order = curve.order;
  env.position = curve.position;
  env.total = curve.total;
  env.v_signature = curve.v_signature;
  env.cuts.reserve(hull.size());
  Eigen::VectorXd nthr(hull.size()), nsz(hull.size()), nal(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    env.cuts.push_back(curve.cuts[hull[i]]);
    nthr[i] = curve.thresholds[hull[i]];
    nsz[i] = s[hull[i]];
    nal[i] = a[hull[i]];
  }
  env.thresholds = nthr;
  env.sizes = nsz;
  env.alphas = nal;
  return env;
}

}  // namespace setpred
