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

#include "setpred/size_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace setpred {

int CellGrid::cell_of(double y) const {
  const int i = static_cast<int>(std::floor((y - lo) / width()));
  return std::min(std::max(i, 0), k - 1);
}

GroundSet GroundSet::discrete(int k) {
  if (k < 1) throw std::invalid_argument("GroundSet: k must be >= 1");
  return GroundSet{k, std::nullopt};
}

GroundSet GroundSet::from_cells(const CellGrid& grid) {
  if (grid.k < 1 || !(grid.hi > grid.lo))
    throw std::invalid_argument("GroundSet: need k >= 1 and hi > lo");
  return GroundSet{grid.k, grid};
}

SizeFunction SizeFunction::modular(Eigen::VectorXd weights) {
  if (weights.size() < 1) throw std::invalid_argument("modular: empty weight vector");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("modular: weights must be non-negative");
  SizeFunction v;
  v.family_ = SizeFamily::kModular;
  v.k_ = static_cast<int>(weights.size());
  v.total_ = weights.sum();
  v.weights_ = std::move(weights);
  return v;
}

SizeFunction SizeFunction::concave_cardinality(int k, Eigen::VectorXd phi) {
  if (k < 1) throw std::invalid_argument("concave_cardinality: k must be >= 1");
  if (phi.size() != k + 1)
    throw std::invalid_argument("concave_cardinality: phi must have k+1 entries");
  if (phi[0] != 0.0) throw std::invalid_argument("concave_cardinality: phi(0) must be 0");
  SizeFunction v;
  v.family_ = SizeFamily::kConcaveCardinality;
  v.k_ = k;
  v.total_ = phi[k];
  v.phi_ = std::move(phi);
  return v;
}

SizeFunction SizeFunction::set_cover(int k, std::vector<std::vector<int>> neighborhoods,
                                     Eigen::VectorXd weights) {
  if (k < 1) throw std::invalid_argument("set_cover: k must be >= 1");
  if (static_cast<int>(neighborhoods.size()) != weights.size())
    throw std::invalid_argument("set_cover: one weight per cover point required");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("set_cover: weights must be non-negative");
  SizeFunction v;
  v.family_ = SizeFamily::kSetCover;
  v.k_ = k;
  v.covering_points_.assign(k, {});
  for (std::size_t z = 0; z < neighborhoods.size(); ++z) {
    auto& nb = neighborhoods[z];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (int y : nb) {
      if (y < 0 || y >= k) throw std::invalid_argument("set_cover: neighborhood index out of range");
      v.covering_points_[y].push_back(static_cast<int>(z));
    }
  }
  v.neighborhoods_ = std::move(neighborhoods);
  v.cover_weights_ = std::move(weights);
  double total = 0.0;
  for (std::size_t z = 0; z < v.neighborhoods_.size(); ++z)
    if (!v.neighborhoods_[z].empty()) total += v.cover_weights_[z];
  v.total_ = total;
  return v;
}

SizeFunction SizeFunction::uniform_cardinality(int k) {
  return modular(Eigen::VectorXd::Constant(k, 1.0 / k));
}

SizeFunction SizeFunction::dilation_cover(int k, int radius) {
  if (radius < 0) throw std::invalid_argument("dilation_cover: radius must be >= 0");
  std::vector<std::vector<int>> nb(k);
  for (int z = 0; z < k; ++z)
    for (int y = std::max(0, z - radius); y <= std::min(k - 1, z + radius); ++y)
      nb[z].push_back(y);
  return set_cover(k, std::move(nb), Eigen::VectorXd::Constant(k, 1.0 / k));
}

double SizeFunction::value(const std::vector<int>& elems) const {
  switch (family_) {
    case SizeFamily::kModular: {
      double s = 0.0;
      for (int i : elems) s += weights_[i];
      return s;
    }
    case SizeFamily::kConcaveCardinality:
      return phi_[static_cast<int>(elems.size())];
    case SizeFamily::kSetCover: {
      std::vector<char> hit(neighborhoods_.size(), 0);
      double s = 0.0;
      for (int y : elems)
        for (int z : covering_points_[y])
          if (!hit[z]) {
            hit[z] = 1;
            s += cover_weights_[z];
          }
      return s;
    }
  }
  return 0.0;
}

double SizeFunction::value_mask(std::uint64_t mask) const {
  if (k_ > 64) throw std::invalid_argument("value_mask: k > 64");
  std::vector<int> elems;
  for (int i = 0; i < k_; ++i)
    if (mask & (std::uint64_t{1} << i)) elems.push_back(i);
  return value(elems);
}

void SizeFunction::prefix_values(const std::vector<int>& order, Eigen::VectorXd& out) const {
  const int k = k_;
  out.resize(k);
  switch (family_) {
    case SizeFamily::kModular: {
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        s += weights_[order[i]];
        out[i] = s;
      }
      break;
    }
    case SizeFamily::kConcaveCardinality:
      for (int i = 0; i < k; ++i) out[i] = phi_[i + 1];
      break;
    case SizeFamily::kSetCover: {
      std::vector<char> hit(neighborhoods_.size(), 0);
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        for (int z : covering_points_[order[i]])
          if (!hit[z]) {
            hit[z] = 1;
            s += cover_weights_[z];
          }
        out[i] = s;
      }
      break;
    }
  }
}

std::vector<int> sort_descending(const Eigen::VectorXd& f) {
  std::vector<int> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&f](int a, int b) { return f[a] > f[b]; });
  return order;
}

double SizeFunction::lovasz(const Eigen::VectorXd& f) const {
  if (f.size() != k_) throw std::invalid_argument("lovasz: dimension mismatch");
  if (!f.allFinite()) throw std::invalid_argument("lovasz: non-finite scores");
  return greedy_subgradient(f).dot(f);
}

Eigen::VectorXd SizeFunction::greedy_subgradient(const Eigen::VectorXd& f) const {
  if (f.size() != k_) throw std::invalid_argument("greedy_subgradient: dimension mismatch");
  if (!f.allFinite()) throw std::invalid_argument("greedy_subgradient: non-finite scores");
  const std::vector<int> order = sort_descending(f);
  Eigen::VectorXd prefix;
  prefix_values(order, prefix);
  Eigen::VectorXd mu(k_);
  double prev = 0.0;
  for (int i = 0; i < k_; ++i) {
    mu[order[i]] = prefix[i] - prev;
    prev = prefix[i];
  }
  return mu;
}

Eigen::VectorXd SizeFunction::dominated_measure() const {
  switch (family_) {
    case SizeFamily::kModular:
      return weights_;
    case SizeFamily::kConcaveCardinality:
      return Eigen::VectorXd::Constant(k_, phi_[k_] / k_);
    case SizeFamily::kSetCover: {
      Eigen::VectorXd m = Eigen::VectorXd::Zero(k_);
      for (std::size_t z = 0; z < neighborhoods_.size(); ++z) {
        if (neighborhoods_[z].empty()) {
          if (cover_weights_[z] > 0.0)
            throw std::invalid_argument(
                "dominated_measure: cover point with positive weight but empty neighborhood");
          continue;
        }
        const double share = cover_weights_[z] / neighborhoods_[z].size();
        for (int y : neighborhoods_[z]) m[y] += share;
      }
      return m;
    }
  }
  return Eigen::VectorXd();
}

const Eigen::VectorXd& SizeFunction::weights() const {
  if (family_ != SizeFamily::kModular) throw std::logic_error("weights(): not a modular function");
  return weights_;
}

const Eigen::VectorXd& SizeFunction::phi() const {
  if (family_ != SizeFamily::kConcaveCardinality)
    throw std::logic_error("phi(): not a concave-cardinality function");
  return phi_;
}

const std::vector<std::vector<int>>& SizeFunction::neighborhoods() const {
  if (family_ != SizeFamily::kSetCover) throw std::logic_error("neighborhoods(): not a set cover");
  return neighborhoods_;
}

const Eigen::VectorXd& SizeFunction::cover_weights() const {
  if (family_ != SizeFamily::kSetCover) throw std::logic_error("cover_weights(): not a set cover");
  return cover_weights_;
}

const std::vector<std::vector<int>>& SizeFunction::covering_points() const {
  if (family_ != SizeFamily::kSetCover) throw std::logic_error("covering_points(): not a set cover");
  return covering_points_;
}

bool SizeFunction::has_concave_phi() const {
  if (family_ != SizeFamily::kConcaveCardinality) return true;
  for (int i = 1; i <= k_; ++i) {
    const double d = phi_[i] - phi_[i - 1];
    if (d < -1e-12) return false;
    if (i >= 2 && d > phi_[i - 1] - phi_[i - 2] + 1e-12) return false;
  }
  return true;
}

std::string SizeFunction::signature() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case SizeFamily::kModular:
      os << "modular:" << k_;
      for (int i = 0; i < k_; ++i) os << "," << weights_[i];
      break;
    case SizeFamily::kConcaveCardinality:
      os << "concave_card:" << k_;
      for (int i = 0; i <= k_; ++i) os << "," << phi_[i];
      break;
    case SizeFamily::kSetCover:
      os << "set_cover:" << k_;
      for (std::size_t z = 0; z < neighborhoods_.size(); ++z) {
        os << ";" << cover_weights_[z] << ":";
        for (int y : neighborhoods_[z]) os << y << " ";
      }
      break;
  }
  return os.str();
}

nlohmann::json SizeFunction::to_json() const {
  nlohmann::json j;
  switch (family_) {
    case SizeFamily::kModular:
      j["variant"] = "modular";
      j["weights"] = std::vector<double>(weights_.data(), weights_.data() + k_);
      break;
    case SizeFamily::kConcaveCardinality:
      j["variant"] = "concave_card";
      j["k"] = k_;
      j["phi"] = std::vector<double>(phi_.data(), phi_.data() + k_ + 1);
      break;
    case SizeFamily::kSetCover:
      j["variant"] = "set_cover";
      j["k"] = k_;
      j["neighborhoods"] = neighborhoods_;
      j["weights"] = std::vector<double>(cover_weights_.data(), cover_weights_.data() + cover_weights_.size());
      break;
  }
  return j;
}

SizeFunction SizeFunction::from_json(const nlohmann::json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "modular") {
    const auto w = j.at("weights").get<std::vector<double>>();
    return modular(Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()));
  }
  if (variant == "concave_card") {
    const int k = j.at("k").get<int>();
    const auto p = j.at("phi").get<std::vector<double>>();
    return concave_cardinality(k, Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()));
  }
  if (variant == "set_cover") {
    const int k = j.at("k").get<int>();
    auto nb = j.at("neighborhoods").get<std::vector<std::vector<int>>>();
    const auto w = j.at("weights").get<std::vector<double>>();
    return set_cover(k, std::move(nb), Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()));
  }
  throw std::invalid_argument("SizeFunction::from_json: unknown variant '" + variant + "'");
}

bool check_submodular(const SizeFunction& v, double tol) {
  const int k = v.ground_size();
  if (k > 12)
    throw std::invalid_argument("check_submodular: exhaustive check limited to k <= 12");
  const std::uint64_t n = std::uint64_t{1} << k;
  std::vector<double> val(n);
  for (std::uint64_t a = 0; a < n; ++a) val[a] = v.value_mask(a);
  if (std::abs(val[0]) > tol) return false;
  // monotone along single-element extensions
  for (std::uint64_t a = 0; a < n; ++a)
    for (int i = 0; i < k; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (!(a & bit) && val[a | bit] < val[a] - tol) return false;
    }
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = a + 1; b < n; ++b)
      if (val[a & b] + val[a | b] > val[a] + val[b] + tol) return false;
  return true;
}

bool check_dominated(const SizeFunction& v, const Eigen::VectorXd& m, double tol) {
  const int k = v.ground_size();
  if (k > 12) throw std::invalid_argument("check_dominated: exhaustive check limited to k <= 12");
  if (m.size() != k) throw std::invalid_argument("check_dominated: dimension mismatch");
  const std::uint64_t n = std::uint64_t{1} << k;
  for (std::uint64_t a = 0; a < n; ++a) {
    double ma = 0.0;
    for (int i = 0; i < k; ++i)
      if (a & (std::uint64_t{1} << i)) ma += m[i];
    if (ma > v.value_mask(a) + tol) return false;
  }
  return std::abs(m.sum() - v.total()) <= tol;
}

}  // namespace setpred
