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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace setpred {

// Uniform partition of an interval into k cells, used when the output space
// is a discretized real interval.
struct CellGrid {
  double lo = 0.0;
  double hi = 1.0;
  int k = 1;

  double width() const { return (hi - lo) / k; }
  double center(int i) const { return lo + (i + 0.5) * width(); }
  // Cell index of a real value, clamped to [0, k).
  int cell_of(double y) const;
};

// Finite ground set {0, .., k-1}, optionally carrying regression-cell
// geometry.
struct GroundSet {
  int k = 1;
  std::optional<CellGrid> cells;

  static GroundSet discrete(int k);
  static GroundSet from_cells(const CellGrid& grid);
};

enum class SizeFamily { kModular, kConcaveCardinality, kSetCover };

// A non-negative, non-decreasing set function V on subsets of {0,..,k-1}
// with V(empty) = 0, from one of three families:
//
//   modular        V(A) = sum_{i in A} m_i
//   concave card.  V(A) = phi(|A|), phi given at 0..k with phi(0) = 0
//   set cover      V(A) = sum_{z : N(z) cap A != empty} w_z
//
// Construction validates non-negativity of the parameters; concavity of phi
// (and hence submodularity) is *not* enforced here so that the validation
// helpers below can be exercised on bad instances.
class SizeFunction {
 public:
  static SizeFunction modular(Eigen::VectorXd weights);
  static SizeFunction concave_cardinality(int k, Eigen::VectorXd phi);
  static SizeFunction set_cover(int k, std::vector<std::vector<int>> neighborhoods,
                                Eigen::VectorXd weights);

  // V(A) = |A|/k.
  static SizeFunction uniform_cardinality(int k);
  // Morphological cover on a cell grid: each cover point z sees the cells at
  // index distance <= radius, with uniform weights summing to one.
  static SizeFunction dilation_cover(int k, int radius);

  SizeFamily family() const { return family_; }
  int ground_size() const { return k_; }
  double total() const { return total_; }  // V of the full ground set

  // V(A) for A given as element indices (unordered, may not repeat).
  double value(const std::vector<int>& elems) const;
  // V(A) for a bitmask; requires k <= 64.
  double value_mask(std::uint64_t mask) const;

  // out[i] = V({order[0], .., order[i]}) for a permutation `order`.
  // Runs in O(k) / O(total neighborhood size).
  void prefix_values(const std::vector<int>& order, Eigen::VectorXd& out) const;

  // Choquet integral / Lovasz extension at f, by the sorted telescoping sum.
  // Equal scores are ordered by ascending element index.
  double lovasz(const Eigen::VectorXd& f) const;

  // Greedy maximizer of <mu, f> over the core B(V); a subgradient of the
  // extension at f, with mu' f = lovasz(f). Same tie rule as lovasz().
  Eigen::VectorXd greedy_subgradient(const Eigen::VectorXd& f) const;

  // A modular measure M with M(A) <= V(A) everywhere and M(full) = V(full):
  //   modular: V itself; concave: |A| phi(k)/k;
  //   cover:   m_y = sum_z w_z 1{y in N(z)} / |N(z)|.
  Eigen::VectorXd dominated_measure() const;

  // Family parameters (only valid for the matching family).
  const Eigen::VectorXd& weights() const;                       // modular
  const Eigen::VectorXd& phi() const;                           // concave
  const std::vector<std::vector<int>>& neighborhoods() const;   // cover
  const Eigen::VectorXd& cover_weights() const;                 // cover
  // For each element y, the cover points z with y in N(z).
  const std::vector<std::vector<int>>& covering_points() const;

  // True iff phi is non-decreasing and concave (concave-cardinality family;
  // trivially true for the other families).
  bool has_concave_phi() const;

  // Short identity string, used to refuse mixing curves across different V.
  std::string signature() const;

  nlohmann::json to_json() const;
  static SizeFunction from_json(const nlohmann::json& j);

  // Empty placeholder; any real instance comes from the factories above.
  SizeFunction() = default;

 private:
  SizeFamily family_ = SizeFamily::kModular;
  int k_ = 0;
  double total_ = 0.0;
  Eigen::VectorXd weights_;                         // modular
  Eigen::VectorXd phi_;                             // concave, size k+1
  std::vector<std::vector<int>> neighborhoods_;     // cover, indexed by z
  Eigen::VectorXd cover_weights_;                   // cover, indexed by z
  std::vector<std::vector<int>> covering_points_;   // cover, indexed by y
};

// Exhaustive validation for k <= 12: V(empty) = 0, monotone, and
// V(A&B) + V(A|B) <= V(A) + V(B) for all pairs. Throws for larger k.
bool check_submodular(const SizeFunction& v, double tol = 1e-9);

// Exhaustive domination check for k <= 12: m(A) <= V(A) for all A and
// m(full) = V(full). Throws for larger k.
bool check_dominated(const SizeFunction& v, const Eigen::VectorXd& m, double tol = 1e-9);

// Sort indices by descending value, ties by ascending index.
std::vector<int> sort_descending(const Eigen::VectorXd& f);

}  // namespace setpred
