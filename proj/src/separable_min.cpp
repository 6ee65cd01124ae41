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

#include "setpred/separable_min.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "setpred/maxflow.hpp"
#include "setpred/pava.hpp"
#include "setpred/rank_terms.hpp"

namespace setpred {

namespace detail {

double abs_eps(double u, double eps) {
  const double au = std::abs(u);
  return au >= eps ? au : u * u / (2.0 * eps) + eps / 2.0;
}

double sgn_eps(double u, double eps) {
  const double au = std::abs(u);
  return au >= eps ? (u > 0.0 ? 1.0 : -1.0) : u / eps;
}

void decompose_extension(const SizeFunction& v, Eigen::VectorXd& linear,
                         std::vector<RankTerm>& terms) {
  const int k = v.ground_size();
  linear = Eigen::VectorXd::Zero(k);
  terms.clear();
  switch (v.family()) {
    case SizeFamily::kModular:
      linear = v.weights();
      return;
    case SizeFamily::kConcaveCardinality: {
      const Eigen::VectorXd& phi = v.phi();
      linear.setConstant(phi[k] - phi[k - 1]);
      std::vector<int> all(k);
      for (int i = 0; i < k; ++i) all[i] = i;
      for (int r = 1; r <= k - 1; ++r) {
        const double c = 2.0 * phi[r] - phi[r - 1] - phi[r + 1];
        if (c > 0.0) terms.push_back({c, static_cast<double>(r), all});
      }
      return;
    }
    case SizeFamily::kSetCover: {
      const auto& nb = v.neighborhoods();
      const Eigen::VectorXd& w = v.cover_weights();
      for (std::size_t z = 0; z < nb.size(); ++z) {
        if (nb[z].empty() || w[z] <= 0.0) continue;
        if (nb[z].size() == 1)
          linear[nb[z][0]] += w[z];  // max over a singleton is linear
        else
          terms.push_back({w[z], 1.0, nb[z]});
      }
      return;
    }
  }
}

double threshold_search(const Eigen::VectorXd& f, const std::vector<int>& idx, double rank,
                        double eps, double bracket_tol) {
  double lo = f[idx[0]], hi = f[idx[0]];
  for (int j : idx) {
    lo = std::min(lo, f[j]);
    hi = std::max(hi, f[j]);
  }
  lo -= 1.0 + eps;
  hi += 1.0 + eps;
  auto deriv = [&](double t) {
    double d = rank;
    for (int j : idx) d -= 0.5 + 0.5 * sgn_eps(f[j] - t, eps);
    return d;
  };
  for (int it = 0; it < 200 && hi - lo > bracket_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (deriv(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double term_value(const RankTerm& term, const Eigen::VectorXd& f, double eps, double bracket_tol) {
  const double t = threshold_search(f, term.idx, term.rank, eps, bracket_tol);
  double s = term.rank * t;
  for (int j : term.idx) {
    const double u = f[j] - t;
    s += 0.5 * u + 0.5 * abs_eps(u, eps);
  }
  return term.coeff * s;
}

double smoothed_extension(const Eigen::VectorXd& linear, const std::vector<RankTerm>& terms,
                          const Eigen::VectorXd& f, double eps, double bracket_tol) {
  double s = linear.dot(f);
  for (const RankTerm& term : terms) s += term_value(term, f, eps, bracket_tol);
  return s;
}

}  // namespace detail

namespace {

// Weighted cover term of a subproblem; `nb` lists global element indices.
struct CoverTerm {
  double w;
  std::vector<int> nb;
};

// min over B of phi(offset+|B|) - phi(offset) + sum_{i in B} cost_i,
// restricted to `elems`; returns the maximal minimizer.
double concave_set_min(const Eigen::VectorXd& phi, int offset, const std::vector<int>& elems,
                       const Eigen::VectorXd& cost, double tie_tol, std::vector<int>& argmax) {
  std::vector<int> order = elems;
  std::sort(order.begin(), order.end(),
            [&cost](int x, int y) { return cost[x] < cost[y] || (cost[x] == cost[y] && x < y); });
  const int s = static_cast<int>(order.size());
  double best = 0.0;  // B = empty
  int best_size = 0;
  double prefix = 0.0;
  for (int c = 1; c <= s; ++c) {
    prefix += cost[order[c - 1]];
    const double val = phi[offset + c] - phi[offset] + prefix;
    if (val <= best + tie_tol) {  // ties go to the larger set
      best = std::min(best, val);
      best_size = c;
    }
  }
  argmax.assign(order.begin(), order.begin() + best_size);
  std::sort(argmax.begin(), argmax.end());
  return best;
}

// min over B of sum_z w_z 1{nb_z cap B nonempty} + sum_{i in B} cost_i by a
// minimum cut (elements on the sink side are selected; maximal via the
// minimal source side).
double cover_set_min(const std::vector<CoverTerm>& terms, const std::vector<int>& elems,
                     const Eigen::VectorXd& cost, std::vector<int>& argmax) {
  const int ne = static_cast<int>(elems.size());
  const int nz = static_cast<int>(terms.size());
  std::vector<int> local(cost.size(), -1);
  for (int i = 0; i < ne; ++i) local[elems[i]] = i;

  double big = 1.0;
  for (const CoverTerm& t : terms) big += t.w;
  for (int e : elems) big += std::abs(cost[e]);

  detail::MaxFlow flow(2 + ne + nz);
  const int source = 0, sink = 1;
  double constant = 0.0;
  for (int i = 0; i < ne; ++i) {
    const double c = cost[elems[i]];
    if (c > 0.0)
      flow.add_edge(source, 2 + i, c);
    else if (c < 0.0) {
      flow.add_edge(2 + i, sink, -c);
      constant += c;
    }
  }
  for (int z = 0; z < nz; ++z) {
    flow.add_edge(source, 2 + ne + z, terms[z].w);
    for (int e : terms[z].nb) flow.add_edge(2 + ne + z, 2 + local[e], big);
  }
  const double cut = flow.solve(source, sink);
  const std::vector<char> src = flow.source_side();
  argmax.clear();
  for (int i = 0; i < ne; ++i)
    if (!src[2 + i]) argmax.push_back(elems[i]);
  return cut + constant;
}

// Divide-and-conquer over the parametric problems
//   min_B V_F(B) + sum_{i in B} q_i (lambda - a_i):
// at the weighted-mean level c* the maximal minimizer A separates the
// coordinates with f* >= c* from the rest; recurse on the restriction to A
// and the contraction by A. Trivial splits mean f* is constant c* on S.
struct Splitter {
  const Eigen::VectorXd& q;
  const Eigen::VectorXd& a;
  double tie_tol;
  Eigen::VectorXd& f;

  void solve_concave(const Eigen::VectorXd& phi, int offset, std::vector<int> elems) {
    if (elems.empty()) return;
    double qsum = 0.0, qa = 0.0;
    for (int e : elems) {
      qsum += q[e];
      qa += q[e] * a[e];
    }
    const double vs = phi[offset + static_cast<int>(elems.size())] - phi[offset];
    const double level = (qa - vs) / qsum;
    Eigen::VectorXd cost(q.size());
    for (int e : elems) cost[e] = q[e] * (level - a[e]);
    std::vector<int> upper;
    concave_set_min(phi, offset, elems, cost, tie_tol, upper);
    if (upper.empty() || upper.size() == elems.size()) {
      for (int e : elems) f[e] = level;
      return;
    }
    std::vector<int> lower;
    std::set_difference(elems.begin(), elems.end(), upper.begin(), upper.end(),
                        std::back_inserter(lower));
    const int upper_size = static_cast<int>(upper.size());
    solve_concave(phi, offset, std::move(upper));
    solve_concave(phi, offset + upper_size, std::move(lower));
  }

  void solve_cover(const std::vector<CoverTerm>& terms, std::vector<int> elems) {
    if (elems.empty()) return;
    double qsum = 0.0, qa = 0.0, vs = 0.0;
    for (int e : elems) {
      qsum += q[e];
      qa += q[e] * a[e];
    }
    for (const CoverTerm& t : terms) vs += t.w;  // every term is hittable within S
    const double level = (qa - vs) / qsum;
    Eigen::VectorXd cost(q.size());
    for (int e : elems) cost[e] = q[e] * (level - a[e]);
    std::vector<int> upper;
    cover_set_min(terms, elems, cost, upper);
    if (upper.empty() || upper.size() == elems.size()) {
      for (int e : elems) f[e] = level;
      return;
    }
    std::vector<char> in_upper(q.size(), 0);
    for (int e : upper) in_upper[e] = 1;
    std::vector<int> lower;
    std::set_difference(elems.begin(), elems.end(), upper.begin(), upper.end(),
                        std::back_inserter(lower));
    // restriction to the upper part: clip neighborhoods to it
    std::vector<CoverTerm> up_terms;
    // contraction by the upper part: terms it hits are already paid for
    std::vector<CoverTerm> low_terms;
    for (const CoverTerm& t : terms) {
      CoverTerm clipped{t.w, {}};
      bool hits_upper = false;
      for (int e : t.nb) {
        if (in_upper[e]) {
          clipped.nb.push_back(e);
          hits_upper = true;
        }
      }
      if (hits_upper)
        up_terms.push_back(std::move(clipped));
      else
        low_terms.push_back(t);  // nb stays within the lower part
    }
    solve_cover(up_terms, std::move(upper));
    solve_cover(low_terms, std::move(lower));
  }
};

}  // namespace

Eigen::VectorXd separable_min(const SizeFunction& v, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& a, const SeparableMinOptions& opts) {
  const int k = v.ground_size();
  if (q.size() != k || a.size() != k) throw std::invalid_argument("separable_min: dimension mismatch");
  if ((q.array() <= 0.0).any()) throw std::invalid_argument("separable_min: q must be positive");

  if (v.family() == SizeFamily::kModular) return a - v.weights().cwiseQuotient(q);

  Eigen::VectorXd f = Eigen::VectorXd::Zero(k);
  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 0);

  if (v.family() == SizeFamily::kConcaveCardinality) {
    if (!v.has_concave_phi())
      throw std::invalid_argument("separable_min: phi must be concave non-decreasing");
    if (a.isZero(0.0)) {
      // Sort q descending; the optimizer is non-increasing along that order
      // with per-position targets -(phi(i)-phi(i-1))/q, pooled by isotonic
      // regression.
      const std::vector<int> order = sort_descending(q);
      const Eigen::VectorXd& phi = v.phi();
      Eigen::VectorXd targets(k), weights(k);
      for (int i = 0; i < k; ++i) {
        targets[i] = -(phi[i + 1] - phi[i]) / q[order[i]];
        weights[i] = q[order[i]];
      }
      const Eigen::VectorXd pooled = pava_nonincreasing(targets, weights);
      for (int i = 0; i < k; ++i) f[order[i]] = pooled[i];
      return f;
    }
    Splitter split{q, a, opts.tie_tol, f};
    split.solve_concave(v.phi(), 0, std::move(all));
    return f;
  }

  // set cover
  std::vector<CoverTerm> terms;
  const auto& nb = v.neighborhoods();
  const Eigen::VectorXd& w = v.cover_weights();
  for (std::size_t z = 0; z < nb.size(); ++z)
    if (!nb[z].empty() && w[z] > 0.0) terms.push_back({w[z], nb[z]});
  Splitter split{q, a, opts.tie_tol, f};
  split.solve_cover(terms, std::move(all));
  return f;
}

Eigen::VectorXd separable_min(const SizeFunction& v, const Eigen::VectorXd& q,
                              const SeparableMinOptions& opts) {
  return separable_min(v, q, Eigen::VectorXd::Zero(v.ground_size()), opts);
}

double separable_objective(const SizeFunction& v, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& a, const Eigen::VectorXd& f) {
  return v.lovasz(f) + 0.5 * (q.array() * (f - a).array().square()).sum();
}

}  // namespace setpred
