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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "setpred/pava.hpp"
#include "setpred/separable_min.hpp"
#include "setpred/size_function.hpp"
#include "test_helpers.hpp"

using namespace setpred;
using namespace setpred::testing;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

const SizeFunction kCover3 = SizeFunction::dilation_cover(3, 1);

}  // namespace

TEST_CASE("evaluate: modular, concave, cover") {
  const SizeFunction m = SizeFunction::modular(vec({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(m.value({0, 1}) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(m.value({}) == 0.0);

  const SizeFunction c = SizeFunction::concave_cardinality(3, vec({0, 1, 2, 2}));
  CHECK(c.value({0, 1, 2}) == doctest::Approx(2.0));
  CHECK(c.value({}) == 0.0);

  // dilation of {1} with radius 1 covers all three cover points
  CHECK(kCover3.value({1}) == doctest::Approx(1.0));
  CHECK(kCover3.value({0}) == doctest::Approx(2.0 / 3));
  CHECK(kCover3.total() == doctest::Approx(1.0));
}

TEST_CASE("lovasz: worked examples") {
  const SizeFunction m = SizeFunction::modular(vec({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(m.lovasz(vec({3, 1, 2})) == doctest::Approx(2.0));

  const SizeFunction c = SizeFunction::concave_cardinality(3, vec({0, 1, 2, 2}));
  const Eigen::VectorXd f = vec({0.5, 0.2, -0.1});
  CHECK(extension_by_quadrature(c, f) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(c.lovasz(f) == doctest::Approx(0.7).epsilon(1e-12));

  CHECK(kCover3.lovasz(vec({0, 1, 0})) == doctest::Approx(kCover3.value({1})));
}

TEST_CASE("lovasz rejects non-finite scores") {
  const SizeFunction m = SizeFunction::uniform_cardinality(2);
  Eigen::VectorXd f = vec({1.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(m.lovasz(f), std::invalid_argument);
  f[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(m.lovasz(f), std::invalid_argument);
}

TEST_CASE("extension property: lovasz(1_A) = V(A) for all subsets") {
  Philox rng(7, 1);
  for (int k : {1, 2, 4, 6}) {
    for (int rep = 0; rep < 3; ++rep) {
      const SizeFunction v = random_size_function(rng, k);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Eigen::VectorXd ind = Eigen::VectorXd::Zero(k);
        for (int i = 0; i < k; ++i)
          if (mask & (std::uint64_t{1} << i)) ind[i] = 1.0;
        CHECK(v.lovasz(ind) ==
              doctest::Approx(v.value(mask_to_set(mask, k))).epsilon(0).scale(1).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("greedy subgradient: optimality and core membership") {
  Philox rng(11, 2);
  const int k = 6;
  for (int rep = 0; rep < 20; ++rep) {
    const SizeFunction v = random_size_function(rng, k);
    Eigen::VectorXd f(k);
    for (int i = 0; i < k; ++i) f[i] = rng.uniform(-5.0, 5.0);
    const Eigen::VectorXd mu = v.greedy_subgradient(f);
    CHECK(mu.dot(f) == doctest::Approx(v.lovasz(f)).epsilon(1e-12));
    CHECK(mu.sum() == doctest::Approx(v.total()).epsilon(1e-12));
    CHECK(check_dominated(v, mu, 1e-9));
    CHECK((mu.array() >= -1e-12).all());
  }
}

TEST_CASE("greedy: modular recovers weights; concave worked example; tie handling") {
  Philox rng(13, 3);
  const SizeFunction m = random_modular(rng, 5);
  Eigen::VectorXd f(5);
  for (int i = 0; i < 5; ++i) f[i] = rng.uniform(-1.0, 1.0);
  CHECK((m.greedy_subgradient(f) - m.weights()).cwiseAbs().maxCoeff() < 1e-12);

  const SizeFunction c = SizeFunction::concave_cardinality(3, vec({0, 1, 2, 2}));
  const Eigen::VectorXd mu = c.greedy_subgradient(vec({0.5, 0.2, -0.1}));
  CHECK(mu[0] == doctest::Approx(1.0));
  CHECK(mu[1] == doctest::Approx(1.0));
  CHECK(mu[2] == doctest::Approx(0.0));

  // constant scores: any consistent order is fine but mu'f must equal v(f)
  const Eigen::VectorXd fc = Eigen::VectorXd::Constant(3, 0.7);
  CHECK(c.greedy_subgradient(fc).dot(fc) == doctest::Approx(0.7 * c.total()));
}

TEST_CASE("subgradient inequality on random pairs") {
  Philox rng(17, 4);
  const int k = 5;
  for (const char* fam : {"modular", "concave", "cover"}) {
    SizeFunction v = fam[0] == 'm' ? random_modular(rng, k)
                     : fam[0] == 'c' && fam[1] == 'o' ? random_concave(rng, k)
                                                      : random_cover(rng, k);
    REQUIRE(check_submodular(v));
    for (int rep = 0; rep < 1000; ++rep) {
      Eigen::VectorXd f(k), fp(k);
      for (int i = 0; i < k; ++i) {
        f[i] = rng.uniform(-5.0, 5.0);
        fp[i] = rng.uniform(-5.0, 5.0);
      }
      const Eigen::VectorXd mu = v.greedy_subgradient(f);
      CHECK(v.lovasz(fp) >= v.lovasz(f) + mu.dot(fp - f) - 1e-9);
    }
  }
}

TEST_CASE("quadrature agreement on random scores") {
  Philox rng(19, 5);
  for (int k : {2, 3, 5, 7}) {
    for (int rep = 0; rep < 10; ++rep) {
      const SizeFunction v = random_size_function(rng, k);
      Eigen::VectorXd f(k);
      for (int i = 0; i < k; ++i) f[i] = rng.uniform(-5.0, 5.0);
      CHECK(v.lovasz(f) == doctest::Approx(extension_by_quadrature(v, f)).epsilon(1e-6));
    }
  }
}

TEST_CASE("integrated-loss identity: hand-worked k=2 anchor equals -1/4") {
  const SizeFunction v = SizeFunction::uniform_cardinality(2);  // V = |A|/2
  const Eigen::VectorXd q = vec({0.5, 0.5});
  const Eigen::VectorXd h = vec({-1.0, -2.0});
  const double lhs = integrated_loss_by_quadrature(v, q, h);
  const double rhs = v.lovasz(h) + 0.5 * (q.array() * h.array().square()).sum();
  CHECK(lhs == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(rhs == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("integrated-loss identity on random non-positive scores") {
  Philox rng(23, 6);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 2 + static_cast<int>(rng.uniform_index(5));
    const SizeFunction v = random_size_function(rng, k);
    Eigen::VectorXd q(k), h(k);
    for (int i = 0; i < k; ++i) {
      q[i] = rng.uniform(0.1, 2.0);
      h[i] = -rng.uniform(0.0, 3.0);
    }
    const double lhs = integrated_loss_by_quadrature(v, q, h);
    const double rhs = v.lovasz(h) + 0.5 * (q.array() * h.array().square()).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("separable_min: modular closed form") {
  const SizeFunction v = SizeFunction::modular(vec({0.5, 0.5}));
  const Eigen::VectorXd f = separable_min(v, vec({0.5, 0.5}));
  CHECK(f[0] == doctest::Approx(-1.0));
  CHECK(f[1] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(separable_min(v, vec({0.5, 0.0})), std::invalid_argument);
}

TEST_CASE("separable_min: min(i,1) penalty collapses to constant -1") {
  Philox rng(29, 7);
  for (int k : {2, 4, 7}) {
    Eigen::VectorXd phi(k + 1);
    for (int i = 0; i <= k; ++i) phi[i] = std::min(i, 1);
    const SizeFunction v = SizeFunction::concave_cardinality(k, phi);
    const Eigen::VectorXd pi = random_probability(rng, k);
    const Eigen::VectorXd f = separable_min(v, pi);
    for (int i = 0; i < k; ++i) CHECK(f[i] == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("separable_min: min(i,2) with a dominant class keeps it strictly on top") {
  Eigen::VectorXd phi(4);
  phi << 0, 1, 2, 2;
  const SizeFunction v = SizeFunction::concave_cardinality(3, phi);
  const Eigen::VectorXd pi = vec({0.6, 0.2, 0.2});
  const Eigen::VectorXd f = separable_min(v, pi);
  CHECK(f[0] > f[1] + 1e-9);
  CHECK(f[1] == doctest::Approx(f[2]).epsilon(1e-12));
  // crude averaged-subgradient descent as an independent check
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3), avg = Eigen::VectorXd::Zero(3);
  int count = 0;
  for (int t = 1; t <= 60000; ++t) {
    const Eigen::VectorXd grad = v.greedy_subgradient(g) + (pi.array() * g.array()).matrix();
    g -= (2.0 / std::sqrt(1.0 + t)) * grad;
    if (t > 30000) {
      avg += g;
      ++count;
    }
  }
  avg /= count;
  CHECK((avg - f).cwiseAbs().maxCoeff() < 2e-2);
}

TEST_CASE("separable_min matches the level-set oracle on random instances") {
  Philox rng(31, 8);
  for (int rep = 0; rep < 12; ++rep) {
    const int k = 3 + static_cast<int>(rng.uniform_index(3));
    const SizeFunction v = random_size_function(rng, k);
    const Eigen::VectorXd q = random_probability(rng, k, 0.05);
    const Eigen::VectorXd f = separable_min(v, q);
    const Eigen::VectorXd oracle =
        separable_min_by_level_sets(v, q, Eigen::VectorXd::Zero(k));
    CHECK((f - oracle).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("separable_min: level sets solve the parametric set problems") {
  Philox rng(37, 9);
  for (int rep = 0; rep < 8; ++rep) {
    const int k = 3 + static_cast<int>(rng.uniform_index(3));
    const SizeFunction v = random_size_function(rng, k);
    const Eigen::VectorXd q = random_probability(rng, k, 0.05);
    Eigen::VectorXd a(k);
    for (int i = 0; i < k; ++i) a[i] = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd f = separable_min(v, q, a);
    for (int s = 0; s < 15; ++s) {
      const double lam = rng.uniform(f.minCoeff() - 0.3, f.maxCoeff() + 0.3);
      Eigen::VectorXd add(k);
      for (int i = 0; i < k; ++i) add[i] = q[i] * (lam - a[i]);
      const double best = brute_set_min(v, add);
      const std::vector<int> cand = level_set(f, lam);
      double cval = v.value(cand);
      for (int i : cand) cval += add[i];
      CHECK(cval <= best + 1e-8);
    }
  }
}

TEST_CASE("pava: worked examples and idempotence") {
  CHECK((pava_nonincreasing(vec({1, 2}), vec({1, 1})) - vec({1.5, 1.5})).cwiseAbs().maxCoeff() <
        1e-15);
  const Eigen::VectorXd mono = vec({3, 2, 2, 0.5});
  CHECK((pava_nonincreasing(mono, vec({1, 2, 1, 1})) - mono).cwiseAbs().maxCoeff() == 0.0);
  Philox rng(41, 10);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd t(10), w(10);
    for (int i = 0; i < 10; ++i) {
      t[i] = rng.uniform(-2.0, 2.0);
      w[i] = rng.uniform(0.1, 3.0);
    }
    const Eigen::VectorXd out = pava_nonincreasing(t, w);
    CHECK((pava_nonincreasing(out, w) - out).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::VectorXd oracle = pava_by_partitions(t, w);
    CHECK((out - oracle).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i + 1 < 10; ++i) CHECK(out[i] >= out[i + 1] - 1e-12);
  }
}

TEST_CASE("check_submodular accepts the shipped families and rejects convex phi") {
  CHECK(check_submodular(SizeFunction::concave_cardinality(2, vec({0, 1, 2}))));
  CHECK_FALSE(check_submodular(SizeFunction::concave_cardinality(2, vec({0, 1, 3}))));
  Philox rng(43, 11);
  for (int rep = 0; rep < 5; ++rep) CHECK(check_submodular(random_cover(rng, 6)));
  CHECK_THROWS_AS(check_submodular(SizeFunction::uniform_cardinality(13)), std::invalid_argument);
}

TEST_CASE("convexity of the extension tracks submodularity") {
  Philox rng(47, 12);
  const SizeFunction good = SizeFunction::concave_cardinality(3, vec({0, 1, 1.8, 2.2}));
  REQUIRE(check_submodular(good));
  for (int rep = 0; rep < 10000; ++rep) {
    Eigen::VectorXd f(3), g(3);
    for (int i = 0; i < 3; ++i) {
      f[i] = rng.uniform(-3.0, 3.0);
      g[i] = rng.uniform(-3.0, 3.0);
    }
    CHECK(good.lovasz(0.5 * (f + g)) <= 0.5 * good.lovasz(f) + 0.5 * good.lovasz(g) + 1e-9);
  }

  const SizeFunction bad = SizeFunction::concave_cardinality(3, vec({0, 1, 3, 6}));
  REQUIRE_FALSE(check_submodular(bad));
  bool violated = false;
  for (int rep = 0; rep < 10000 && !violated; ++rep) {
    Eigen::VectorXd f(3), g(3);
    for (int i = 0; i < 3; ++i) {
      f[i] = rng.uniform(-3.0, 3.0);
      g[i] = rng.uniform(-3.0, 3.0);
    }
    violated = bad.lovasz(0.5 * (f + g)) > 0.5 * bad.lovasz(f) + 0.5 * bad.lovasz(g) + 1e-9;
  }
  CHECK(violated);
}

TEST_CASE("dominated measures dominate") {
  Philox rng(53, 13);
  for (int rep = 0; rep < 10; ++rep) {
    const int k = 2 + static_cast<int>(rng.uniform_index(5));
    const SizeFunction v = random_size_function(rng, k);
    CHECK(check_dominated(v, v.dominated_measure()));
  }
}

TEST_CASE("size function JSON round trip") {
  Philox rng(59, 14);
  for (int rep = 0; rep < 6; ++rep) {
    const SizeFunction v = random_size_function(rng, 5);
    const SizeFunction w = SizeFunction::from_json(v.to_json());
    CHECK(v.signature() == w.signature());
  }
}
