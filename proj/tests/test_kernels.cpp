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

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "setpred/errors.hpp"
#include "setpred/feature_map.hpp"
#include "setpred/kernel.hpp"
#include "setpred/rng.hpp"

using namespace setpred;

namespace {

Eigen::MatrixXd random_ball_points(Philox& rng, int n, int d) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = rng.normal_vector(d);
    const double r = std::pow(rng.uniform(), 1.0 / d);
    x.row(i) = (r / v.norm()) * v.transpose();
  }
  return x;
}

}  // namespace

TEST_CASE("gram: diagonal and polynomial values") {
  Philox rng(3, 1);
  const Eigen::MatrixXd x = random_ball_points(rng, 20, 3);
  const Eigen::MatrixXd ke = gram(KernelSpec::exponential(0.7), x, x);
  for (int i = 0; i < 20; ++i) CHECK(ke(i, i) == doctest::Approx(1.0));
  CHECK((ke - ke.transpose()).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 1, 0;
  b << 0, 1;
  CHECK(gram(KernelSpec::polynomial(1.0, 1), a, b)(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(gram(KernelSpec::exponential(1.0), a, Eigen::MatrixXd::Zero(1, 3)),
                  std::invalid_argument);
}

TEST_CASE("negative-distance shift makes the Gram matrix PSD on bounded data") {
  Philox rng(5, 2);
  const Eigen::MatrixXd x = random_ball_points(rng, 50, 2);
  const double shift = negative_distance_shift(x);
  const Eigen::MatrixXd k = gram(KernelSpec::negative_distance(shift), x, x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("incomplete_cholesky: rank-one input selects one pivot") {
  Eigen::MatrixXd x(30, 2);
  for (int i = 0; i < 30; ++i) x.row(i) << 0.4, -0.2;  // all identical
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), x, 1e-6);
  CHECK(map.rank() == 1);
}

TEST_CASE("incomplete_cholesky: loose tolerance keeps at most one pivot") {
  Philox rng(7, 3);
  const Eigen::MatrixXd x = random_ball_points(rng, 40, 2);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), x, 0.999);
  CHECK(map.rank() <= 1);
}

TEST_CASE("incomplete_cholesky: trace bound and Nystrom consistency at 1e-3") {
  Philox rng(11, 4);
  const int n = 200;
  const Eigen::MatrixXd x = random_ball_points(rng, n, 3);
  const KernelSpec spec = KernelSpec::exponential(1.0);
  const FeatureMap map = incomplete_cholesky(spec, x, 1e-3, /*intercept=*/false);
  const Eigen::MatrixXd k = gram(spec, x, x);

  const Eigen::MatrixXd phi = map.embed_all(x);
  const Eigen::MatrixXd khat = phi * phi.transpose();
  CHECK((k - khat).trace() <= 1e-3 * k.trace() + 1e-12);
  // residual stays positive semidefinite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k - khat);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
  // exact on the pivot block
  for (int a : map.pivots)
    for (int b : map.pivots)
      CHECK(khat(a, b) == doctest::Approx(k(a, b)).epsilon(1e-8));

  // Nystrom formula at fresh points
  const Eigen::MatrixXd xq = random_ball_points(rng, 7, 3);
  const Eigen::MatrixXd kqi = gram(spec, xq, map.pivot_inputs);
  const Eigen::MatrixXd kii = gram(spec, map.pivot_inputs, map.pivot_inputs);
  const Eigen::MatrixXd nystrom = kqi * kii.llt().solve(kqi.transpose());
  const Eigen::MatrixXd phiq = map.embed_all(xq);
  CHECK((phiq * phiq.transpose() - nystrom).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("embed: single-pivot normalization") {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 0.0, 0.0;
  const KernelSpec spec = KernelSpec::exponential(2.0);
  const FeatureMap map = incomplete_cholesky(spec, x, 1e-6, false);
  REQUIRE(map.rank() == 1);
  Eigen::VectorXd q(1);
  q << 0.8;
  const double k00 = spec.eval(map.pivot_inputs.row(0), map.pivot_inputs.row(0));
  CHECK(map.embed(q)[0] ==
        doctest::Approx(spec.eval(q, map.pivot_inputs.row(0)) / std::sqrt(k00)));
}

TEST_CASE("embed appends the constant coordinate when the intercept is on") {
  Philox rng(13, 5);
  const Eigen::MatrixXd x = random_ball_points(rng, 25, 2);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), x, 1e-3, true);
  const Eigen::VectorXd phi = map.embed(x.row(3).transpose());
  CHECK(phi.size() == map.rank() + 1);
  CHECK(phi[map.rank()] == 1.0);
}

TEST_CASE("spline configuration extrapolates linearly in one dimension") {
  Philox rng(17, 6);
  const int n = 60;
  Eigen::MatrixXd x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = rng.uniform(-1.0, 1.0);
  KernelSpec spec = KernelSpec::spline();  // shift derived from data
  const FeatureMap map = incomplete_cholesky(spec, x, 1e-8, true);
  // beyond the data range every feature coordinate is affine in x
  for (double base : {1.5, 2.5, 3.5}) {
    Eigen::VectorXd a(1), b(1), c(1);
    a << base;
    b << base + 0.5;
    c << base + 1.0;
    const Eigen::VectorXd second =
        map.embed(a) - 2.0 * map.embed(b) + map.embed(c);
    CHECK(second.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("feature map JSON round trip preserves embeddings") {
  Philox rng(19, 7);
  const Eigen::MatrixXd x = random_ball_points(rng, 30, 2);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(0.5), x, 1e-4, true);
  const FeatureMap back = FeatureMap::from_json(map.to_json());
  const Eigen::VectorXd q = rng.normal_vector(2);
  CHECK((map.embed(q) - back.embed(q)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("incomplete_cholesky rejects indefinite effective kernels") {
  Eigen::MatrixXd x(10, 1);
  for (int i = 0; i < 10; ++i) x(i, 0) = i;
  // an undersized shift leaves the matrix indefinite
  CHECK_THROWS_AS(incomplete_cholesky(KernelSpec::negative_distance(0.1), x, 1e-4),
                  NumericalError);
}
