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

#include <chrono>
#include <cmath>

#include <Eigen/Dense>

#include "setpred/cg.hpp"
#include "setpred/generators.hpp"
#include "setpred/loss.hpp"
#include "setpred/train.hpp"
#include "test_helpers.hpp"

using namespace setpred;
using namespace setpred::testing;

namespace {

FeatureMap intercept_only_map() {
  FeatureMap map;
  map.kernel = KernelSpec::exponential(1.0);
  map.pivot_inputs.resize(0, 1);
  map.G.resize(0, 0);
  map.intercept = true;
  return map;
}

// Two input atoms at -1 and 1 with labels drawn from fixed conditionals;
// exact per-atom optima are separable problems on the empirical frequencies.
Dataset two_atom_dataset(Philox& rng, int n, const Eigen::VectorXd& pi0,
                         const Eigen::VectorXd& pi1) {
  Dataset data;
  data.X.resize(n, 1);
  data.labels.resize(n);
  data.y_real.resize(n);
  for (int i = 0; i < n; ++i) {
    const bool right = rng.uniform() < 0.5;
    data.X(i, 0) = right ? 1.0 : -1.0;
    data.labels[i] = rng.categorical(right ? pi1 : pi0);
    data.y_real[i] = data.labels[i];
  }
  return data;
}

Eigen::VectorXd atom_frequencies(const Dataset& data, double atom, int k) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < data.size(); ++i)
    if (data.X(i, 0) == atom) counts[data.labels[i]] += 1.0;
  return counts / counts.sum();
}

Gauss1DSpec default_gauss() {
  Gauss1DSpec spec;
  spec.means = Eigen::Vector3d(-2.0, 0.0, 2.0);
  spec.stds = Eigen::Vector3d(1.0, 1.0, 1.0);
  spec.priors = Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3);
  return spec;
}

}  // namespace

TEST_CASE("conjugate gradient matches the direct solve on random SPD systems") {
  Philox rng(3, 1);
  for (int d : {20, 120, 500}) {
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
    Eigen::MatrixXd spd = a.transpose() * a / d + Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd b = rng.normal_vector(d);
    Eigen::VectorXd direct = spd.ldlt().solve(b);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd diag = spd.diagonal();
    MatVec apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out = spd * in; };
    const CgResult res = conjugate_gradient(apply, b, x, 1e-12, -1, &diag);
    CHECK(res.converged);
    CHECK((x - direct).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("train_modular: one-class intercept-only model fits the stationary constant") {
  Dataset data;
  data.X.resize(50, 1);
  data.labels = Eigen::VectorXi::Zero(50);
  data.y_real = Eigen::VectorXd::Zero(50);
  for (int i = 0; i < 50; ++i) data.X(i, 0) = i * 0.01;
  const SizeFunction v = SizeFunction::modular(Eigen::VectorXd::Constant(1, 0.7));
  TrainOptions opts;
  opts.lambda_reg = 1e-3;
  opts.eps_smooth = 0.0;
  const LinearPredictor model = train_modular(data, v, intercept_only_map(), opts);
  CHECK(model.scores(data.X.row(0).transpose())[0] == doctest::Approx(-0.7).epsilon(1e-10));
}

TEST_CASE("train_modular: recovers the inverse-conditional optimum on dense data") {
  const Generator gen = Generator::gauss1d(default_gauss(), 2024);
  const Dataset train = gen.sample(4000, streams::kTrain);
  const SizeFunction v = SizeFunction::uniform_cardinality(3);
  const FeatureMap map = incomplete_cholesky(KernelSpec::spline(), train.X, 1e-4);
  TrainOptions opts;
  opts.lambda_reg = 1e-6;
  opts.eps_smooth = 1e-3;
  const LinearPredictor model = train_modular(train, v, map, opts);
  const Eigen::VectorXd msmooth = v.dominated_measure();
  double worst = 0.0;
  for (double x = -0.5; x <= 0.5; x += 0.05) {
    const Eigen::VectorXd pi = gen.true_conditional(x);
    const Eigen::VectorXd g = model.scores(Eigen::VectorXd::Constant(1, x));
    for (int j = 0; j < 3; ++j) {
      const double target = -(1.0 / 3) / (pi[j] + opts.eps_smooth * msmooth[j]);
      worst = std::max(worst, std::abs(g[j] - target));
    }
  }
  CHECK(worst < 0.1);
}

TEST_CASE("train_modular: per-label cost scales linearly in the number of labels") {
  Philox rng(5, 2);
  const int n = 3000;
  Eigen::MatrixXd x(n, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) x(i, c) = rng.normal();
  const FeatureMap map = incomplete_cholesky(KernelSpec::polynomial(1.0, 2), x, 1e-8);

  auto time_k = [&](int k) {
    Dataset data;
    data.X = x;
    data.labels.resize(n);
    data.y_real.resize(n);
    for (int i = 0; i < n; ++i) {
      data.labels[i] = static_cast<int>(rng.uniform_index(k));
      data.y_real[i] = data.labels[i];
    }
    const SizeFunction v = SizeFunction::uniform_cardinality(k);
    TrainOptions opts;
    opts.lambda_reg = 1e-4;
    double best = 1e100;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      (void)train_modular(data, v, map, opts);
      const auto t1 = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
  };
  const double t8 = time_k(8);
  const double t16 = time_k(16);
  CHECK(t16 / t8 > 1.3);
  CHECK(t16 / t8 < 2.7);
}

TEST_CASE("train_concave_irls: linear phi reproduces the modular fit") {
  Philox rng(7, 3);
  const Generator gen = Generator::gauss1d(default_gauss(), 7);
  const Dataset train = gen.sample(400, streams::kTrain);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), train.X, 1e-3);

  Eigen::VectorXd phi_lin(4);
  for (int i = 0; i <= 3; ++i) phi_lin[i] = 0.4 * i;
  const SizeFunction vc = SizeFunction::concave_cardinality(3, phi_lin);
  const SizeFunction vm = SizeFunction::modular(Eigen::VectorXd::Constant(3, 0.4));

  TrainOptions opts;
  opts.lambda_reg = 1e-4;
  const TrainResult concave = train_concave_irls(train, vc, map, opts);
  const LinearPredictor modular = train_modular(train, vm, map, opts);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, -2.0 + 0.2 * i);
    CHECK((concave.predictor.scores(x) - modular.scores(x)).cwiseAbs().maxCoeff() < 1e-6);
  }
  // rejects non-concave phi
  Eigen::VectorXd bad(4);
  bad << 0, 1, 3, 6;
  CHECK_THROWS_AS(
      train_concave_irls(train, SizeFunction::concave_cardinality(3, bad), map, opts),
      std::invalid_argument);
}

TEST_CASE("train_concave_irls: matches the exact separable optimum on atom data") {
  Philox rng(11, 4);
  Eigen::VectorXd pi0(3), pi1(3);
  pi0 << 0.6, 0.2, 0.2;
  pi1 << 0.2, 0.5, 0.3;
  const Dataset data = two_atom_dataset(rng, 4000, pi0, pi1);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), data.X, 1e-10);

  Eigen::VectorXd phi(4);
  phi << 0, 1, 2, 2;  // min(i, 2)
  const SizeFunction v = SizeFunction::concave_cardinality(3, phi);
  TrainOptions opts;
  opts.lambda_reg = 1e-9;
  opts.eps_smooth = 0.0;
  opts.eta_floor = 1e-7;
  const TrainResult result = train_concave_irls(data, v, map, opts);

  for (double atom : {-1.0, 1.0}) {
    const Eigen::VectorXd freq = atom_frequencies(data, atom, 3);
    const Eigen::VectorXd expect = separable_min(v, freq);
    const Eigen::VectorXd got = result.predictor.scores(Eigen::VectorXd::Constant(1, atom));
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-4);
  }
  for (std::size_t t = 1; t < result.trace.size(); ++t)
    CHECK(result.trace[t] <= result.trace[t - 1] + 1e-9);
}

TEST_CASE("train_concave_irls: min(i,1) collapses the scores toward -1") {
  Philox rng(13, 5);
  Eigen::VectorXd pi0(3), pi1(3);
  pi0 << 0.5, 0.3, 0.2;
  pi1 << 0.1, 0.6, 0.3;
  const Dataset data = two_atom_dataset(rng, 2000, pi0, pi1);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), data.X, 1e-10);
  Eigen::VectorXd phi(4);
  phi << 0, 1, 1, 1;
  const SizeFunction v = SizeFunction::concave_cardinality(3, phi);
  TrainOptions opts;
  opts.lambda_reg = 1e-9;
  opts.eps_smooth = 0.0;
  const TrainResult result = train_concave_irls(data, v, map, opts);
  for (double atom : {-1.0, 1.0}) {
    const Eigen::VectorXd got = result.predictor.scores(Eigen::VectorXd::Constant(1, atom));
    for (int j = 0; j < 3; ++j) CHECK(got[j] == doctest::Approx(-1.0).epsilon(1e-3));
  }
}

TEST_CASE("train_cover_irls: radius zero equals the modular trainer") {
  const Generator gen =
      Generator::regression1d(Regression1DSpec{{0.0, 1.0, 8}, 0.25, 0.1, 0.7, 0.15,
                                               0.04, 0.03, 0.05, 0.35, 0.3},
                              3);
  const Dataset train = gen.sample(300, streams::kTrain);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), train.X, 1e-4);
  const SizeFunction cover = SizeFunction::dilation_cover(8, 0);
  const SizeFunction modular = SizeFunction::modular(cover.dominated_measure());
  TrainOptions opts;
  opts.lambda_reg = 1e-4;
  const TrainResult a = train_cover_irls(train, cover, map, LaplacianPenalty::none(), opts);
  const LinearPredictor b = train_modular(train, modular, map, opts);
  CHECK((a.predictor.weights - b.weights).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("train_cover_irls: matches the exact separable optimum on atom data") {
  Philox rng(17, 6);
  Eigen::VectorXd pi0(5), pi1(5);
  pi0 << 0.35, 0.05, 0.3, 0.05, 0.25;
  pi1 << 0.1, 0.4, 0.1, 0.3, 0.1;
  const Dataset data = two_atom_dataset(rng, 4000, pi0, pi1);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), data.X, 1e-10);
  const SizeFunction v = SizeFunction::dilation_cover(5, 1);
  TrainOptions opts;
  opts.lambda_reg = 1e-9;
  opts.eps_smooth = 0.0;
  opts.eta_floor = 1e-7;
  const TrainResult result = train_cover_irls(data, v, map, LaplacianPenalty::none(), opts);
  for (double atom : {-1.0, 1.0}) {
    const Eigen::VectorXd freq = atom_frequencies(data, atom, 5);
    const Eigen::VectorXd expect = separable_min(v, freq);
    const Eigen::VectorXd got = result.predictor.scores(Eigen::VectorXd::Constant(1, atom));
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("train_cover_irls: growing radius flattens the fitted scores") {
  const Generator gen = Generator::regression1d(Regression1DSpec{}, 11);
  const Dataset train = gen.sample(700, streams::kTrain);
  const int k = gen.k();
  const FeatureMap map = incomplete_cholesky(KernelSpec::spline(), train.X, 1e-4);
  TrainOptions opts;
  opts.lambda_reg = 1e-5;

  auto distinct_values = [&](const LinearPredictor& model) {
    int total = 0;
    for (double x : {0.25, 0.5, 0.75}) {
      Eigen::VectorXd g = model.scores(Eigen::VectorXd::Constant(1, x));
      std::vector<double> vals(g.data(), g.data() + k);
      std::sort(vals.begin(), vals.end());
      int distinct = 1;
      for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] - vals[i - 1] > 1e-6) ++distinct;
      total += distinct;
    }
    return total;
  };

  std::vector<int> counts;
  for (int radius : {0, 2, 5}) {
    const SizeFunction v = SizeFunction::dilation_cover(k, radius);
    const TrainResult result = train_cover_irls(train, v, map, LaplacianPenalty::none(), opts);
    counts.push_back(distinct_values(result.predictor));
    for (std::size_t t = 1; t < result.trace.size(); ++t)
      CHECK(result.trace[t] <= result.trace[t - 1] + 1e-9);
  }
  CHECK(counts[1] <= counts[0]);
  CHECK(counts[2] <= counts[1]);
  CHECK(counts[2] < counts[0]);
}

TEST_CASE("train_cover_irls: Laplacian-coupled system agrees between CG and dense paths") {
  const Generator gen = Generator::regression1d(Regression1DSpec{{0.0, 1.0, 10}, 0.25, 0.1, 0.7,
                                                                 0.15, 0.04, 0.03, 0.05, 0.35,
                                                                 0.3},
                                                13);
  const Dataset train = gen.sample(250, streams::kTrain);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), train.X, 1e-3);
  const SizeFunction v = SizeFunction::dilation_cover(10, 1);
  const LaplacianPenalty lap = LaplacianPenalty::chain(10, 0.1, 0.05);
  TrainOptions opts;
  opts.lambda_reg = 1e-4;
  opts.max_iter = 40;
  TrainOptions opts_cg = opts;
  opts_cg.use_cg = true;
  const TrainResult dense = train_cover_irls(train, v, map, lap, opts);
  const TrainResult cg = train_cover_irls(train, v, map, lap, opts_cg);
  CHECK((dense.predictor.weights - cg.predictor.weights).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(train_cover_irls(train, v, map, lap, opts).trace.back() <=
        train_cover_irls(train, v, map, LaplacianPenalty::none(), opts).trace.back() + 1.0);
  // empty neighborhoods are rejected
  CHECK_THROWS_AS(train_cover_irls(train, SizeFunction::set_cover(10, {{}}, Eigen::VectorXd::Ones(1)),
                                   map, lap, opts),
                  std::invalid_argument);
}

TEST_CASE("stochastic subgradients are unbiased") {
  Philox rng(19, 7);
  for (const char* fam : {"modular", "concave", "cover"}) {
    const int k = 6;
    SizeFunction v = fam[0] == 'm' ? random_modular(rng, k)
                     : fam[1] == 'o' && fam[0] == 'c' ? random_cover(rng, k)
                                                      : random_concave(rng, k);
    Eigen::VectorXd g(k);
    for (int i = 0; i < k; ++i) g[i] = rng.uniform(-2.0, 2.0);
    const int y = static_cast<int>(rng.uniform_index(k));
    const double eps = 1e-2;
    const Eigen::VectorXd exact = exact_score_subgradient(v, eps, g, y);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
    const int samples = 100000;
    for (int s = 0; s < samples; ++s) mean += stochastic_score_subgradient(v, eps, g, y, rng);
    mean /= samples;
    CHECK((mean - exact).norm() / std::max(exact.norm(), 1e-12) < 1e-2);
  }
}

TEST_CASE("sgd_train: zero steps leave the model untouched; averaged run tracks the exact fit") {
  const Generator gen = Generator::gauss1d(default_gauss(), 23);
  const Dataset train = gen.sample(500, streams::kTrain);
  const Dataset test = gen.sample(2000, streams::kTest);
  const SizeFunction v = SizeFunction::uniform_cardinality(3);
  const FeatureMap map = incomplete_cholesky(KernelSpec::exponential(1.0), train.X, 1e-2);

  LinearScoreModel model(map, 3);
  SgdSchedule schedule;
  schedule.steps = 0;
  sgd_train(train, v, 0.0, model, schedule, 5);
  CHECK(model.parameters().cwiseAbs().maxCoeff() == 0.0);

  TrainOptions opts;
  opts.lambda_reg = 1e-4;
  opts.eps_smooth = 1e-2;
  const LinearPredictor direct = train_modular(train, v, map, opts);

  schedule.steps = 400000;
  schedule.step0 = 0.3;
  schedule.decay_after = 2000.0;
  schedule.lambda_reg = opts.lambda_reg;
  sgd_train(train, v, opts.eps_smooth, model, schedule, 5);
  const LinearPredictor sgd = model.to_predictor();

  const Eigen::VectorXd msmooth = v.dominated_measure();
  double risk_direct = 0.0, risk_sgd = 0.0;
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    const Eigen::VectorXd x = test.X.row(i).transpose();
    risk_direct += choquet_loss(v, direct.scores(x), test.labels[i], opts.eps_smooth, msmooth);
    risk_sgd += choquet_loss(v, sgd.scores(x), test.labels[i], opts.eps_smooth, msmooth);
  }
  risk_direct /= test.size();
  risk_sgd /= test.size();
  CHECK(std::abs(risk_sgd - risk_direct) < 1e-2);
}

TEST_CASE("square baseline: symmetric two-class data crosses at one half") {
  Philox rng(29, 8);
  Dataset data;
  const int n = 4000;
  data.X.resize(n, 1);
  data.labels.resize(n);
  data.y_real.resize(n);
  for (int i = 0; i < n; ++i) {
    const int y = static_cast<int>(rng.uniform_index(2));
    data.X(i, 0) = (y == 0 ? -1.0 : 1.0) + rng.normal();
    data.labels[i] = y;
    data.y_real[i] = y;
  }
  const FeatureMap map = incomplete_cholesky(KernelSpec::spline(), data.X, 1e-4);
  const LinearPredictor model = train_square_baseline(data, 2, map, 1e-5);
  const Eigen::VectorXd g = model.scores(Eigen::VectorXd::Zero(1));
  CHECK(g[0] == doctest::Approx(0.5).epsilon(0.08));
  CHECK(g[1] == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("softmax baseline: separable toy reaches full training accuracy") {
  Philox rng(31, 9);
  Dataset data;
  const int n = 300;
  data.X.resize(n, 1);
  data.labels.resize(n);
  data.y_real.resize(n);
  for (int i = 0; i < n; ++i) {
    const int y = static_cast<int>(rng.uniform_index(2));
    data.X(i, 0) = (y == 0 ? -1.0 : 1.0) + 0.3 * rng.uniform();
    data.labels[i] = y;
    data.y_real[i] = y;
  }
  const FeatureMap map = incomplete_cholesky(KernelSpec::polynomial(1.0, 1), data.X, 1e-10);
  const LinearPredictor model = train_softmax_baseline(data, 2, map, 1e-4, 1e-6, 500, 1);
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd g = model.scores(data.X.row(i).transpose());
    correct += (g[0] > g[1] ? 0 : 1) == data.labels[i];
  }
  CHECK(correct == n);
}

TEST_CASE("quantile regression: median of symmetric noise") {
  Philox rng(37, 10);
  Dataset data;
  const int n = 2000;
  data.X.resize(n, 1);
  data.labels = Eigen::VectorXi::Zero(n);
  data.y_real.resize(n);
  data.regression = true;
  for (int i = 0; i < n; ++i) {
    data.X(i, 0) = rng.uniform(0.0, 1.0);
    data.y_real[i] = 0.3 + 0.4 * data.X(i, 0) + 0.2 * rng.normal();
  }
  const FeatureMap map = incomplete_cholesky(KernelSpec::polynomial(1.0, 1), data.X, 1e-10);
  const Eigen::VectorXd theta = train_quantile(data, map, 1e-6, 0.5, 400000, 3);
  for (double x = 0.1; x <= 0.9; x += 0.2) {
    Eigen::VectorXd q(1);
    q << x;
    const double fitted = map.embed(q).dot(theta);
    CHECK(fitted == doctest::Approx(0.3 + 0.4 * x).epsilon(0).scale(1).epsilon(0.05));
  }
}

TEST_CASE("interval baseline produces ordered quantile tracks") {
  const Generator gen = Generator::regression1d(Regression1DSpec{}, 41);
  const Dataset train = gen.sample(1500, streams::kTrain);
  const FeatureMap map = incomplete_cholesky(KernelSpec::spline(), train.X, 1e-3);
  const LinearPredictor model = train_interval_baseline(train, map, 1e-5, 0.1, 200000, 7);
  for (double x = 0.05; x < 1.0; x += 0.1) {
    const Eigen::VectorXd g = model.scores(Eigen::VectorXd::Constant(1, x));
    CHECK(g[0] < g[1]);
  }
}

TEST_CASE("post_cluster: fixed point under the identity decomposition") {
  Philox rng(43, 11);
  const int k = 5;
  const SizeFunction v = random_modular(rng, k);
  const Eigen::VectorXd q = random_probability(rng, k, 0.05);
  const Eigen::VectorXd h = separable_min(v, q);
  const Eigen::VectorXd out = post_cluster(h, v, v);
  CHECK((out - h).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("post_cluster: reduces distinct values and solves the right problem") {
  Philox rng(47, 12);
  const int k = 6;
  Eigen::VectorXd phi(k + 1);
  for (int i = 0; i <= k; ++i) phi[i] = std::min(i, 2);
  const SizeFunction v = SizeFunction::concave_cardinality(k, phi);
  const SizeFunction w = mix_with_dominated(v, 0.1);
  CHECK(check_decomposition(v, w));

  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd pi = random_probability(rng, k, 0.02);
    const Eigen::VectorXd h = separable_min(w, pi);  // trained against W
    const Eigen::VectorXd out = post_cluster(h, v, w);

    auto distinct = [](const Eigen::VectorXd& f) {
      std::vector<double> vals(f.data(), f.data() + f.size());
      std::sort(vals.begin(), vals.end());
      int c = 1;
      for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] - vals[i - 1] > 1e-9) ++c;
      return c;
    };
    CHECK(distinct(out) <= distinct(h));

    // the output solves the separable problem with the inverted weights
    const Eigen::VectorXd mu = w.greedy_subgradient(h);
    Eigen::VectorXd q(k);
    for (int y = 0; y < k; ++y) q[y] = std::max(mu[y] / std::max(-std::min(h[y], 0.0), 1e-6), 1e-12);
    const Eigen::VectorXd oracle = separable_min_by_level_sets(v, q, Eigen::VectorXd::Zero(k));
    CHECK((out - oracle).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("mix_with_dominated keeps families and the decomposition contract") {
  Philox rng(53, 13);
  const SizeFunction cover = random_cover(rng, 6);
  const SizeFunction wc = mix_with_dominated(cover, 0.2);
  CHECK(wc.family() == SizeFamily::kSetCover);
  CHECK(wc.total() == doctest::Approx(cover.total()).epsilon(1e-12));
  CHECK(check_decomposition(cover, wc));

  const SizeFunction conc = random_concave(rng, 6);
  const SizeFunction wk = mix_with_dominated(conc, 0.2);
  CHECK(wk.family() == SizeFamily::kConcaveCardinality);
  CHECK(check_decomposition(conc, wk));
}
