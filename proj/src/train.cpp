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

#include "setpred/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "setpred/cg.hpp"
#include "setpred/errors.hpp"
#include "setpred/rank_terms.hpp"

namespace setpred {

namespace {

constexpr double kBracketTol = 1e-12;

void check_labels(const Dataset& data, int k) {
  for (Eigen::Index i = 0; i < data.size(); ++i)
    if (data.labels[i] < 0 || data.labels[i] >= k)
      throw std::invalid_argument("train: label out of range at sample " + std::to_string(i));
}

// Solve (Phi' diag(a) Phi / n + lambda R) z = rhs, R = identity with a zero
// in the intercept slot.
Eigen::VectorXd solve_weighted_ridge(const Eigen::MatrixXd& phi, const Eigen::VectorXd& a,
                                     const Eigen::VectorXd& rhs, double lambda, bool intercept,
                                     const TrainOptions& opts, const Eigen::VectorXd* warm) {
  const Eigen::Index n = phi.rows();
  const Eigen::Index d = phi.cols();
  Eigen::VectorXd ridge = Eigen::VectorXd::Constant(d, lambda);
  if (intercept) ridge[d - 1] = 0.0;

  if (opts.use_cg) {
    MatVec apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
      out = phi.transpose() * (a.asDiagonal() * (phi * in)) / static_cast<double>(n);
      out += ridge.asDiagonal() * in;
    };
    Eigen::VectorXd diag(d);
    for (Eigen::Index c = 0; c < d; ++c)
      diag[c] = std::max(
          (phi.col(c).array().square() * a.array()).sum() / static_cast<double>(n) + ridge[c],
          1e-300);
    Eigen::VectorXd z = warm ? *warm : Eigen::VectorXd::Zero(d);
    const CgResult res = conjugate_gradient(apply, rhs, z, opts.cg_tol, -1, &diag);
    if (!res.converged)
      throw NumericalError("train: conjugate gradient stalled (residual " +
                           std::to_string(res.residual_norm) + ")");
    return z;
  }

  Eigen::MatrixXd A =
      phi.transpose() * (a.asDiagonal() * phi) / static_cast<double>(n);
  A += Eigen::MatrixXd(ridge.asDiagonal());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  Eigen::VectorXd z = ldlt.solve(rhs);
  const double resid = (A * z - rhs).norm();
  if (!z.allFinite() || resid > 1e-6 * std::max(1.0, rhs.norm()))
    throw NumericalError("train: singular per-label system (residual " + std::to_string(resid) +
                         "); add regularization or label smoothing");
  return z;
}

Eigen::MatrixXd one_hot(const Dataset& data, int k) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(data.size(), k);
  for (Eigen::Index i = 0; i < data.size(); ++i) t(i, data.labels[i]) = 1.0;
  return t;
}

double softmax_logloss_and_probs(const Eigen::VectorXd& g, int y, Eigen::VectorXd& p) {
  const double mx = g.maxCoeff();
  p = (g.array() - mx).exp();
  const double Z = p.sum();
  p /= Z;
  return -(g[y] - mx - std::log(Z));
}

}  // namespace

LinearPredictor train_modular(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                              const TrainOptions& opts) {
  if (v.family() != SizeFamily::kModular)
    throw std::invalid_argument("train_modular: size function must be modular");
  const int k = v.ground_size();
  check_labels(data, k);
  if (opts.lambda_reg < 0.0) throw std::invalid_argument("train_modular: negative ridge");

  const Eigen::MatrixXd phi = map.embed_all(data.X);
  const Eigen::Index n = phi.rows();
  const Eigen::VectorXd& m = v.weights();
  const Eigen::VectorXd msmooth = v.dominated_measure();
  const Eigen::VectorXd mean_phi = phi.colwise().mean().transpose();

  LinearPredictor out;
  out.map = map;
  out.weights.resize(phi.cols(), k);
  out.size_function = v;
  out.eps_smooth = opts.eps_smooth;
  out.lambda_reg = opts.lambda_reg;
  out.loss_name = "choquet";

  Eigen::VectorXd a(n);
  for (int j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i)
      a[i] = (data.labels[i] == j ? 1.0 : 0.0) + opts.eps_smooth * msmooth[j];
    const Eigen::VectorXd rhs = -m[j] * mean_phi;
    out.weights.col(j) = solve_weighted_ridge(phi, a, rhs, opts.lambda_reg, map.intercept, opts, nullptr);
  }
  return out;
}

namespace {

// Shared IRLS driver. Terms may span all labels (rank terms) or subsets
// (cover terms); `laplacian` may be empty.
TrainResult irls_train(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                       const Eigen::MatrixXd* laplacian, const TrainOptions& opts,
                       const std::string& loss_name) {
  const int k = v.ground_size();
  check_labels(data, k);
  if (!(opts.eta_floor > 0.0)) throw std::invalid_argument("train: eta floor must be positive");

  Eigen::VectorXd lin;
  std::vector<detail::RankTerm> terms;
  detail::decompose_extension(v, lin, terms);

  const Eigen::MatrixXd phi = map.embed_all(data.X);
  const Eigen::Index n = phi.rows();
  const Eigen::Index d = phi.cols();
  const Eigen::VectorXd msmooth = v.dominated_measure();

  // Start from the matching modular fit; the rank terms then reshape it.
  Eigen::MatrixXd W;
  {
    TrainOptions init_opts = opts;
    const LinearPredictor init =
        train_modular(data, SizeFunction::modular(v.dominated_measure()), map, init_opts);
    W = init.weights;
  }

  auto objective = [&](const Eigen::MatrixXd& weights, double eta_level) {
    const Eigen::MatrixXd S = phi * weights;
    double J = 0.0;
    Eigen::VectorXd g(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      g = S.row(i).transpose();
      J += detail::smoothed_extension(lin, terms, g, eta_level, kBracketTol);
      const double gy = g[data.labels[i]];
      J += 0.5 * gy * gy;
      if (opts.eps_smooth > 0.0)
        J += 0.5 * opts.eps_smooth * (msmooth.array() * g.array().square()).sum();
      if (laplacian) J += g.dot(*laplacian * g);
    }
    J /= static_cast<double>(n);
    for (int j = 0; j < k; ++j) {
      const int dpen = map.intercept ? d - 1 : d;
      J += 0.5 * opts.lambda_reg * weights.col(j).head(dpen).squaredNorm();
    }
    return J;
  };

  // Graduated smoothing, as in the separable solver: the reweighting level
  // starts at the score spread and halves down to the floor; the tracked
  // objective stays monotone because lowering the level only decreases it.
  double eta_level = 1.0;
  {
    const Eigen::MatrixXd S0 = phi * W;
    eta_level = std::max(1.0, S0.maxCoeff() - S0.minCoeff());
  }

  TrainResult result;
  double prev = objective(W, eta_level);
  result.trace.push_back(prev);

  Eigen::MatrixXd amat(n, k), bmat(n, k);
  Eigen::VectorXd g(k);
  const bool coupled = laplacian != nullptr && laplacian->cwiseAbs().maxCoeff() > 0.0;
  Eigen::VectorXd ridge = Eigen::VectorXd::Constant(d, opts.lambda_reg);
  if (map.intercept) ridge[d - 1] = 0.0;

  for (int it = 0; it < opts.max_iter; ++it) {
    eta_level = std::max(opts.eta_floor, 0.5 * eta_level);
    const Eigen::MatrixXd S = phi * W;
    for (Eigen::Index i = 0; i < n; ++i) {
      g = S.row(i).transpose();
      for (int j = 0; j < k; ++j) {
        amat(i, j) = (data.labels[i] == j ? 1.0 : 0.0) + opts.eps_smooth * msmooth[j];
        bmat(i, j) = lin[j];
      }
      for (const detail::RankTerm& term : terms) {
        const double t = detail::threshold_search(g, term.idx, term.rank, eta_level, kBracketTol);
        for (int j : term.idx) {
          const double eta = std::max(std::abs(g[j] - t), eta_level);
          amat(i, j) += term.coeff / (2.0 * eta);
          bmat(i, j) += term.coeff * (0.5 - t / (2.0 * eta));
        }
      }
    }

    if (!coupled) {
      for (int j = 0; j < k; ++j) {
        const Eigen::VectorXd rhs = -(phi.transpose() * bmat.col(j)) / static_cast<double>(n);
        Eigen::VectorXd warm = W.col(j);
        W.col(j) = solve_weighted_ridge(phi, amat.col(j), rhs, opts.lambda_reg, map.intercept,
                                        opts, &warm);
      }
    } else {
      // Laplacian couples the labels; solve the full (d*k) system.
      const Eigen::MatrixXd& L = *laplacian;
      const Eigen::MatrixXd rhsM = -(phi.transpose() * bmat) / static_cast<double>(n);
      const Eigen::Map<const Eigen::VectorXd> rhs(rhsM.data(), d * k);
      const bool dense_ok = !opts.use_cg && d * k <= 800;
      if (dense_ok) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d * k, d * k);
        const Eigen::MatrixXd C = phi.transpose() * phi / static_cast<double>(n);
        for (int j = 0; j < k; ++j) {
          Eigen::MatrixXd Aj =
              phi.transpose() * (amat.col(j).asDiagonal() * phi) / static_cast<double>(n);
          Aj += Eigen::MatrixXd(ridge.asDiagonal());
          H.block(j * d, j * d, d, d) += Aj;
          for (int l = 0; l < k; ++l)
            if (L(j, l) != 0.0) H.block(l * d, j * d, d, d) += 2.0 * L(j, l) * C;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Eigen::VectorXd z = ldlt.solve(rhs);
        if (!z.allFinite()) throw NumericalError("train_cover_irls: singular coupled system");
        W = Eigen::Map<const Eigen::MatrixXd>(z.data(), d, k);
      } else {
        MatVec apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
          const Eigen::Map<const Eigen::MatrixXd> Win(in.data(), d, k);
          Eigen::MatrixXd outM(d, k);
          for (int j = 0; j < k; ++j)
            outM.col(j) = phi.transpose() * (amat.col(j).asDiagonal() * (phi * Win.col(j))) /
                              static_cast<double>(n) +
                          ridge.asDiagonal() * Win.col(j);
          outM += 2.0 * (phi.transpose() * ((phi * Win) * L)) / static_cast<double>(n);
          out = Eigen::Map<const Eigen::VectorXd>(outM.data(), d * k);
        };
        Eigen::VectorXd colsq(d);
        for (Eigen::Index c = 0; c < d; ++c)
          colsq[c] = phi.col(c).squaredNorm() / static_cast<double>(n);
        Eigen::VectorXd diag(d * k);
        for (int j = 0; j < k; ++j)
          for (Eigen::Index c = 0; c < d; ++c) {
            const double dj = (phi.col(c).array().square() * amat.col(j).array()).sum() /
                                  static_cast<double>(n) +
                              ridge[c] + 2.0 * L(j, j) * colsq[c];
            diag[j * d + c] = std::max(dj, 1e-300);
          }
        Eigen::VectorXd z(d * k);
        Eigen::Map<Eigen::MatrixXd>(z.data(), d, k) = W;  // warm start
        const CgResult res = conjugate_gradient(apply, rhs, z, opts.cg_tol, -1, &diag);
        if (!res.converged)
          throw NumericalError("train_cover_irls: conjugate gradient stalled (residual " +
                               std::to_string(res.residual_norm) + ")");
        W = Eigen::Map<const Eigen::MatrixXd>(z.data(), d, k);
      }
    }

    const double cur = objective(W, eta_level);
    const double scale = std::max({std::abs(prev), std::abs(cur), 1.0});
    if (cur > prev + 1e-8 * scale)
      throw NumericalError("irls: smoothed objective increased from " + std::to_string(prev) +
                           " to " + std::to_string(cur));
    result.trace.push_back(cur);
    const bool done = eta_level <= opts.eta_floor && prev - cur < opts.tol * scale;
    prev = cur;
    if (done) break;
  }

  result.predictor.map = map;
  result.predictor.weights = W;
  result.predictor.size_function = v;
  result.predictor.eps_smooth = opts.eps_smooth;
  result.predictor.lambda_reg = opts.lambda_reg;
  result.predictor.loss_name = loss_name;
  return result;
}

}  // namespace

TrainResult train_concave_irls(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                               const TrainOptions& opts) {
  if (v.family() != SizeFamily::kConcaveCardinality)
    throw std::invalid_argument("train_concave_irls: size function must be concave-cardinality");
  if (!v.has_concave_phi())
    throw std::invalid_argument("train_concave_irls: phi must be concave non-decreasing");
  return irls_train(data, v, map, nullptr, opts, "choquet");
}

LaplacianPenalty LaplacianPenalty::chain(int k, double width, double strength) {
  LaplacianPenalty p;
  p.strength = strength;
  for (int j = 0; j + 1 < k; ++j) p.edges.push_back({j, j + 1, 1.0 / width});
  return p;
}

Eigen::MatrixXd LaplacianPenalty::matrix(int k) const {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
  for (const Edge& e : edges) {
    if (e.a < 0 || e.a >= k || e.b < 0 || e.b >= k)
      throw std::invalid_argument("LaplacianPenalty: edge index out of range");
    if (e.w < 0.0) throw std::invalid_argument("LaplacianPenalty: negative weight");
    L(e.a, e.a) += e.w;
    L(e.b, e.b) += e.w;
    L(e.a, e.b) -= e.w;
    L(e.b, e.a) -= e.w;
  }
  return strength * L;
}

TrainResult train_cover_irls(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                             const LaplacianPenalty& laplacian, const TrainOptions& opts) {
  if (v.family() != SizeFamily::kSetCover)
    throw std::invalid_argument("train_cover_irls: size function must be a set cover");
  for (std::size_t z = 0; z < v.neighborhoods().size(); ++z)
    if (v.neighborhoods()[z].empty())
      throw std::invalid_argument("train_cover_irls: empty neighborhood at cover point " +
                                  std::to_string(z));
  const Eigen::MatrixXd L = laplacian.matrix(v.ground_size());
  const bool has_lap = laplacian.strength > 0.0 && !laplacian.edges.empty();
  return irls_train(data, v, map, has_lap ? &L : nullptr, opts, "choquet");
}

LinearPredictor train_square_baseline(const Dataset& data, int k, const FeatureMap& map,
                                      double lambda_reg) {
  check_labels(data, k);
  const Eigen::MatrixXd phi = map.embed_all(data.X);
  const Eigen::MatrixXd targets = one_hot(data, k);
  TrainOptions opts;
  opts.lambda_reg = lambda_reg;

  LinearPredictor out;
  out.map = map;
  out.weights.resize(phi.cols(), k);
  out.lambda_reg = lambda_reg;
  out.loss_name = "square";
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(phi.rows());
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd rhs = phi.transpose() * targets.col(j) / static_cast<double>(phi.rows());
    out.weights.col(j) = solve_weighted_ridge(phi, ones, rhs, lambda_reg, map.intercept, opts, nullptr);
  }
  return out;
}

LinearPredictor train_softmax_baseline(const Dataset& data, int k, const FeatureMap& map,
                                       double lambda_reg, double grad_tol, int max_epochs,
                                       std::uint64_t seed) {
  check_labels(data, k);
  const Eigen::MatrixXd phi = map.embed_all(data.X);
  const Eigen::Index n = phi.rows();
  const Eigen::Index d = phi.cols();

  double lmax = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) lmax = std::max(lmax, phi.row(i).squaredNorm());
  const double step = 1.0 / (3.0 * (0.5 * lmax + lambda_reg));

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(d, k);
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, k);   // stored score-space gradients
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(d, k);     // average of stored param gradients
  // Initialize the table at W = 0: p = uniform.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) table(i, j) = 1.0 / k;
    table(i, data.labels[i]) -= 1.0;
  }
  avg = phi.transpose() * table / static_cast<double>(n);

  Eigen::VectorXd ridge_mask = Eigen::VectorXd::Ones(d);
  if (map.intercept) ridge_mask[d - 1] = 0.0;

  Philox rng(seed, streams::kSgd);
  Eigen::VectorXd p(k), gnew(k);
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    for (Eigen::Index s = 0; s < n; ++s) {
      const Eigen::Index i = static_cast<Eigen::Index>(rng.uniform_index(n));
      const Eigen::VectorXd g = W.transpose() * phi.row(i).transpose();
      softmax_logloss_and_probs(g, data.labels[i], p);
      gnew = p;
      gnew[data.labels[i]] -= 1.0;
      const Eigen::VectorXd diff = gnew - table.row(i).transpose();
      W -= step * (phi.row(i).transpose() * diff.transpose() + avg +
                   lambda_reg * (ridge_mask.asDiagonal() * W));
      avg += phi.row(i).transpose() * diff.transpose() / static_cast<double>(n);
      table.row(i) = gnew.transpose();
    }
    // Full-gradient stopping test.
    Eigen::MatrixXd P(n, k);
    const Eigen::MatrixXd S = phi * W;
    for (Eigen::Index i = 0; i < n; ++i) {
      softmax_logloss_and_probs(S.row(i).transpose(), data.labels[i], p);
      P.row(i) = p.transpose();
      P(i, data.labels[i]) -= 1.0;
    }
    const Eigen::MatrixXd grad =
        phi.transpose() * P / static_cast<double>(n) + lambda_reg * (ridge_mask.asDiagonal() * W);
    if (grad.norm() <= grad_tol) break;
  }

  LinearPredictor out;
  out.map = map;
  out.weights = W;
  out.lambda_reg = lambda_reg;
  out.loss_name = "softmax";
  return out;
}

Eigen::VectorXd train_quantile(const Dataset& data, const FeatureMap& map, double lambda_reg,
                               double tau, long steps, std::uint64_t seed, std::uint64_t stream) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("train_quantile: tau in (0,1)");
  const Eigen::MatrixXd phi = map.embed_all(data.X);
  const Eigen::Index n = phi.rows();
  const Eigen::Index d = phi.cols();

  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale += phi.row(i).squaredNorm();
  scale /= static_cast<double>(n);
  const double step0 = 1.0 / std::sqrt(scale + lambda_reg + 1e-12);

  Eigen::VectorXd ridge_mask = Eigen::VectorXd::Ones(d);
  if (map.intercept) ridge_mask[d - 1] = 0.0;

  Philox rng(seed, stream);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  long count = 0;
  for (long t = 0; t < steps; ++t) {
    const Eigen::Index i = static_cast<Eigen::Index>(rng.uniform_index(n));
    const double r = data.y_real[i] - phi.row(i).dot(theta);
    const double slope = (r < 0.0 ? tau - 1.0 : tau);
    const double gamma = step0 / std::sqrt(1.0 + static_cast<double>(t));
    theta += gamma * (slope * phi.row(i).transpose() -
                      lambda_reg * (ridge_mask.asDiagonal() * theta));
    if (t >= steps / 2) {
      sum += theta;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

LinearPredictor train_interval_baseline(const Dataset& data, const FeatureMap& map,
                                        double lambda_reg, double alpha, long steps,
                                        std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("train_interval_baseline: alpha in (0,1)");
  LinearPredictor out;
  out.map = map;
  out.weights.resize(map.dim(), 2);
  out.lambda_reg = lambda_reg;
  out.loss_name = "interval";
  out.weights.col(0) = train_quantile(data, map, lambda_reg, alpha / 2.0, steps, seed,
                                      streams::per_replication(streams::kSgd, 1));
  out.weights.col(1) = train_quantile(data, map, lambda_reg, 1.0 - alpha / 2.0, steps, seed,
                                      streams::per_replication(streams::kSgd, 2));
  return out;
}

LinearScoreModel::LinearScoreModel(FeatureMap map, int k)
    : map_(std::move(map)), weights_(Eigen::MatrixXd::Zero(map_.dim(), k)) {}

Eigen::VectorXd LinearScoreModel::scores(const Eigen::VectorXd& x) const {
  return weights_.transpose() * map_.embed(x);
}

void LinearScoreModel::add_score_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& coeffs,
                                          double scale) {
  weights_ += scale * (map_.embed(x) * coeffs.transpose());
}

void LinearScoreModel::shrink_penalized(double factor) {
  const int dpen = map_.intercept ? static_cast<int>(weights_.rows()) - 1
                                  : static_cast<int>(weights_.rows());
  weights_.topRows(dpen) *= (1.0 - factor);
}

Eigen::VectorXd LinearScoreModel::parameters() const {
  return Eigen::Map<const Eigen::VectorXd>(weights_.data(), weights_.size());
}

void LinearScoreModel::set_parameters(const Eigen::VectorXd& p) {
  if (p.size() != weights_.size()) throw std::invalid_argument("set_parameters: size mismatch");
  weights_ = Eigen::Map<const Eigen::MatrixXd>(p.data(), weights_.rows(), weights_.cols());
}

LinearPredictor LinearScoreModel::to_predictor() const {
  LinearPredictor out;
  out.map = map_;
  out.weights = weights_;
  out.loss_name = "choquet";
  return out;
}

Eigen::VectorXd stochastic_score_subgradient(const SizeFunction& v, double eps_smooth,
                                             const Eigen::VectorXd& g, int y, Philox& rng) {
  const int k = v.ground_size();
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(k);
  switch (v.family()) {
    case SizeFamily::kModular: {
      const int z = rng.categorical(v.weights());
      coeff[z] += v.total();
      break;
    }
    case SizeFamily::kConcaveCardinality: {
      const Eigen::VectorXd mu = v.greedy_subgradient(g);
      if (mu.sum() > 0.0) {
        const int z = rng.categorical(mu);
        coeff[z] += v.total();
      }
      break;
    }
    case SizeFamily::kSetCover: {
      const int z = rng.categorical(v.cover_weights());
      const auto& nb = v.neighborhoods()[z];
      if (!nb.empty()) {
        int best = nb[0];
        for (int j : nb)
          if (g[j] > g[best]) best = j;
        coeff[best] += v.cover_weights().sum();
      }
      break;
    }
  }
  coeff[y] += g[y];
  if (eps_smooth > 0.0) {
    const Eigen::VectorXd m = v.dominated_measure();
    const int z = rng.categorical(m);
    coeff[z] += eps_smooth * m.sum() * g[z];
  }
  return coeff;
}

Eigen::VectorXd exact_score_subgradient(const SizeFunction& v, double eps_smooth,
                                        const Eigen::VectorXd& g, int y) {
  Eigen::VectorXd coeff = v.greedy_subgradient(g);
  coeff[y] += g[y];
  if (eps_smooth > 0.0) coeff += eps_smooth * (v.dominated_measure().array() * g.array()).matrix();
  return coeff;
}

void sgd_train(const Dataset& data, const SizeFunction& v, double eps_smooth,
               DifferentiableModel& model, const SgdSchedule& schedule, std::uint64_t seed) {
  if (model.outputs() != v.ground_size())
    throw std::invalid_argument("sgd_train: model output dimension mismatch");
  const Eigen::Index n = data.size();
  Philox rng(seed, streams::kSgd);
  Eigen::VectorXd sum;
  long count = 0;
  for (long t = 0; t < schedule.steps; ++t) {
    const Eigen::Index i = static_cast<Eigen::Index>(rng.uniform_index(n));
    const Eigen::VectorXd x = data.X.row(i).transpose();
    const Eigen::VectorXd g = model.scores(x);
    const Eigen::VectorXd coeff = stochastic_score_subgradient(v, eps_smooth, g, data.labels[i], rng);
    const double gamma = schedule.step0 / std::sqrt(1.0 + static_cast<double>(t) / schedule.decay_after);
    if (schedule.lambda_reg > 0.0) model.shrink_penalized(gamma * schedule.lambda_reg);
    model.add_score_gradient(x, coeff, -gamma);
    if (t >= schedule.steps / 2) {
      if (count == 0)
        sum = model.parameters();
      else
        sum += model.parameters();
      ++count;
    }
  }
  if (count > 0) model.set_parameters(sum / static_cast<double>(count));
}

Eigen::VectorXd post_cluster(const Eigen::VectorXd& h, const SizeFunction& v,
                             const SizeFunction& w, double delta, const SeparableMinOptions& opts) {
  if (v.ground_size() != w.ground_size() || h.size() != v.ground_size())
    throw std::invalid_argument("post_cluster: dimension mismatch");
  const Eigen::VectorXd mu = w.greedy_subgradient(h);
  Eigen::VectorXd q(h.size());
  for (Eigen::Index y = 0; y < h.size(); ++y) {
    const double denom = std::max(-std::min(h[y], 0.0), delta);
    q[y] = std::max(mu[y] / denom, 1e-12);
  }
  return separable_min(v, q, opts);
}

SizeFunction mix_with_dominated(const SizeFunction& v, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("mix_with_dominated: eps in [0,1]");
  const int k = v.ground_size();
  const Eigen::VectorXd m = v.dominated_measure();
  switch (v.family()) {
    case SizeFamily::kModular:
      return v;  // M = V, the mixture is V itself
    case SizeFamily::kConcaveCardinality: {
      Eigen::VectorXd phi(k + 1);
      for (int i = 0; i <= k; ++i) phi[i] = eps * i * v.total() / k + (1.0 - eps) * v.phi()[i];
      return SizeFunction::concave_cardinality(k, phi);
    }
    case SizeFamily::kSetCover: {
      std::vector<std::vector<int>> nb = v.neighborhoods();
      const Eigen::Index z0 = v.cover_weights().size();
      Eigen::VectorXd weights(z0 + k);
      weights.head(z0) = (1.0 - eps) * v.cover_weights();
      for (int y = 0; y < k; ++y) {
        nb.push_back({y});
        weights[z0 + y] = eps * m[y];
      }
      return SizeFunction::set_cover(k, std::move(nb), weights);
    }
  }
  throw std::logic_error("mix_with_dominated: unreachable");
}

bool check_decomposition(const SizeFunction& v, const SizeFunction& w, double tol) {
  const int k = v.ground_size();
  if (w.ground_size() != k) throw std::invalid_argument("check_decomposition: ground sets differ");
  if (k > 12) throw std::invalid_argument("check_decomposition: exhaustive check limited to k <= 12");
  if (!check_submodular(w, tol)) return false;
  const std::uint64_t n = std::uint64_t{1} << k;
  std::vector<double> diff(n);
  for (std::uint64_t a = 0; a < n; ++a) diff[a] = v.value_mask(a) - w.value_mask(a);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = a + 1; b < n; ++b)
      if (diff[a & b] + diff[a | b] > diff[a] + diff[b] + tol) return false;
  return true;
}

}  // namespace setpred
