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
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "setpred/dataset.hpp"
#include "setpred/feature_map.hpp"
#include "setpred/linear_predictor.hpp"
#include "setpred/rng.hpp"
#include "setpred/separable_min.hpp"
#include "setpred/size_function.hpp"

namespace setpred {

struct TrainOptions {
  double lambda_reg = 1e-4;
  double eps_smooth = 1e-2;   // label smoothing on the dominated measure
  double eta_floor = 1e-6;    // reweighting floor in the IRLS trainers
  double tol = 1e-10;         // relative objective decrease to stop
  int max_iter = 500;
  bool use_cg = false;        // iterative instead of direct per-label solves
  double cg_tol = 1e-10;
};

struct TrainResult {
  LinearPredictor predictor;
  // Smoothed objective after each outer iteration; non-increasing.
  std::vector<double> trace;
};

// Exact minimizer of the per-label ridge quadratic
//   (1/n) sum_i [ m_j g_j(x_i) + 1/2 1{y_i=j} g_j(x_i)^2
//                 + eps/2 M_j g_j(x_i)^2 ] + lambda/2 ||theta_j||^2
// for a modular V with weights m; the intercept is never penalized.
LinearPredictor train_modular(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                              const TrainOptions& opts);

// Reweighted least squares for V(A) = phi(|A|), phi concave: alternates
// closed-form (t, eta) updates with per-label ridge solves.
TrainResult train_concave_irls(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                               const TrainOptions& opts);

// Pairwise smoothness penalty across regression cells:
//   strength * sum_{edges (a,b)} w_ab (g_a(x) - g_b(x))^2, averaged over x.
struct LaplacianPenalty {
  struct Edge {
    int a, b;
    double w;
  };
  std::vector<Edge> edges;
  double strength = 0.0;

  static LaplacianPenalty none() { return {}; }
  // Adjacent-cell weights 1/width; approximates the squared L2 norm of the
  // derivative across the grid.
  static LaplacianPenalty chain(int k, double width, double strength);
  // strength * (D - W); zero row sums.
  Eigen::MatrixXd matrix(int k) const;
};

// Reweighted least squares for a set-cover V over regression cells, with one
// (t, eta) block per cover term and the Laplacian added to the quadratic.
// The coupled system is solved matrix-free by preconditioned CG (or densely
// when small).
TrainResult train_cover_irls(const Dataset& data, const SizeFunction& v, const FeatureMap& map,
                             const LaplacianPenalty& laplacian, const TrainOptions& opts);

// Ridge regression onto one-hot targets.
LinearPredictor train_square_baseline(const Dataset& data, int k, const FeatureMap& map,
                                      double lambda_reg);

// Multinomial logistic loss by SAGA, step 1/(3L), run until the full
// gradient norm drops below grad_tol.
LinearPredictor train_softmax_baseline(const Dataset& data, int k, const FeatureMap& map,
                                       double lambda_reg, double grad_tol = 1e-6,
                                       int max_epochs = 2000, std::uint64_t seed = 0);

// Pinball-loss quantile regression at level tau by averaged stochastic
// subgradient descent (`steps` draws; the result is the average of the last
// half of the iterates).
Eigen::VectorXd train_quantile(const Dataset& data, const FeatureMap& map, double lambda_reg,
                               double tau, long steps = 200000, std::uint64_t seed = 0,
                               std::uint64_t stream = streams::kSgd);

// Two quantile regressions at levels alpha/2 and 1 - alpha/2. Output 0 is
// the lower quantile, output 1 the upper.
LinearPredictor train_interval_baseline(const Dataset& data, const FeatureMap& map,
                                        double lambda_reg, double alpha, long steps = 200000,
                                        std::uint64_t seed = 0);

// Score-producing model with enough structure for stochastic training.
class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;
  virtual int outputs() const = 0;
  virtual Eigen::VectorXd scores(const Eigen::VectorXd& x) const = 0;
  // params += scale * d/dparams [ coeffs . scores(x) ]
  virtual void add_score_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& coeffs,
                                  double scale) = 0;
  virtual void shrink_penalized(double factor) = 0;  // ridge step, intercept excluded
  virtual Eigen::VectorXd parameters() const = 0;
  virtual void set_parameters(const Eigen::VectorXd& p) = 0;
};

class LinearScoreModel final : public DifferentiableModel {
 public:
  LinearScoreModel(FeatureMap map, int k);
  int outputs() const override { return static_cast<int>(weights_.cols()); }
  Eigen::VectorXd scores(const Eigen::VectorXd& x) const override;
  void add_score_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& coeffs,
                          double scale) override;
  void shrink_penalized(double factor) override;
  Eigen::VectorXd parameters() const override;
  void set_parameters(const Eigen::VectorXd& p) override;
  LinearPredictor to_predictor() const;

 private:
  FeatureMap map_;
  Eigen::MatrixXd weights_;
};

struct SgdSchedule {
  double step0 = 0.5;
  double decay_after = 100.0;  // step = step0 / sqrt(1 + t/decay_after)
  long steps = 100000;
  double lambda_reg = 0.0;
};

// One unbiased score-space subgradient sample of the smoothed loss at (g, y):
// the extension part samples one element (from the greedy measure, the
// modular weights, or a cover point plus arg-max), the smoothing part samples
// from the dominated measure.
Eigen::VectorXd stochastic_score_subgradient(const SizeFunction& v, double eps_smooth,
                                             const Eigen::VectorXd& g, int y, Philox& rng);

// Deterministic score-space subgradient of the same loss (greedy measure for
// the extension part).
Eigen::VectorXd exact_score_subgradient(const SizeFunction& v, double eps_smooth,
                                        const Eigen::VectorXd& g, int y);

// Plain averaged SGD over the data stream; the model ends at the average of
// the second half of the iterates.
void sgd_train(const Dataset& data, const SizeFunction& v, double eps_smooth,
               DifferentiableModel& model, const SgdSchedule& schedule, std::uint64_t seed);

// Test-time clustering transform: with mu the greedy subgradient of W at h,
// returns the minimizer of v(f) + 1/2 sum_y mu_y f_y^2 / max(-min(h_y,0), delta).
// Scores h >= -delta are clipped at delta.
Eigen::VectorXd post_cluster(const Eigen::VectorXd& h, const SizeFunction& v,
                             const SizeFunction& w, double delta = 1e-6,
                             const SeparableMinOptions& opts = {});

// W = eps M + (1 - eps) V with M the canonical dominated measure; stays in
// the same family (covers gain singleton points for the modular part).
SizeFunction mix_with_dominated(const SizeFunction& v, double eps);

// Exhaustive k <= 12 check that V - W is submodular and W is submodular
// non-decreasing (the post-clustering decomposition contract).
bool check_decomposition(const SizeFunction& v, const SizeFunction& w, double tol = 1e-9);

}  // namespace setpred
