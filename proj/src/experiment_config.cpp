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

#include "setpred/experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "setpred/errors.hpp"
#include "setpred/loss.hpp"
#include "setpred/separable_min.hpp"

namespace setpred {

namespace {

SizeFunction size_function_from_config(const nlohmann::json& j, int k, const Generator& gen) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "modular_uniform") return SizeFunction::uniform_cardinality(k);
  if (variant == "modular_cells") {
    // uniform measure over the cell interval; weights are cell widths
    if (gen.kind() != Generator::Kind::kRegression1D)
      throw ConfigError("size_function.modular_cells requires a regression generator");
    const CellGrid& cells = gen.regression_spec().cells;
    return SizeFunction::modular(
        Eigen::VectorXd::Constant(k, cells.width() / (cells.hi - cells.lo)));
  }
  if (variant == "concave_log") {
    Eigen::VectorXd phi(k + 1);
    for (int i = 0; i <= k; ++i) phi[i] = std::log1p(static_cast<double>(i));
    return SizeFunction::concave_cardinality(k, phi);
  }
  if (variant == "concave_minr") {
    const int r = j.at("r").get<int>();
    if (r < 1) throw ConfigError("size_function.r must be >= 1");
    Eigen::VectorXd phi(k + 1);
    for (int i = 0; i <= k; ++i) phi[i] = std::min(i, r);
    return SizeFunction::concave_cardinality(k, phi);
  }
  if (variant == "dilation_cover") {
    const int radius = j.at("radius").get<int>();
    if (radius < 0) throw ConfigError("size_function.radius must be >= 0");
    return SizeFunction::dilation_cover(k, radius);
  }
  // explicit families fall through to the schema used by model files
  SizeFunction v = SizeFunction::from_json(j);
  if (v.ground_size() != k)
    throw ConfigError("size_function ground set (" + std::to_string(v.ground_size()) +
                      ") does not match the generator (" + std::to_string(k) + ")");
  return v;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (!j.contains("generator")) throw ConfigError("missing field 'generator'");
    c.generator = Generator::from_json(j.at("generator"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field 'generator': ") + e.what());
  }
  try {
    if (!j.contains("kernel")) throw ConfigError("missing field 'kernel'");
    c.kernel = KernelSpec::from_json(j.at("kernel"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field 'kernel': ") + e.what());
  }
  const int k = c.generator.k();
  try {
    if (!j.contains("size_function")) throw ConfigError("missing field 'size_function'");
    c.size_function = size_function_from_config(j.at("size_function"), k, c.generator);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field 'size_function': ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'size_function': ") + e.what());
  }

  c.loss = j.value("loss", std::string("choquet"));
  if (c.loss != "choquet" && c.loss != "square" && c.loss != "softmax" && c.loss != "interval")
    throw ConfigError("field 'loss': expected one of choquet|square|softmax|interval, got '" +
                      c.loss + "'");
  if (c.loss == "interval" && c.generator.kind() != Generator::Kind::kRegression1D)
    throw ConfigError("field 'loss': interval requires a regression generator");

  c.eps_smooth = j.value("eps_smooth", 1e-2);
  if (c.eps_smooth < 0.0) throw ConfigError("field 'eps_smooth': must be >= 0");
  if (j.contains("lambda_grid")) {
    c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
  } else if (j.contains("lambda_reg")) {
    c.lambda_grid = {j.at("lambda_reg").get<double>()};
  } else {
    for (int e = -6; e <= 0; ++e) c.lambda_grid.push_back(std::pow(10.0, e));
  }
  if (c.lambda_grid.empty()) throw ConfigError("field 'lambda_grid': must not be empty");
  for (double l : c.lambda_grid)
    if (l < 0.0) throw ConfigError("field 'lambda_grid': entries must be >= 0");

  c.alpha = j.value("alpha", 0.1);
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("field 'alpha': must be in (0,1)");
  c.seed = j.value("seed", 1ull);
  c.replications = j.value("replications", 1);
  if (c.replications < 1) throw ConfigError("field 'replications': must be >= 1");
  c.train_n = j.value("train_n", 1000);
  c.test_n = j.value("test_n", 1000);
  c.cal_n = j.value("cal_n", 200);
  if (c.train_n < 1 || c.test_n < 1 || c.cal_n < 1)
    throw ConfigError("fields 'train_n'/'test_n'/'cal_n': must be >= 1");
  c.grid_points = j.value("grid_points", 200);
  if (c.grid_points < 2) throw ConfigError("field 'grid_points': must be >= 2");
  c.cv_folds = j.value("cv_folds", 5);
  if (c.cv_folds < 2) throw ConfigError("field 'cv_folds': must be >= 2");
  c.cholesky_tol = j.value("cholesky_tol", 1e-3);
  if (!(c.cholesky_tol > 0.0 && c.cholesky_tol < 1.0))
    throw ConfigError("field 'cholesky_tol': must be in (0,1)");
  c.eta_floor = j.value("eta_floor", 1e-6);
  if (!(c.eta_floor > 0.0)) throw ConfigError("field 'eta_floor': must be > 0");
  c.laplacian_strength = j.value("laplacian_strength", 0.0);
  if (c.laplacian_strength < 0.0) throw ConfigError("field 'laplacian_strength': must be >= 0");
  if (j.contains("post_cluster_eps")) {
    c.post_cluster_eps = j.at("post_cluster_eps").get<double>();
    if (!(*c.post_cluster_eps >= 0.0 && *c.post_cluster_eps <= 1.0))
      throw ConfigError("field 'post_cluster_eps': must be in [0,1]");
  }
  c.sgd_steps = j.value("sgd_steps", 200000l);
  c.out_dir = j.value("out_dir", std::string("out"));
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config '" + path + "': invalid JSON: " + e.what());
  }
  return experiment_config_from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["generator"] = generator.to_json();
  j["kernel"] = kernel.to_json();
  j["size_function"] = size_function.to_json();
  j["loss"] = loss;
  j["eps_smooth"] = eps_smooth;
  j["lambda_grid"] = lambda_grid;
  j["alpha"] = alpha;
  j["seed"] = seed;
  j["replications"] = replications;
  j["train_n"] = train_n;
  j["test_n"] = test_n;
  j["cal_n"] = cal_n;
  j["grid_points"] = grid_points;
  j["cv_folds"] = cv_folds;
  j["cholesky_tol"] = cholesky_tol;
  j["eta_floor"] = eta_floor;
  j["laplacian_strength"] = laplacian_strength;
  if (post_cluster_eps) j["post_cluster_eps"] = *post_cluster_eps;
  j["sgd_steps"] = sgd_steps;
  j["out_dir"] = out_dir;
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string dump = config.to_json().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FeatureMap build_map(const ExperimentConfig& config, const Eigen::MatrixXd& X) {
  return incomplete_cholesky(config.kernel, X, config.cholesky_tol, /*intercept=*/true);
}

LinearPredictor train_for_config(const ExperimentConfig& config, const Dataset& train,
                                 double lambda_reg) {
  const int k = config.generator.k();
  const FeatureMap map = build_map(config, train.X);
  TrainOptions opts;
  opts.lambda_reg = lambda_reg;
  opts.eps_smooth = config.eps_smooth;
  opts.eta_floor = config.eta_floor;

  if (config.loss == "square") return train_square_baseline(train, k, map, lambda_reg);
  if (config.loss == "softmax")
    return train_softmax_baseline(train, k, map, lambda_reg, 1e-6, 2000, config.seed);
  if (config.loss == "interval")
    return train_interval_baseline(train, map, lambda_reg, config.alpha, config.sgd_steps,
                                   config.seed);

  switch (config.size_function.family()) {
    case SizeFamily::kModular:
      return train_modular(train, config.size_function, map, opts);
    case SizeFamily::kConcaveCardinality:
      return train_concave_irls(train, config.size_function, map, opts).predictor;
    case SizeFamily::kSetCover: {
      LaplacianPenalty lap = LaplacianPenalty::none();
      if (config.laplacian_strength > 0.0 &&
          config.generator.kind() == Generator::Kind::kRegression1D)
        lap = LaplacianPenalty::chain(k, config.generator.regression_spec().cells.width(),
                                      config.laplacian_strength);
      return train_cover_irls(train, config.size_function, map, lap, opts).predictor;
    }
  }
  throw std::logic_error("train_for_config: unreachable");
}

double heldout_objective(const ExperimentConfig& config, const LinearPredictor& model,
                         const Dataset& val) {
  const int k = config.generator.k();
  double total = 0.0;
  if (config.loss == "interval") {
    const double taus[2] = {config.alpha / 2.0, 1.0 - config.alpha / 2.0};
    for (Eigen::Index i = 0; i < val.size(); ++i) {
      const Eigen::VectorXd g = model.scores(val.X.row(i).transpose());
      for (int side = 0; side < 2; ++side) {
        const double r = val.y_real[i] - g[side];
        total += (r < 0.0 ? (taus[side] - 1.0) * r : taus[side] * r);
      }
    }
    return total / static_cast<double>(val.size());
  }
  const Eigen::VectorXd msmooth = config.size_function.dominated_measure();
  for (Eigen::Index i = 0; i < val.size(); ++i) {
    const Eigen::VectorXd g = model.scores(val.X.row(i).transpose());
    const int y = val.labels[i];
    if (config.loss == "square") {
      for (int j = 0; j < k; ++j) {
        const double t = (j == y ? 1.0 : 0.0);
        total += 0.5 * (g[j] - t) * (g[j] - t);
      }
    } else if (config.loss == "softmax") {
      const double mx = g.maxCoeff();
      const double lse = std::log((g.array() - mx).exp().sum()) + mx;
      total += lse - g[y];
    } else {
      total += choquet_loss(config.size_function, g, y, config.eps_smooth, msmooth);
    }
  }
  return total / static_cast<double>(val.size());
}

double select_lambda_cv(const ExperimentConfig& config, const Dataset& train) {
  if (config.lambda_grid.size() == 1) return config.lambda_grid[0];
  const Eigen::Index n = train.size();
  const int folds = std::min<int>(config.cv_folds, static_cast<int>(n));
  double best_lambda = config.lambda_grid[0];
  double best_score = std::numeric_limits<double>::infinity();
  for (double lambda : config.lambda_grid) {
    double score = 0.0;
    for (int fold = 0; fold < folds; ++fold) {
      std::vector<Eigen::Index> tr, va;
      for (Eigen::Index i = 0; i < n; ++i)
        (static_cast<int>(i % folds) == fold ? va : tr).push_back(i);
      auto gather = [&](const std::vector<Eigen::Index>& idx) {
        Dataset d;
        d.regression = train.regression;
        d.X.resize(idx.size(), train.X.cols());
        d.labels.resize(idx.size());
        d.y_real.resize(idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r) {
          d.X.row(r) = train.X.row(idx[r]);
          d.labels[r] = train.labels[idx[r]];
          d.y_real[r] = train.y_real[idx[r]];
        }
        return d;
      };
      const Dataset dtr = gather(tr), dva = gather(va);
      const LinearPredictor model = train_for_config(config, dtr, lambda);
      score += heldout_objective(config, model, dva);
    }
    score /= folds;
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

AreaSummary evaluate_areas(const LinearPredictor& model, const SizeFunction& v,
                           const Dataset& test) {
  AreaSummary s;
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    const Eigen::VectorXd g = model.scores(test.X.row(i).transpose());
    const PredictionCurve curve = build_curve(v, g);
    const AreaTriple at = area_losses(curve, test.labels[i]);
    s.mean_plus += at.plus;
    s.mean_minus += at.minus;
    s.mean_mid += at.mid;
  }
  const double n = static_cast<double>(test.size());
  s.mean_plus /= n;
  s.mean_minus /= n;
  s.mean_mid /= n;
  return s;
}

ScoreFunction oracle_scores(const Generator& gen, const SizeFunction& v, double eps_smooth) {
  return [gen, v, eps_smooth](const Eigen::VectorXd& x) {
    Eigen::VectorXd q = gen.true_conditional(x);
    if (eps_smooth > 0.0) q += eps_smooth * v.dominated_measure();
    q = q.cwiseMax(1e-300);
    return separable_min(v, q);
  };
}

ScoreFunction predictor_scores(const LinearPredictor& model) {
  return [model](const Eigen::VectorXd& x) { return model.scores(x); };
}

std::vector<int> interval_cells(const LinearPredictor& interval_model, const CellGrid& grid,
                                const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = interval_model.scores(x);
  std::vector<int> cells;
  for (int i = 0; i < grid.k; ++i) {
    const double c = grid.center(i);
    if (c >= g[0] && c <= g[1]) cells.push_back(i);
  }
  return cells;
}

int connected_components(const std::vector<int>& cells) {
  int comps = 0;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (i == 0 || cells[i] != cells[i - 1] + 1) ++comps;
  return comps;
}

}  // namespace setpred
