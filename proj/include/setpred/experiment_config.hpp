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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setpred/coverage.hpp"
#include "setpred/generators.hpp"
#include "setpred/kernel.hpp"
#include "setpred/linear_predictor.hpp"
#include "setpred/size_function.hpp"
#include "setpred/train.hpp"

namespace setpred {

// One experiment: a generator, a kernel, a size function, a loss, and the
// training / evaluation settings. Loaded from a JSON file; every field is
// validated with a field-level message.
struct ExperimentConfig {
  Generator generator;
  KernelSpec kernel;
  SizeFunction size_function;
  std::string loss = "choquet";  // choquet | square | softmax | interval

  double eps_smooth = 1e-2;
  std::vector<double> lambda_grid;  // single entry = fixed ridge
  double alpha = 0.1;
  std::uint64_t seed = 1;
  int replications = 1;
  int train_n = 1000;
  int test_n = 1000;
  int cal_n = 200;
  int grid_points = 200;
  int cv_folds = 5;
  double cholesky_tol = 1e-3;
  double eta_floor = 1e-6;
  double laplacian_strength = 0.0;
  std::optional<double> post_cluster_eps;  // W = eps M + (1-eps) V when set
  long sgd_steps = 200000;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

// FNV-1a hash of the canonical JSON dump, for the run manifest.
std::string config_hash(const ExperimentConfig& config);

// Feature map for one replication's training inputs.
FeatureMap build_map(const ExperimentConfig& config, const Eigen::MatrixXd& X);

// Dispatch on config.loss (and the size-function family for "choquet").
LinearPredictor train_for_config(const ExperimentConfig& config, const Dataset& train,
                                 double lambda_reg);

// Mean held-out criterion used for cross-validation: the matching loss for
// each trainer (set-prediction loss, squared error, log loss, pinball sum).
double heldout_objective(const ExperimentConfig& config, const LinearPredictor& model,
                         const Dataset& val);

// 5-fold CV over config.lambda_grid; single-entry grids short-circuit.
double select_lambda_cv(const ExperimentConfig& config, const Dataset& train);

struct AreaSummary {
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  double mean_mid = 0.0;
};
AreaSummary evaluate_areas(const LinearPredictor& model, const SizeFunction& v,
                           const Dataset& test);

// Population-optimal scores from the exact conditional law (with the
// label-smoothed law when eps > 0).
ScoreFunction oracle_scores(const Generator& gen, const SizeFunction& v, double eps_smooth);

ScoreFunction predictor_scores(const LinearPredictor& model);

// Cells whose center lies in the predicted interval [lo(x), hi(x)].
std::vector<int> interval_cells(const LinearPredictor& interval_model, const CellGrid& grid,
                                const Eigen::VectorXd& x);

// Runs of consecutive indices in a sorted set of cells.
int connected_components(const std::vector<int>& cells);

}  // namespace setpred
