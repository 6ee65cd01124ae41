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

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "setpred/feature_map.hpp"
#include "setpred/size_function.hpp"

namespace setpred {

// Linear-in-features score model g_j(x) = w_j' phi(x). When the feature map
// carries an intercept, the last row of `weights` is the unpenalized
// intercept beta_j. Serializes to a versioned JSON model file.
struct LinearPredictor {
  FeatureMap map;
  Eigen::MatrixXd weights;  // dim x k
  std::optional<SizeFunction> size_function;
  double eps_smooth = 0.0;
  double lambda_reg = 0.0;
  std::string loss_name;  // "choquet", "square", "softmax", "interval"

  int outputs() const { return static_cast<int>(weights.cols()); }

  Eigen::VectorXd scores(const Eigen::VectorXd& x) const { return weights.transpose() * map.embed(x); }
  // n x k matrix of scores.
  Eigen::MatrixXd scores_all(const Eigen::MatrixXd& X) const;

  void save(const std::string& path) const;
  static LinearPredictor load(const std::string& path);
  nlohmann::json to_json() const;
  static LinearPredictor from_json(const nlohmann::json& j);
};

}  // namespace setpred
