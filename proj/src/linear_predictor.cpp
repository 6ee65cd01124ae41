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

#include "setpred/linear_predictor.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "setpred/errors.hpp"

namespace setpred {

namespace {
constexpr int kModelVersion = 1;
}

Eigen::MatrixXd LinearPredictor::scores_all(const Eigen::MatrixXd& X) const {
  return map.embed_all(X) * weights;
}

nlohmann::json LinearPredictor::to_json() const {
  nlohmann::json j;
  j["version"] = kModelVersion;
  j["map"] = map.to_json();
  std::vector<std::vector<double>> w;
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    std::vector<double> row(weights.cols());
    for (Eigen::Index c = 0; c < weights.cols(); ++c) row[c] = weights(i, c);
    w.push_back(std::move(row));
  }
  j["weights"] = w;
  if (size_function) j["size_function"] = size_function->to_json();
  j["eps_smooth"] = eps_smooth;
  j["lambda_reg"] = lambda_reg;
  j["loss"] = loss_name;
  return j;
}

LinearPredictor LinearPredictor::from_json(const nlohmann::json& j) {
  const int version = j.at("version").get<int>();
  if (version != kModelVersion)
    throw ConfigError("model file version " + std::to_string(version) + " unsupported");
  LinearPredictor p;
  p.map = FeatureMap::from_json(j.at("map"));
  const auto w = j.at("weights").get<std::vector<std::vector<double>>>();
  const int rows = static_cast<int>(w.size());
  const int cols = rows > 0 ? static_cast<int>(w[0].size()) : 0;
  p.weights.resize(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) p.weights(i, c) = w[i][c];
  if (j.contains("size_function")) p.size_function = SizeFunction::from_json(j.at("size_function"));
  p.eps_smooth = j.value("eps_smooth", 0.0);
  p.lambda_reg = j.value("lambda_reg", 0.0);
  p.loss_name = j.value("loss", std::string());
  return p;
}

void LinearPredictor::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp + "' for writing");
    out << to_json().dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

LinearPredictor LinearPredictor::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("model '" + path + "': invalid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace setpred
