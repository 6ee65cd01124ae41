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

#include "setpred/loss.hpp"

#include <stdexcept>

namespace setpred {

double choquet_loss(const SizeFunction& v, const Eigen::VectorXd& f, int y, double eps_smooth,
                    const Eigen::VectorXd& smoothing_measure) {
  if (y < 0 || y >= v.ground_size()) throw std::invalid_argument("choquet_loss: label out of range");
  double loss = v.lovasz(f) + 0.5 * f[y] * f[y];
  if (eps_smooth > 0.0) {
    if (smoothing_measure.size() != f.size())
      throw std::invalid_argument("choquet_loss: smoothing measure dimension mismatch");
    loss += 0.5 * eps_smooth * (smoothing_measure.array() * f.array().square()).sum();
  }
  return loss;
}

double choquet_risk(const SizeFunction& v, const Eigen::VectorXd& f, const Eigen::VectorXd& pi,
                    double eps_smooth, const Eigen::VectorXd& smoothing_measure) {
  if (pi.size() != f.size()) throw std::invalid_argument("choquet_risk: dimension mismatch");
  double risk = v.lovasz(f) + 0.5 * (pi.array() * f.array().square()).sum();
  if (eps_smooth > 0.0)
    risk += 0.5 * eps_smooth * (smoothing_measure.array() * f.array().square()).sum();
  return risk;
}

}  // namespace setpred
