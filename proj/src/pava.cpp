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

#include "setpred/pava.hpp"

#include <stdexcept>
#include <vector>

namespace setpred {

Eigen::VectorXd pava_nonincreasing(const Eigen::VectorXd& targets, const Eigen::VectorXd& weights) {
  const int k = static_cast<int>(targets.size());
  if (weights.size() != k) throw std::invalid_argument("pava: dimension mismatch");
  if ((weights.array() <= 0.0).any()) throw std::invalid_argument("pava: weights must be positive");

  struct Block {
    double mean;
    double weight;
    int len;
  };
  std::vector<Block> stack;
  stack.reserve(k);
  for (int i = 0; i < k; ++i) {
    Block b{targets[i], weights[i], 1};
    // A later block with a larger mean violates non-increase; merge.
    while (!stack.empty() && b.mean > stack.back().mean - 0.0) {
      const Block& prev = stack.back();
      const double w = prev.weight + b.weight;
      b.mean = (prev.mean * prev.weight + b.mean * b.weight) / w;
      b.weight = w;
      b.len += prev.len;
      stack.pop_back();
    }
    stack.push_back(b);
  }
  Eigen::VectorXd out(k);
  int pos = 0;
  for (const Block& b : stack)
    for (int i = 0; i < b.len; ++i) out[pos++] = b.mean;
  return out;
}

}  // namespace setpred
