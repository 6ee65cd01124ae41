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

#include <Eigen/Core>

namespace setpred {

// Weighted least-squares projection of `targets` onto the non-increasing
// cone: minimizes sum_i weights[i] * (out[i] - targets[i])^2 subject to
// out[0] >= out[1] >= ... Pool-adjacent-violators, O(k).
Eigen::VectorXd pava_nonincreasing(const Eigen::VectorXd& targets, const Eigen::VectorXd& weights);

}  // namespace setpred
