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

#include "setpred/size_function.hpp"

namespace setpred {

// Training loss for one observation:
//   v(f) + 1/2 f_y^2 + eps/2 * sum_i M_i f_i^2,
// convex in f; eps = 0 turns the smoothing off.
double choquet_loss(const SizeFunction& v, const Eigen::VectorXd& f, int y, double eps_smooth,
                    const Eigen::VectorXd& smoothing_measure);

// Conditional risk under a known conditional law pi:
//   v(f) + 1/2 sum_i pi_i f_i^2 + eps/2 * sum_i M_i f_i^2.
double choquet_risk(const SizeFunction& v, const Eigen::VectorXd& f, const Eigen::VectorXd& pi,
                    double eps_smooth = 0.0,
                    const Eigen::VectorXd& smoothing_measure = Eigen::VectorXd());

}  // namespace setpred
