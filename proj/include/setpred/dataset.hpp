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

// Supervised sample. For classification `labels` hold class indices and
// `y_real` mirrors them as doubles; for regression `y_real` holds the raw
// responses and `labels` the cell indices under the task's cell grid.
struct Dataset {
  Eigen::MatrixXd X;       // n x d, rows are inputs
  Eigen::VectorXi labels;  // n
  Eigen::VectorXd y_real;  // n
  bool regression = false;

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index xdim() const { return X.cols(); }

  Dataset slice(Eigen::Index begin, Eigen::Index count) const;
};

}  // namespace setpred
