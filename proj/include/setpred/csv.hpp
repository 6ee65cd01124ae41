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

#include <string>
#include <vector>

#include "setpred/dataset.hpp"

namespace setpred {

// Header row "x_0,..,x_{d-1},y"; floats printed with 17 significant digits so
// a write/read round trip is lossless. Classification labels are written as
// integers.
void write_dataset_csv(const std::string& path, const Dataset& data);

// Throws ConfigError naming the first offending line on malformed input.
Dataset read_dataset_csv(const std::string& path);

// Generic small-table writer: one header row, then rows of cells; used for
// curve / report / eval outputs. Writes to a temporary file and renames.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

std::string format_float(double v);  // %.17g

}  // namespace setpred
