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

#include "setpred/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "setpred/errors.hpp"

namespace setpred {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw ConfigError("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ostringstream os;
  const Eigen::Index d = data.X.cols();
  for (Eigen::Index c = 0; c < d; ++c) os << "x_" << c << ",";
  os << "y\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < d; ++c) os << format_float(data.X(i, c)) << ",";
    if (data.regression) {
      std::string y = format_float(data.y_real[i]);
      // keep a decimal marker so the reader can tell responses from labels
      if (y.find_first_of(".eE") == std::string::npos) y += ".0";
      os << y;
    } else {
      os << data.labels[i];
    }
    os << "\n";
  }
  atomic_write(path, os.str());
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset '" + path + "': missing header row");
  const auto header = split_line(line);
  if (header.empty() || header.back() != "y")
    throw ConfigError("dataset '" + path + "': header must end with 'y'");
  const int d = static_cast<int>(header.size()) - 1;
  for (int c = 0; c < d; ++c)
    if (header[c] != "x_" + std::to_string(c))
      throw ConfigError("dataset '" + path + "': unexpected header column '" + header[c] + "'");

  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  bool regression = false;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (static_cast<int>(cells.size()) != d + 1)
      throw ConfigError("dataset '" + path + "': line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " cells, expected " + std::to_string(d + 1));
    std::vector<double> row(d);
    try {
      std::size_t used = 0;
      for (int c = 0; c < d; ++c) {
        row[c] = std::stod(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument(cells[c]);
      }
      const double y = std::stod(cells[d], &used);
      if (used != cells[d].size()) throw std::invalid_argument(cells[d]);
      if (cells[d].find_first_of(".eE") != std::string::npos) regression = true;
      ys.push_back(y);
    } catch (const std::exception&) {
      throw ConfigError("dataset '" + path + "': malformed number at line " +
                        std::to_string(line_no));
    }
    xs.push_back(std::move(row));
  }

  Dataset data;
  data.regression = regression;
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  data.X.resize(n, d);
  data.labels.resize(n);
  data.y_real.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) data.X(i, c) = xs[i][c];
    data.y_real[i] = ys[i];
    data.labels[i] = regression ? 0 : static_cast<int>(ys[i]);
  }
  return data;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) os << ",";
    os << header[c];
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << row[c];
    }
    os << "\n";
  }
  atomic_write(path, os.str());
}

Dataset Dataset::slice(Eigen::Index begin, Eigen::Index count) const {
  Dataset out;
  out.regression = regression;
  out.X = X.middleRows(begin, count);
  out.labels = labels.segment(begin, count);
  out.y_real = y_real.segment(begin, count);
  return out;
}

}  // namespace setpred
