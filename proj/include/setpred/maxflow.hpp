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

#include <vector>

namespace setpred::detail {

// Dinic max-flow with double capacities; sized for the small bipartite
// graphs that arise from cover minimization (hundreds of nodes).
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  void add_edge(int from, int to, double capacity);
  double solve(int source, int sink);

  // After solve(): nodes reachable from the source in the residual graph
  // (the minimal source side of a minimum cut).
  std::vector<char> source_side() const;

 private:
  struct Edge {
    int to;
    double cap;
    int rev;
  };
  bool bfs(int s, int t);
  double dfs(int v, int t, double pushed);

  int n_;
  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<int> iter_;
  int source_ = -1;
};

}  // namespace setpred::detail
