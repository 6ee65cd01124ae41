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

#include "setpred/maxflow.hpp"

#include <limits>
#include <queue>

namespace setpred::detail {

namespace {
constexpr double kFlowEps = 1e-12;
}

MaxFlow::MaxFlow(int nodes) : n_(nodes), graph_(nodes), level_(nodes), iter_(nodes) {}

void MaxFlow::add_edge(int from, int to, double capacity) {
  graph_[from].push_back({to, capacity, static_cast<int>(graph_[to].size())});
  graph_[to].push_back({from, 0.0, static_cast<int>(graph_[from].size()) - 1});
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(n_, -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const Edge& e : graph_[v])
      if (e.cap > kFlowEps && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        q.push(e.to);
      }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(int v, int t, double pushed) {
  if (v == t) return pushed;
  for (int& i = iter_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
    Edge& e = graph_[v][i];
    if (e.cap > kFlowEps && level_[v] < level_[e.to]) {
      const double d = dfs(e.to, t, std::min(pushed, e.cap));
      if (d > kFlowEps) {
        e.cap -= d;
        graph_[e.to][e.rev].cap += d;
        return d;
      }
    }
  }
  return 0.0;
}

double MaxFlow::solve(int source, int sink) {
  source_ = source;
  double flow = 0.0;
  while (bfs(source, sink)) {
    iter_.assign(n_, 0);
    double pushed;
    while ((pushed = dfs(source, sink, std::numeric_limits<double>::infinity())) > kFlowEps)
      flow += pushed;
  }
  return flow;
}

std::vector<char> MaxFlow::source_side() const {
  std::vector<char> seen(n_, 0);
  std::queue<int> q;
  seen[source_] = 1;
  q.push(source_);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const Edge& e : graph_[v])
      if (e.cap > kFlowEps && !seen[e.to]) {
        seen[e.to] = 1;
        q.push(e.to);
      }
  }
  return seen;
}

}  // namespace setpred::detail
