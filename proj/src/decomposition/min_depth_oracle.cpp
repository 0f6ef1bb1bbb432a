// Copyright 2026 The yr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>

#include "common/error.hpp"
#include "decomposition/join_tree.hpp"

namespace yr {

namespace {

constexpr std::size_t kMaxOracleEdges = 7;

using TreeEdges = std::vector<std::pair<int, int>>;

/// Decodes a Pruefer sequence over n labelled nodes into the n-1 tree edges.
TreeEdges decode_pruefer(const std::vector<int>& seq, int n) {
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int x : seq) ++degree[static_cast<std::size_t>(x)];
  TreeEdges edges;
  for (int x : seq) {
    for (int leaf = 0; leaf < n; ++leaf) {
      if (degree[static_cast<std::size_t>(leaf)] == 1) {
        edges.emplace_back(leaf, x);
        --degree[static_cast<std::size_t>(leaf)];
        --degree[static_cast<std::size_t>(x)];
        break;
      }
    }
  }
  int u = -1;
  for (int i = 0; i < n; ++i)
    if (degree[static_cast<std::size_t>(i)] == 1) {
      if (u < 0) {
        u = i;
      } else {
        edges.emplace_back(u, i);
        break;
      }
    }
  return edges;
}

/// Minimum over roots of the maximum distance to any node.
int radius(const TreeEdges& edges, int n) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  int best = std::numeric_limits<int>::max();
  for (int root = 0; root < n; ++root) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(root)] = 0;
    q.push(root);
    int ecc = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      ecc = std::max(ecc, dist[static_cast<std::size_t>(u)]);
      for (int w : adj[static_cast<std::size_t>(u)])
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push(w);
        }
    }
    best = std::min(best, ecc);
  }
  return best;
}

}  // namespace

int min_depth_oracle(const Hypergraph& h) {
  const std::size_t n = h.edge_count();
  if (n > kMaxOracleEdges) throw Error(ErrorCode::TooLarge, "min_depth_oracle supports at most 7 edges");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "min_depth_oracle on an empty hypergraph");
  if (n == 1) return 0;

  // Vertices as bit positions. With at most 7 edges a vertex set is small
  // but not necessarily below 64, so use one bit vector per vertex instead:
  // holder[v] has bit i set iff edge i contains v.
  std::vector<std::uint32_t> holders;
  std::vector<int> edge_size(n, 0);
  {
    std::vector<std::string> labels = h.labels();
    std::map<std::string, std::uint32_t> mask;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& v : h.edge(labels[i])) mask[v] |= 1U << i;
    for (const auto& [v, m] : mask) holders.push_back(m);
    for (std::size_t i = 0; i < n; ++i) edge_size[i] = static_cast<int>(h.edge(labels[i]).size());
  }
  // A spanning tree satisfies the connectedness condition iff the summed
  // intersection sizes over its edges equal sum(|e|) - |V|: for every vertex
  // the holders induce a forest, which is connected iff it has
  // |holders| - 1 tree edges.
  int target = -static_cast<int>(holders.size());
  for (int s : edge_size) target += s;

  std::vector<std::vector<int>> shared(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::uint32_t m : holders)
        if (((m >> i) & 1U) && ((m >> j) & 1U)) ++shared[i][j];

  const int nodes = static_cast<int>(n);
  std::vector<int> seq(n - 2, 0);
  int best = std::numeric_limits<int>::max();
  for (;;) {
    TreeEdges edges = decode_pruefer(seq, nodes);
    int weight = 0;
    for (auto [a, b] : edges) weight += shared[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    if (weight == target) best = std::min(best, radius(edges, nodes));
    // Next sequence in lexicographic order.
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == nodes) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  if (best == std::numeric_limits<int>::max())
    throw Error(ErrorCode::NoJoinTree, "hypergraph is cyclic: no join tree exists");
  return best;
}

}  // namespace yr
