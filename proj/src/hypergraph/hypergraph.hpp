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

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "frontend/conjunctive_query.hpp"

namespace yr {

using VertexSet = std::set<std::string>;

/// Query hypergraph: variables are vertices, each atom contributes one edge
/// labelled with the atom id. Labels never change, even when the vertex set
/// of an edge shrinks during reduction.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(std::map<std::string, VertexSet> edges) : edges_(std::move(edges)) {}

  void add_edge(const std::string& label, VertexSet vertices) { edges_[label] = std::move(vertices); }
  void remove_edge(const std::string& label) { edges_.erase(label); }

  const std::map<std::string, VertexSet>& edges() const { return edges_; }
  const VertexSet& edge(const std::string& label) const { return edges_.at(label); }
  bool has_edge(const std::string& label) const { return edges_.count(label) > 0; }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  std::vector<std::string> labels() const;
  VertexSet vertices() const;

  /// `label: v1 v2 ...`, one line per edge in label order.
  std::string dump() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::map<std::string, VertexSet> edges_;
};

Hypergraph build_hypergraph(const ConjunctiveQuery& cq);

/// True iff the edge-intersection graph is connected. A single edge is
/// connected; so is a hypergraph with exactly one (possibly empty) edge.
bool is_connected(const Hypergraph& h);

/// Connected components of the edge-intersection graph, each ordered by label;
/// components are ordered by their smallest label.
std::vector<Hypergraph> connected_components(const Hypergraph& h);

}  // namespace yr
