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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hypergraph/hypergraph.hpp"

namespace yr {

struct NodeLabel {
  enum class Kind { BaseAtom, View };
  Kind kind = Kind::BaseAtom;
  std::string ref;  // atom id or view id

  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

/// Rooted labelled tree over atoms (or views). Node ids coincide with the
/// label's ref. Children are kept implicitly through `parent` and always
/// enumerated in lexicographic order.
struct JoinTree {
  std::string root;
  std::map<std::string, std::string> parent;  // child -> parent
  std::map<std::string, NodeLabel> label;
  std::map<std::string, VertexSet> attrs;     // Att(u)

  std::vector<std::string> nodes() const;
  std::size_t size() const { return label.size(); }
  bool contains(const std::string& node) const { return label.count(node) > 0; }
  std::vector<std::string> children(const std::string& node) const;
  bool is_leaf(const std::string& node) const { return children(node).empty(); }
  std::vector<std::string> pre_order() const;
  std::vector<std::string> post_order() const;
  int depth() const;
  int depth_of(const std::string& node) const;
  /// Path of nodes from `from` to `to`, both included.
  std::vector<std::string> path(const std::string& from, const std::string& to) const;

  void add_node(const std::string& id, NodeLabel lbl, VertexSet vars, const std::string& parent_id = "");

  /// Indented rendering, one node per line, used by reports and golden tests.
  std::string render() const;

  friend bool operator==(const JoinTree&, const JoinTree&) = default;
};

/// Same tree with `new_root` as root; connectedness is root independent.
JoinTree reroot(const JoinTree& t, const std::string& new_root);

/// Result of Flat-GYO: a join tree for acyclic input, otherwise the residual
/// hypergraph on which no reduction step applies.
struct GyoResult {
  std::optional<JoinTree> tree;
  Hypergraph residual;
  int rounds = 0;

  bool acyclic() const { return tree.has_value(); }
};

/// Flat-GYO on a connected hypergraph. Each round deletes every degree-1
/// vertex, then visits the maximal edges in label order and hangs every
/// other remaining edge contained in the visited one below it (children in
/// label order). The resulting tree has minimum depth among all join trees.
/// Throws DisconnectedInput.
GyoResult flat_gyo(const Hypergraph& h);

/// Join tree for a possibly disconnected hypergraph: one Flat-GYO tree per
/// component, later components hung below the first component's root (a
/// cross product). `warnings` receives a note when that happens.
GyoResult build_join_tree(const Hypergraph& h, std::vector<std::string>* warnings = nullptr);

/// Labels biject onto the hypergraph's edges and every vertex occurs in a
/// connected set of nodes.
bool is_valid_join_tree(const Hypergraph& h, const JoinTree& t);

/// Brute force: minimum depth over all labelled trees on the edges that
/// satisfy the connectedness condition. Throws TooLarge (> 7 edges) and
/// NoJoinTree (cyclic input).
int min_depth_oracle(const Hypergraph& h);

}  // namespace yr
