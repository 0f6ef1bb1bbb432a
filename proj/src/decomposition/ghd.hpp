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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "decomposition/join_tree.hpp"
#include "frontend/conjunctive_query.hpp"

namespace yr {

struct GhdNode {
  std::string id;
  VertexSet bag;
  std::set<std::string> cover;  // atom ids

  friend bool operator==(const GhdNode&, const GhdNode&) = default;
};

/// Generalized hypertree decomposition: a tree of (bag, cover) nodes.
struct GHDecomposition {
  std::vector<GhdNode> nodes;
  std::string root;
  std::map<std::string, std::string> parent;  // child -> parent

  std::size_t width() const;
  const GhdNode* find(const std::string& id) const;
  std::vector<std::string> pre_order() const;

  friend bool operator==(const GHDecomposition&, const GHDecomposition&) = default;
};

/// Search over covers of at most `width` atoms. Every atom is placed in at
/// least one cover and each bag is the full variable union of its cover; the
/// bags must form an acyclic hypergraph, whose Flat-GYO tree becomes the
/// decomposition tree. For the atom with the smallest uncovered label the
/// candidate covers are tried disjoint-first, then by decreasing size, then
/// lexicographically (shuffled instead when `seed` != 0).
///
/// Not shareable across threads; each thread needs its own enumerator.
class GhdEnumerator {
 public:
  GhdEnumerator(const Hypergraph& h, int width, std::uint64_t seed = 0,
                std::size_t node_budget = 2'000'000);
  ~GhdEnumerator();
  GhdEnumerator(GhdEnumerator&&) noexcept;
  GhdEnumerator& operator=(GhdEnumerator&&) noexcept;

  /// Next distinct decomposition, or nullopt when the space (or the budget)
  /// is exhausted.
  std::optional<GHDecomposition> next();

  bool budget_exhausted() const;
  std::size_t nodes_explored() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Smallest-width decomposition of width <= `width`, or nullopt. Throws
/// TooLarge for more than 12 edges and InvalidArgument for widths outside
/// {1,2,3}.
std::optional<GHDecomposition> find_ghd(const Hypergraph& h, int width, std::uint64_t seed = 0);

/// Up to `limit` distinct decompositions of width <= `width`.
std::vector<GHDecomposition> enumerate_ghds(const Hypergraph& h, int width, std::size_t limit,
                                            std::uint64_t seed = 0);

/// Edge coverage, bag containment in the cover's variables and per-variable
/// connectedness over bags; also checks that the structure is a tree.
bool validate_ghd(const Hypergraph& h, const GHDecomposition& g);

/// One source of a view: a base atom with its selections. A filter-only source
/// contributes `distinct(project(atom, vars(atom) & bag))`, which restricts the
/// view without changing multiplicities.
struct ViewSource {
  std::string atom;
  bool filter_only = false;

  friend bool operator==(const ViewSource&, const ViewSource&) = default;
};

struct ViewDefinition {
  std::string id;
  VertexSet bag;
  std::vector<ViewSource> sources;

  friend bool operator==(const ViewDefinition&, const ViewDefinition&) = default;
};

struct GhdJoinTree {
  JoinTree tree;
  std::vector<ViewDefinition> views;
};

/// Each GHD node becomes a View node joining its cover atoms, projected to its
/// bag. Every atom is owned by exactly one node (the first in pre-order whose
/// bag holds its variables, preferring nodes that list it in their cover); other
/// covering occurrences act as duplicate-free filters so bag multiplicities
/// stay exact. Throws InvalidGHD.
GhdJoinTree ghd_to_join_tree(const GHDecomposition& g, const ConjunctiveQuery& cq);

/// JSON document `{"nodes":[{"id","bag","cover"}],"edges":[[parent,child]],"root"}`.
std::string write_ghd(const GHDecomposition& g);
GHDecomposition read_ghd(std::string_view text);

}  // namespace yr
