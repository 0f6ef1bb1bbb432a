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

#include "decomposition/ghd.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <random>

#include "common/error.hpp"

namespace yr {

std::size_t GHDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& n : nodes) w = std::max(w, n.cover.size());
  return w;
}

const GhdNode* GHDecomposition::find(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<std::string> GHDecomposition::pre_order() const {
  std::map<std::string, std::vector<std::string>> kids;
  for (const auto& [child, par] : parent) kids[par].push_back(child);
  std::vector<std::string> out;
  if (root.empty()) return out;
  std::vector<std::string> stack{root};
  std::set<std::string> seen;
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    out.push_back(cur);
    auto it = kids.find(cur);
    if (it != kids.end())
      for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) stack.push_back(*c);
  }
  return out;
}

namespace {

constexpr std::size_t kMaxGhdEdges = 12;

using Mask = std::uint32_t;

void check_search_args(const Hypergraph& h, int width) {
  if (width < 1 || width > 3) throw Error(ErrorCode::InvalidArgument, "GHD width must be 1, 2 or 3");
  if (h.edge_count() > kMaxGhdEdges)
    throw Error(ErrorCode::TooLarge, "GHD search supports at most 12 edges, got " + std::to_string(h.edge_count()));
  if (h.empty()) throw Error(ErrorCode::InvalidArgument, "GHD search on an empty hypergraph");
}

}  // namespace

struct GhdEnumerator::State {
  std::vector<std::string> labels;
  std::vector<VertexSet> vars;
  Mask all = 0;
  int width = 1;
  std::size_t budget = 0;
  std::size_t explored = 0;
  bool exhausted_budget = false;
  // Candidate covers containing atom i, in trial order (before the
  // disjoint-first pass).
  std::vector<std::vector<Mask>> candidates;

  struct Frame {
    std::vector<Mask> chosen;
    Mask covered = 0;
    std::vector<Mask> options;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  std::set<std::vector<Mask>> emitted;  // every cover set already checked

  Mask union_of(const std::vector<Mask>& chosen) const {
    Mask m = 0;
    for (Mask c : chosen) m |= c;
    return m;
  }

  VertexSet bag_of(Mask cover) const {
    VertexSet bag;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if ((cover >> i) & 1U) bag.insert(vars[i].begin(), vars[i].end());
    return bag;
  }

  Frame make_frame(std::vector<Mask> chosen, Mask covered) const {
    Frame f;
    f.chosen = std::move(chosen);
    f.covered = covered;
    if (covered == all) return f;
    const std::size_t target = static_cast<std::size_t>(std::countr_one(covered));
    const Mask used = union_of(f.chosen);
    std::vector<Mask> disjoint;
    std::vector<Mask> overlapping;
    for (Mask c : candidates[target]) {
      if (std::find(f.chosen.begin(), f.chosen.end(), c) != f.chosen.end()) continue;
      ((c & used) == 0 ? disjoint : overlapping).push_back(c);
    }
    f.options = std::move(disjoint);
    f.options.insert(f.options.end(), overlapping.begin(), overlapping.end());
    return f;
  }

  std::optional<GHDecomposition> complete(const std::vector<Mask>& chosen) const {
    Hypergraph bags;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      ids.push_back("v" + std::to_string(i + 1));
      bags.add_edge(ids.back(), bag_of(chosen[i]));
    }
    // Bags that are disconnected from each other are fine: they get linked
    // below the first root, which keeps per-variable connectedness.
    GyoResult r = build_join_tree(bags);
    if (!r.acyclic()) return std::nullopt;
    GHDecomposition g;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      GhdNode node;
      node.id = ids[i];
      node.bag = bags.edge(ids[i]);
      for (std::size_t a = 0; a < labels.size(); ++a)
        if ((chosen[i] >> a) & 1U) node.cover.insert(labels[a]);
      g.nodes.push_back(std::move(node));
    }
    g.root = r.tree->root;
    g.parent = r.tree->parent;
    return g;
  }
};

GhdEnumerator::GhdEnumerator(const Hypergraph& h, int width, std::uint64_t seed, std::size_t node_budget)
    : state_(std::make_unique<State>()) {
  check_search_args(h, width);
  State& s = *state_;
  s.labels = h.labels();
  for (const auto& l : s.labels) s.vars.push_back(h.edge(l));
  const std::size_t n = s.labels.size();
  s.all = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
  s.width = width;
  s.budget = node_budget;

  std::vector<Mask> subsets;
  for (Mask m = 1; m <= s.all; ++m)
    if (std::popcount(m) <= width) subsets.push_back(m);
  // Larger covers first, then lexicographic on the sorted label lists (the
  // labels are already sorted, so comparing bit positions low to high works).
  auto lex_key = [&](Mask m) {
    std::vector<int> bits;
    for (std::size_t i = 0; i < n; ++i)
      if ((m >> i) & 1U) bits.push_back(static_cast<int>(i));
    return bits;
  };
  std::sort(subsets.begin(), subsets.end(), [&](Mask a, Mask b) {
    if (std::popcount(a) != std::popcount(b)) return std::popcount(a) > std::popcount(b);
    return lex_key(a) < lex_key(b);
  });
  std::mt19937_64 rng(seed);
  s.candidates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Mask m : subsets)
      if ((m >> i) & 1U) s.candidates[i].push_back(m);
    if (seed != 0) std::shuffle(s.candidates[i].begin(), s.candidates[i].end(), rng);
  }
  s.stack.push_back(s.make_frame({}, 0));
}

GhdEnumerator::~GhdEnumerator() = default;
GhdEnumerator::GhdEnumerator(GhdEnumerator&&) noexcept = default;
GhdEnumerator& GhdEnumerator::operator=(GhdEnumerator&&) noexcept = default;

std::optional<GHDecomposition> GhdEnumerator::next() {
  State& s = *state_;
  while (!s.stack.empty()) {
    if (s.explored >= s.budget) {
      s.exhausted_budget = true;
      s.stack.clear();
      return std::nullopt;
    }
    State::Frame& top = s.stack.back();
    if (top.covered == s.all) {
      std::vector<Mask> chosen = std::move(top.chosen);
      s.stack.pop_back();
      std::vector<Mask> key = chosen;
      std::sort(key.begin(), key.end());
      if (!s.emitted.insert(std::move(key)).second) continue;
      if (auto g = s.complete(chosen)) return g;
      continue;
    }
    if (top.next >= top.options.size()) {
      s.stack.pop_back();
      continue;
    }
    Mask pick = top.options[top.next++];
    ++s.explored;
    std::vector<Mask> chosen = top.chosen;
    chosen.push_back(pick);
    Mask covered = top.covered | pick;
    s.stack.push_back(s.make_frame(std::move(chosen), covered));
  }
  return std::nullopt;
}

bool GhdEnumerator::budget_exhausted() const { return state_->exhausted_budget; }
std::size_t GhdEnumerator::nodes_explored() const { return state_->explored; }

std::optional<GHDecomposition> find_ghd(const Hypergraph& h, int width, std::uint64_t seed) {
  check_search_args(h, width);
  for (int w = 1; w <= width; ++w) {
    GhdEnumerator e(h, w, seed);
    if (auto g = e.next()) return g;
  }
  return std::nullopt;
}

std::vector<GHDecomposition> enumerate_ghds(const Hypergraph& h, int width, std::size_t limit,
                                            std::uint64_t seed) {
  std::vector<GHDecomposition> out;
  GhdEnumerator e(h, width, seed);
  while (out.size() < limit) {
    auto g = e.next();
    if (!g) break;
    out.push_back(std::move(*g));
  }
  return out;
}

namespace {

/// Tree shape only: unique ids, root known, every node reaches the root.
bool is_tree_shape(const GHDecomposition& g) {
  std::set<std::string> ids;
  for (const auto& n : g.nodes)
    if (!ids.insert(n.id).second) return false;
  if (!ids.count(g.root) || g.parent.count(g.root)) return false;
  if (g.parent.size() + 1 != ids.size()) return false;
  for (const auto& [child, par] : g.parent)
    if (!ids.count(child) || !ids.count(par)) return false;
  for (const auto& id : ids) {
    std::string cur = id;
    std::size_t steps = 0;
    while (cur != g.root) {
      auto it = g.parent.find(cur);
      if (it == g.parent.end() || ++steps > ids.size()) return false;
      cur = it->second;
    }
  }
  return true;
}

}  // namespace

bool validate_ghd(const Hypergraph& h, const GHDecomposition& g) {
  if (g.nodes.empty() || !is_tree_shape(g)) return false;
  for (const auto& n : g.nodes) {
    VertexSet covered;
    for (const auto& a : n.cover) {
      if (!h.has_edge(a)) return false;
      covered.insert(h.edge(a).begin(), h.edge(a).end());
    }
    if (!std::includes(covered.begin(), covered.end(), n.bag.begin(), n.bag.end())) return false;
  }
  for (const auto& [label, vs] : h.edges()) {
    bool placed = false;
    for (const auto& n : g.nodes)
      if (std::includes(n.bag.begin(), n.bag.end(), vs.begin(), vs.end())) {
        placed = true;
        break;
      }
    if (!placed) return false;
  }
  // Per-variable connectedness: exactly one holder without a holding parent.
  std::map<std::string, int> tops;
  for (const auto& n : g.nodes) {
    auto it = g.parent.find(n.id);
    const GhdNode* par = it == g.parent.end() ? nullptr : g.find(it->second);
    for (const auto& v : n.bag)
      if (!par || !par->bag.count(v)) ++tops[v];
  }
  for (const auto& [v, count] : tops)
    if (count != 1) return false;
  return true;
}

GhdJoinTree ghd_to_join_tree(const GHDecomposition& g, const ConjunctiveQuery& cq) {
  const Hypergraph h = build_hypergraph(cq);
  if (!validate_ghd(h, g)) throw Error(ErrorCode::InvalidGhd, "decomposition is not a valid GHD of the query");

  const std::vector<std::string> order = g.pre_order();
  std::map<std::string, std::string> owner;
  for (const auto& atom : cq.atoms) {
    const VertexSet vs = atom.variables();
    std::string fallback;
    for (const auto& id : order) {
      const GhdNode& n = *g.find(id);
      if (!std::includes(n.bag.begin(), n.bag.end(), vs.begin(), vs.end())) continue;
      if (n.cover.count(atom.id)) {
        owner[atom.id] = id;
        break;
      }
      if (fallback.empty()) fallback = id;
    }
    if (!owner.count(atom.id)) {
      if (fallback.empty()) throw Error(ErrorCode::InvalidGhd, "no bag holds the variables of atom " + atom.id);
      owner[atom.id] = fallback;
    }
  }

  GhdJoinTree out;
  for (const auto& id : order) {
    const GhdNode& n = *g.find(id);
    ViewDefinition view;
    view.id = id;
    view.bag = n.bag;
    for (const auto& atom : cq.atoms)
      if (owner.at(atom.id) == id) view.sources.push_back({atom.id, false});
    for (const auto& atom : cq.atoms)
      if (n.cover.count(atom.id) && owner.at(atom.id) != id) view.sources.push_back({atom.id, true});
    auto it = g.parent.find(id);
    out.tree.add_node(id, NodeLabel{NodeLabel::Kind::View, id}, n.bag, it == g.parent.end() ? "" : it->second);
    out.views.push_back(std::move(view));
  }
  return out;
}

}  // namespace yr
