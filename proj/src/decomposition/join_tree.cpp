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

#include "decomposition/join_tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "common/error.hpp"

namespace yr {

std::vector<std::string> JoinTree::nodes() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : label) out.push_back(id);
  return out;
}

std::vector<std::string> JoinTree::children(const std::string& node) const {
  std::vector<std::string> out;
  for (const auto& [child, par] : parent)
    if (par == node) out.push_back(child);
  return out;  // map order == lexicographic
}

std::vector<std::string> JoinTree::pre_order() const {
  std::vector<std::string> out;
  if (root.empty()) return out;
  std::map<std::string, std::vector<std::string>> kids;
  for (const auto& [child, par] : parent) kids[par].push_back(child);
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    auto it = kids.find(cur);
    if (it != kids.end())
      for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) stack.push_back(*c);
  }
  return out;
}

std::vector<std::string> JoinTree::post_order() const {
  std::vector<std::string> out;
  if (root.empty()) return out;
  std::map<std::string, std::vector<std::string>> kids;
  for (const auto& [child, par] : parent) kids[par].push_back(child);
  std::function<void(const std::string&)> visit = [&](const std::string& u) {
    auto it = kids.find(u);
    if (it != kids.end())
      for (const auto& c : it->second) visit(c);
    out.push_back(u);
  };
  visit(root);
  return out;
}

int JoinTree::depth_of(const std::string& node) const {
  int d = 0;
  std::string cur = node;
  for (auto it = parent.find(cur); it != parent.end(); it = parent.find(cur)) {
    cur = it->second;
    if (++d > static_cast<int>(label.size())) throw Error(ErrorCode::InvalidArgument, "join tree has a cycle");
  }
  return d;
}

int JoinTree::depth() const {
  int d = 0;
  for (const auto& [id, _] : label) d = std::max(d, depth_of(id));
  return d;
}

std::vector<std::string> JoinTree::path(const std::string& from, const std::string& to) const {
  auto ancestors = [&](const std::string& n) {
    std::vector<std::string> chain{n};
    for (auto it = parent.find(n); it != parent.end(); it = parent.find(chain.back())) chain.push_back(it->second);
    return chain;
  };
  std::vector<std::string> a = ancestors(from);
  std::vector<std::string> b = ancestors(to);
  while (a.size() > 1 && b.size() > 1 && a[a.size() - 2] == b[b.size() - 2]) {
    a.pop_back();
    b.pop_back();
  }
  // a.back() == b.back() is the lowest common ancestor.
  std::vector<std::string> out(a.begin(), a.end());
  for (auto it = b.rbegin() + 1; it != b.rend(); ++it) out.push_back(*it);
  return out;
}

void JoinTree::add_node(const std::string& id, NodeLabel lbl, VertexSet vars, const std::string& parent_id) {
  label[id] = std::move(lbl);
  attrs[id] = std::move(vars);
  if (parent_id.empty()) {
    root = id;
  } else {
    parent[id] = parent_id;
  }
}

std::string JoinTree::render() const {
  std::ostringstream out;
  std::function<void(const std::string&, int)> visit = [&](const std::string& u, int indent) {
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << u;
    const NodeLabel& l = label.at(u);
    if (l.kind == NodeLabel::Kind::View) out << " [view]";
    out << " {";
    bool first = true;
    for (const auto& v : attrs.at(u)) {
      out << (first ? "" : " ") << v;
      first = false;
    }
    out << "}\n";
    for (const auto& c : children(u)) visit(c, indent + 1);
  };
  if (!root.empty()) visit(root, 0);
  return out.str();
}

JoinTree reroot(const JoinTree& t, const std::string& new_root) {
  if (!t.contains(new_root)) throw Error(ErrorCode::InvalidArgument, "unknown node " + new_root);
  JoinTree out = t;
  std::vector<std::string> chain{new_root};
  for (auto it = t.parent.find(new_root); it != t.parent.end(); it = t.parent.find(chain.back()))
    chain.push_back(it->second);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) out.parent[chain[i + 1]] = chain[i];
  out.parent.erase(new_root);
  out.root = new_root;
  return out;
}

namespace {

/// Dense bit set over vertex indices; edges here are small.
class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool subset_of(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace

GyoResult flat_gyo(const Hypergraph& h) {
  if (h.empty()) throw Error(ErrorCode::InvalidArgument, "flat_gyo on an empty hypergraph");
  if (!is_connected(h)) throw Error(ErrorCode::DisconnectedInput, "flat_gyo requires a connected hypergraph");

  const std::vector<std::string> labels = h.labels();
  const std::vector<std::string> vertices = [&] {
    VertexSet vs = h.vertices();
    return std::vector<std::string>(vs.begin(), vs.end());
  }();
  const std::size_t n = labels.size();
  const std::size_t nv = vertices.size();
  std::vector<Bits> edge(n, Bits(nv));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& v : h.edge(labels[i]))
      edge[i].set(static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin()));

  std::vector<bool> alive(n, true);
  std::size_t alive_count = n;
  std::vector<std::ptrdiff_t> parent(n, -1);
  GyoResult result;

  while (alive_count > 1) {
    bool progress = false;
    ++result.rounds;
    for (std::size_t v = 0; v < nv; ++v) {
      std::size_t holder = n;
      int degree = 0;
      for (std::size_t i = 0; i < n && degree < 2; ++i)
        if (alive[i] && edge[i].test(v)) {
          ++degree;
          holder = i;
        }
      if (degree == 1) {
        edge[holder].reset(v);
        progress = true;
      }
    }
    std::vector<std::size_t> maximal;
    for (std::size_t e = 0; e < n; ++e) {
      if (!alive[e]) continue;
      bool strictly_contained = false;
      for (std::size_t f = 0; f < n && !strictly_contained; ++f)
        strictly_contained = f != e && alive[f] && edge[e].subset_of(edge[f]) && !(edge[e] == edge[f]);
      if (!strictly_contained) maximal.push_back(e);
    }
    for (std::size_t e : maximal) {
      if (!alive[e]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == e || !alive[c] || !edge[c].subset_of(edge[e])) continue;
        parent[c] = static_cast<std::ptrdiff_t>(e);
        alive[c] = false;
        --alive_count;
        progress = true;
      }
    }
    if (!progress) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        VertexSet vs;
        for (std::size_t v = 0; v < nv; ++v)
          if (edge[i].test(v)) vs.insert(vertices[v]);
        result.residual.add_edge(labels[i], std::move(vs));
      }
      return result;
    }
  }

  JoinTree tree;
  for (std::size_t i = 0; i < n; ++i) {
    tree.label[labels[i]] = NodeLabel{NodeLabel::Kind::BaseAtom, labels[i]};
    tree.attrs[labels[i]] = h.edge(labels[i]);
    if (parent[i] < 0) {
      tree.root = labels[i];
    } else {
      tree.parent[labels[i]] = labels[static_cast<std::size_t>(parent[i])];
    }
  }
  result.tree = std::move(tree);
  return result;
}

GyoResult build_join_tree(const Hypergraph& h, std::vector<std::string>* warnings) {
  if (h.empty()) throw Error(ErrorCode::EmptyTree, "query has no atoms");
  std::vector<Hypergraph> parts = connected_components(h);
  if (parts.size() == 1) return flat_gyo(h);

  GyoResult combined;
  std::vector<JoinTree> trees;
  for (const auto& part : parts) {
    GyoResult r = flat_gyo(part);
    combined.rounds = std::max(combined.rounds, r.rounds);
    if (!r.acyclic()) {
      for (const auto& [label, vs] : r.residual.edges()) combined.residual.add_edge(label, vs);
      continue;
    }
    trees.push_back(std::move(*r.tree));
  }
  if (!combined.residual.empty()) return combined;

  JoinTree tree = std::move(trees.front());
  for (std::size_t i = 1; i < trees.size(); ++i) {
    const JoinTree& t = trees[i];
    for (const auto& [id, lbl] : t.label) {
      tree.label[id] = lbl;
      tree.attrs[id] = t.attrs.at(id);
    }
    for (const auto& [child, par] : t.parent) tree.parent[child] = par;
    tree.parent[t.root] = tree.root;
  }
  if (warnings)
    warnings->push_back("query hypergraph has " + std::to_string(parts.size()) +
                        " connected components; they are combined by a cross product");
  combined.tree = std::move(tree);
  return combined;
}

bool is_valid_join_tree(const Hypergraph& h, const JoinTree& t) {
  if (t.label.size() != h.edge_count() || t.root.empty() || !t.contains(t.root)) return false;
  for (const auto& [id, lbl] : t.label)
    if (!h.has_edge(id) || lbl.ref != id) return false;
  if (t.parent.count(t.root)) return false;
  for (const auto& [child, par] : t.parent)
    if (!t.contains(child) || !t.contains(par)) return false;
  if (t.parent.size() + 1 != t.label.size()) return false;
  // Every node must reach the root without revisiting anything.
  for (const auto& [id, _] : t.label) {
    std::string cur = id;
    std::size_t steps = 0;
    while (cur != t.root) {
      auto it = t.parent.find(cur);
      if (it == t.parent.end() || ++steps > t.label.size()) return false;
      cur = it->second;
    }
  }
  // Nodes holding a vertex form a connected subtree iff exactly one of them
  // has a parent outside the set.
  std::map<std::string, int> holders;
  std::map<std::string, int> linked;
  for (const auto& [id, vs] : h.edges()) {
    for (const auto& v : vs) {
      ++holders[v];
      auto it = t.parent.find(id);
      if (it != t.parent.end() && h.edge(it->second).count(v)) ++linked[v];
    }
  }
  for (const auto& [v, count] : holders)
    if (linked[v] != count - 1) return false;
  return true;
}

}  // namespace yr
