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

#include "hypergraph/hypergraph.hpp"

#include <sstream>

namespace yr {

std::vector<std::string> Hypergraph::labels() const {
  std::vector<std::string> out;
  out.reserve(edges_.size());
  for (const auto& [label, _] : edges_) out.push_back(label);
  return out;
}

VertexSet Hypergraph::vertices() const {
  VertexSet all;
  for (const auto& [_, vs] : edges_) all.insert(vs.begin(), vs.end());
  return all;
}

std::string Hypergraph::dump() const {
  std::ostringstream out;
  for (const auto& [label, vs] : edges_) {
    out << label << ':';
    for (const auto& v : vs) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

Hypergraph build_hypergraph(const ConjunctiveQuery& cq) {
  Hypergraph h;
  for (const auto& atom : cq.atoms) h.add_edge(atom.id, atom.variables());
  return h;
}

std::vector<Hypergraph> connected_components(const Hypergraph& h) {
  std::vector<std::string> labels = h.labels();
  std::map<std::string, int> component;
  int next = 0;
  for (const auto& start : labels) {
    if (component.count(start)) continue;
    int id = next++;
    std::vector<std::string> stack{start};
    component[start] = id;
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      const VertexSet& cur_vs = h.edge(cur);
      for (const auto& other : labels) {
        if (component.count(other)) continue;
        const VertexSet& vs = h.edge(other);
        bool shares = false;
        for (const auto& v : vs)
          if (cur_vs.count(v)) {
            shares = true;
            break;
          }
        if (shares) {
          component[other] = id;
          stack.push_back(other);
        }
      }
    }
  }
  std::vector<Hypergraph> out(static_cast<std::size_t>(next));
  for (const auto& label : labels) out[static_cast<std::size_t>(component[label])].add_edge(label, h.edge(label));
  return out;
}

bool is_connected(const Hypergraph& h) { return connected_components(h).size() <= 1; }

}  // namespace yr
