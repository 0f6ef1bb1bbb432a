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

#include <json.hpp>

#include "common/error.hpp"
#include "decomposition/ghd.hpp"

namespace yr {

std::string write_ghd(const GHDecomposition& g) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) {
    nlohmann::ordered_json node;
    node["id"] = n.id;
    node["bag"] = std::vector<std::string>(n.bag.begin(), n.bag.end());
    node["cover"] = std::vector<std::string>(n.cover.begin(), n.cover.end());
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& id : g.pre_order()) {
    auto it = g.parent.find(id);
    if (it != g.parent.end()) doc["edges"].push_back({it->second, id});
  }
  doc["root"] = g.root;
  return doc.dump(2) + "\n";
}

GHDecomposition read_ghd(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidGhd, std::string("malformed GHD document: ") + e.what());
  }
  GHDecomposition g;
  try {
    for (const auto& node : doc.at("nodes")) {
      GhdNode n;
      n.id = node.at("id").get<std::string>();
      for (const auto& v : node.at("bag")) n.bag.insert(v.get<std::string>());
      for (const auto& a : node.at("cover")) n.cover.insert(a.get<std::string>());
      g.nodes.push_back(std::move(n));
    }
    for (const auto& edge : doc.value("edges", nlohmann::json::array())) {
      if (!edge.is_array() || edge.size() != 2) throw Error(ErrorCode::InvalidGhd, "GHD edge must be [parent, child]");
      std::string child = edge[1].get<std::string>();
      if (g.parent.count(child)) throw Error(ErrorCode::InvalidGhd, "node " + child + " has two parents");
      g.parent[child] = edge[0].get<std::string>();
    }
    g.root = doc.at("root").get<std::string>();
    auto known = [&](const std::string& id) { return g.find(id) != nullptr; };
    for (const auto& [child, parent] : g.parent)
      if (!known(child) || !known(parent))
        throw Error(ErrorCode::InvalidGhd, "GHD edge " + parent + " -> " + child + " names an unknown node");
    if (!known(g.root)) throw Error(ErrorCode::InvalidGhd, "GHD root " + g.root + " is not a node");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidGhd, std::string("malformed GHD document: ") + e.what());
  }
  return g;
}

}  // namespace yr
