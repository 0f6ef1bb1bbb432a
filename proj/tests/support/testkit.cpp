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

#include "testkit.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>

namespace yr::testkit {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

std::string render(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return "NULL";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

}  // namespace

std::vector<std::string> Skeleton::variables() const {
  std::vector<std::string> out;
  for (const auto& a : atoms)
    for (const auto& v : a.vars)
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

std::string Skeleton::column_ref(const std::string& var) const {
  for (int a = 0; a < static_cast<int>(atoms.size()); ++a) {
    std::string ref = column_ref(a, var);
    if (!ref.empty()) return ref;
  }
  return "";
}

std::string Skeleton::column_ref(int a, const std::string& var) const {
  const auto& atom = atoms[static_cast<std::size_t>(a)];
  for (std::size_t i = 0; i < atom.vars.size(); ++i)
    if (atom.vars[i] == var) return atom.relation + "." + atom.columns[i];
  return "";
}

Skeleton random_acyclic_skeleton(Rng& rng, int min_atoms, int max_atoms, int min_sel, int max_sel, int domain) {
  Skeleton s;
  const int n = uniform(rng, min_atoms, max_atoms);
  int next_var = 0;
  for (int i = 0; i < n; ++i) {
    SkeletonAtom a;
    a.relation = "r" + std::to_string(i);
    if (i > 0) {
      a.parent = uniform(rng, 0, i - 1);
      std::vector<std::string> pv = s.atoms[static_cast<std::size_t>(a.parent)].vars;
      std::shuffle(pv.begin(), pv.end(), rng);
      const int shared = std::min<int>(uniform(rng, 1, 2), static_cast<int>(pv.size()));
      a.vars.assign(pv.begin(), pv.begin() + shared);
    }
    const int fresh = uniform(rng, i == 0 ? 2 : 1, 2);
    for (int f = 0; f < fresh; ++f) a.vars.push_back("v" + std::to_string(next_var++));
    std::shuffle(a.vars.begin(), a.vars.end(), rng);
    for (std::size_t c = 0; c < a.vars.size(); ++c) a.columns.push_back("c" + std::to_string(c));
    s.atoms.push_back(std::move(a));
  }
  const int sels = uniform(rng, min_sel, max_sel);
  static const std::vector<std::string> ops = {"=", "=", "<", ">"};
  // One selection per variable: two equalities on the same variable would
  // usually contradict and make the query statically empty.
  std::set<std::string> selected;
  for (int i = 0, tries = 0; i < sels && tries < 50; ++tries) {
    Selection sel;
    sel.atom = uniform(rng, 0, n - 1);
    const auto& atom = s.atoms[static_cast<std::size_t>(sel.atom)];
    sel.column = uniform(rng, 0, static_cast<int>(atom.columns.size()) - 1);
    if (!selected.insert(atom.vars[static_cast<std::size_t>(sel.column)]).second) continue;
    ++i;
    sel.op = pick(rng, ops);
    sel.constant = uniform(rng, 0, domain - 1);
    // "< 0" and "> domain-1" select nothing; keep those rare.
    if (sel.op == "<" && sel.constant == 0) sel.constant = 1;
    if (sel.op == ">" && sel.constant == domain - 1) sel.constant = domain - 2;
    s.selections.push_back(sel);
  }
  return s;
}

std::string render_sql(const Skeleton& s, const QueryShape& q) {
  std::ostringstream out;
  out << "SELECT ";
  if (q.distinct) out << "DISTINCT ";
  std::vector<std::string> items;
  if (q.boolean) items.push_back("1");
  for (const auto& v : q.outputs) items.push_back(s.column_ref(v));
  if (q.agg)
    items.push_back(q.agg->func + "(" + (q.agg->distinct ? "DISTINCT " : "") + s.column_ref(q.agg->var) + ")");
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << items[i];
  out << " FROM ";
  for (std::size_t i = 0; i < s.atoms.size(); ++i) out << (i ? ", " : "") << s.atoms[i].relation;

  std::vector<std::string> conds;
  for (const auto& v : s.variables()) {
    std::string first;
    for (int a = 0; a < static_cast<int>(s.atoms.size()); ++a) {
      std::string ref = s.column_ref(a, v);
      if (ref.empty()) continue;
      if (first.empty())
        first = ref;
      else
        conds.push_back(ref + " = " + first);
    }
  }
  for (const auto& sel : s.selections) {
    const auto& a = s.atoms[static_cast<std::size_t>(sel.atom)];
    conds.push_back(a.relation + "." + a.columns[static_cast<std::size_t>(sel.column)] + " " + sel.op + " " +
                    std::to_string(sel.constant));
  }
  for (std::size_t i = 0; i < conds.size(); ++i) out << (i ? " AND " : " WHERE ") << conds[i];
  if (q.has_group_by && !q.grouping.empty()) {
    out << " GROUP BY ";
    for (std::size_t i = 0; i < q.grouping.size(); ++i) out << (i ? ", " : "") << s.column_ref(q.grouping[i]);
  }
  return out.str();
}

Database random_database(const Skeleton& s, Rng& rng, int domain, int max_rows) {
  Database db;
  for (const auto& a : s.atoms) {
    if (db.count(a.relation)) continue;
    Relation r(a.columns);
    const int rows = uniform(rng, (max_rows + 1) / 2, max_rows);
    std::vector<Tuple> made;
    for (int i = 0; i < rows; ++i) {
      Tuple t;
      if (!made.empty() && coin(rng, 0.15)) {
        t = pick(rng, made);  // injected duplicate
      } else {
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
          if (coin(rng, 0.03))
            t.emplace_back(std::monostate{});
          else
            t.emplace_back(static_cast<std::int64_t>(uniform(rng, 0, domain - 1)));
        }
      }
      made.push_back(t);
      r.add(std::move(t));
    }
    db.emplace(a.relation, std::move(r));
  }
  return db;
}

namespace {

bool passes(const Value& v, const std::string& op, std::int64_t c) {
  const auto* i = std::get_if<std::int64_t>(&v);
  if (!i) return false;
  if (op == "=") return *i == c;
  if (op == "<") return *i < c;
  return *i > c;
}

bool same(const Value& a, const Value& b) {
  if (std::holds_alternative<std::monostate>(a) || std::holds_alternative<std::monostate>(b)) return false;
  return a == b;
}

}  // namespace

Assignments brute_force_assignments(const Skeleton& s, const Database& db) {
  Assignments out;
  out.vars = s.variables();
  std::map<std::string, std::size_t> index;
  std::map<std::string, int> occurrences;
  for (std::size_t i = 0; i < out.vars.size(); ++i) index[out.vars[i]] = i;
  for (const auto& a : s.atoms)
    for (const auto& v : std::set<std::string>(a.vars.begin(), a.vars.end())) ++occurrences[v];

  // Candidate rows per atom after selections, with their multiplicity.
  std::vector<std::vector<std::pair<Tuple, std::uint64_t>>> candidates;
  for (int ai = 0; ai < static_cast<int>(s.atoms.size()); ++ai) {
    const auto& a = s.atoms[static_cast<std::size_t>(ai)];
    const Relation& rel = db.at(a.relation);
    std::vector<std::size_t> pos;
    for (const auto& c : a.columns) pos.push_back(*rel.column(c));
    std::vector<std::pair<Tuple, std::uint64_t>> rows;
    for (const auto& [t, n] : rel.rows()) {
      bool ok = true;
      for (const auto& sel : s.selections)
        if (sel.atom == ai && !passes(t[pos[static_cast<std::size_t>(sel.column)]], sel.op, sel.constant)) ok = false;
      if (!ok) continue;
      Tuple projected;
      for (auto p : pos) projected.push_back(t[p]);
      rows.emplace_back(std::move(projected), n);
    }
    candidates.push_back(std::move(rows));
  }

  std::vector<Value> values(out.vars.size());
  std::vector<bool> bound(out.vars.size(), false);
  std::function<void(std::size_t, std::uint64_t)> extend = [&](std::size_t ai, std::uint64_t weight) {
    if (ai == s.atoms.size()) {
      out.rows.emplace_back(values, weight);
      return;
    }
    const auto& a = s.atoms[ai];
    for (const auto& [t, n] : candidates[ai]) {
      std::vector<std::size_t> newly;
      bool ok = true;
      for (std::size_t c = 0; c < a.vars.size() && ok; ++c) {
        const std::size_t vi = index[a.vars[c]];
        const bool joined = occurrences[a.vars[c]] > 1;
        if (bound[vi]) {
          ok = joined ? same(values[vi], t[c]) : values[vi] == t[c];
        } else {
          if (joined && std::holds_alternative<std::monostate>(t[c])) ok = false;
          values[vi] = t[c];
          bound[vi] = true;
          newly.push_back(vi);
        }
      }
      if (ok) extend(ai + 1, weight * n);
      for (auto vi : newly) bound[vi] = false;
    }
  };
  extend(0, 1);
  return out;
}

Bag brute_force_answer(const QueryShape& q, const Assignments& as, bool dedup_before_group) {
  auto col = [&](const std::string& v) {
    return static_cast<std::size_t>(std::find(as.vars.begin(), as.vars.end(), v) - as.vars.begin());
  };
  Bag bag;
  if (q.boolean && !q.agg && q.outputs.empty()) {
    if (!as.rows.empty()) bag[{"1"}] = 1;
    return bag;
  }
  if (!q.agg && !q.has_group_by) {
    for (const auto& [vals, w] : as.rows) {
      std::vector<std::string> row;
      for (const auto& v : q.outputs) row.push_back(render(vals[col(v)]));
      bag[row] += w;
    }
    if (q.distinct)
      for (auto& [row, n] : bag) n = 1;
    return bag;
  }

  // pi_S: grouping values followed by the aggregated value.
  std::map<std::vector<Value>, std::uint64_t> projected;
  for (const auto& [vals, w] : as.rows) {
    std::vector<Value> t;
    for (const auto& g : q.grouping) t.push_back(vals[col(g)]);
    if (q.agg) t.push_back(vals[col(q.agg->var)]);
    projected[t] += w;
  }
  if (dedup_before_group)
    for (auto& [t, n] : projected) n = 1;

  std::map<std::vector<Value>, std::vector<std::pair<Value, std::uint64_t>>> groups;
  for (const auto& [t, n] : projected) {
    std::vector<Value> key(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(q.grouping.size()));
    auto& g = groups[key];
    if (q.agg) g.emplace_back(t.back(), n);
  }
  if (groups.empty() && q.grouping.empty()) groups[{}];

  for (const auto& [key, members] : groups) {
    std::map<std::string, std::string> by_var;
    for (std::size_t i = 0; i < q.grouping.size(); ++i) by_var[q.grouping[i]] = render(key[i]);
    std::vector<std::string> row;
    for (const auto& v : q.outputs) row.push_back(by_var.at(v));
    if (q.agg) {
      std::vector<std::pair<std::int64_t, std::uint64_t>> xs;
      std::set<std::int64_t> seen;
      for (const auto& [v, n] : members) {
        const auto* i = std::get_if<std::int64_t>(&v);
        if (!i) continue;
        if (q.agg->distinct) {
          if (seen.insert(*i).second) xs.emplace_back(*i, 1);
        } else {
          xs.emplace_back(*i, n);
        }
      }
      const std::string& f = q.agg->func;
      if (f == "COUNT") {
        std::uint64_t c = 0;
        for (const auto& x : xs) c += x.second;
        row.push_back(std::to_string(c));
      } else if (xs.empty()) {
        row.push_back("NULL");
      } else if (f == "SUM") {
        std::int64_t sum = 0;
        for (const auto& [x, n] : xs) sum += x * static_cast<std::int64_t>(n);
        row.push_back(std::to_string(sum));
      } else {
        std::int64_t best = xs.front().first;
        for (const auto& x : xs) best = f == "MIN" ? std::min(best, x.first) : std::max(best, x.first);
        row.push_back(std::to_string(best));
      }
    }
    bag[row] += 1;
  }
  if (q.distinct)
    for (auto& [row, n] : bag) n = 1;
  return bag;
}

Bag to_bag(const Relation& r) {
  Bag bag;
  for (const auto& [t, n] : r.rows()) {
    std::vector<std::string> row;
    for (const auto& v : t) row.push_back(value_to_string(v));
    bag[row] += n;
  }
  return bag;
}

std::string describe(const Bag& b) {
  std::ostringstream out;
  for (const auto& [row, n] : b) {
    out << "  (";
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? ", " : "") << row[i];
    out << ") x" << n << '\n';
  }
  return out.str();
}

// ---- hypergraphs ---------------------------------------------------------

namespace {

std::vector<std::string> shuffled_labels(Rng& rng, int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

}  // namespace

Hypergraph random_acyclic_hypergraph(Rng& rng, int edges, int max_vertices) {
  std::vector<VertexSet> built;
  int next = 0;
  auto fresh = [&] { return "x" + std::to_string(next++); };
  for (int i = 0; i < edges; ++i) {
    VertexSet e;
    if (i > 0) {
      const VertexSet& parent = built[static_cast<std::size_t>(uniform(rng, 0, i - 1))];
      std::vector<std::string> pv(parent.begin(), parent.end());
      std::shuffle(pv.begin(), pv.end(), rng);
      const int keep = uniform(rng, 1, static_cast<int>(pv.size()));
      e.insert(pv.begin(), pv.begin() + keep);
    }
    const int add = uniform(rng, i == 0 ? 1 : 0, 2);
    for (int k = 0; k < add && next < max_vertices; ++k) e.insert(fresh());
    if (e.empty()) e.insert(fresh());
    built.push_back(std::move(e));
  }
  Hypergraph h;
  auto labels = shuffled_labels(rng, edges);
  for (int i = 0; i < edges; ++i) h.add_edge(labels[static_cast<std::size_t>(i)], built[static_cast<std::size_t>(i)]);
  return h;
}

Hypergraph random_hypergraph(Rng& rng, int edges, int vertices) {
  Hypergraph h;
  for (int i = 0; i < edges; ++i) {
    VertexSet e;
    const int size = uniform(rng, 1, std::min(3, vertices));
    while (static_cast<int>(e.size()) < size) e.insert("x" + std::to_string(uniform(rng, 0, vertices - 1)));
    h.add_edge("e" + std::to_string(i), std::move(e));
  }
  return h;
}

bool gyo_reduces(const Hypergraph& h, Rng& rng) {
  std::vector<VertexSet> edges;
  for (const auto& [label, e] : h.edges()) edges.push_back(e);
  while (true) {
    // Each action: (edge index, vertex) for a vertex deletion, (edge index, "")
    // for an edge deletion.
    std::vector<std::pair<std::size_t, std::string>> actions;
    std::map<std::string, int> degree;
    for (const auto& e : edges)
      for (const auto& v : e) ++degree[v];
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (const auto& v : edges[i])
        if (degree[v] == 1) actions.emplace_back(i, v);
      for (std::size_t j = 0; j < edges.size(); ++j)
        if (i != j && std::includes(edges[j].begin(), edges[j].end(), edges[i].begin(), edges[i].end())) {
          actions.emplace_back(i, "");
          break;
        }
    }
    if (actions.empty()) break;
    const auto& [i, v] = pick(rng, actions);
    if (v.empty())
      edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
    else
      edges[i].erase(v);
  }
  return std::all_of(edges.begin(), edges.end(), [](const VertexSet& e) { return e.empty(); });
}

Hypergraph random_width2_cyclic(Rng& rng, int max_edges) {
  while (true) {
    const int bags = uniform(rng, 1, 3);
    Hypergraph bag_graph = random_acyclic_hypergraph(rng, bags, 7);
    std::vector<VertexSet> edges;
    for (const auto& [label, bag] : bag_graph.edges()) {
      std::vector<std::string> vs(bag.begin(), bag.end());
      if (vs.size() < 3) {
        edges.push_back(bag);
        continue;
      }
      std::shuffle(vs.begin(), vs.end(), rng);
      // a | shared | b ... : A = {a, shared..}, B = {shared.., b, rest..}.
      const int shared_end = uniform(rng, 2, static_cast<int>(vs.size()) - 1);
      VertexSet a(vs.begin(), vs.begin() + shared_end);
      VertexSet b(vs.begin() + 1, vs.end());
      edges.push_back(a);
      edges.push_back(b);
      if (coin(rng, 0.7)) edges.push_back({vs.front(), vs.back()});
    }
    if (static_cast<int>(edges.size()) > max_edges) continue;
    Hypergraph h;
    auto labels = shuffled_labels(rng, static_cast<int>(edges.size()));
    for (std::size_t i = 0; i < edges.size(); ++i) h.add_edge(labels[i], edges[i]);
    if (!is_connected(h) || gyo_reduces(h, rng)) continue;
    return h;
  }
}

Skeleton hypergraph_skeleton(const Hypergraph& h) {
  Skeleton s;
  for (const auto& [label, e] : h.edges()) {
    SkeletonAtom a;
    a.relation = label;
    a.columns.assign(e.begin(), e.end());
    a.vars = a.columns;
    s.atoms.push_back(std::move(a));
  }
  return s;
}

std::string hypergraph_sql(const Hypergraph& h, const std::vector<std::string>& outputs) {
  QueryShape q;
  q.outputs = outputs;
  q.boolean = outputs.empty();
  return render_sql(hypergraph_skeleton(h), q);
}

}  // namespace yr::testkit
