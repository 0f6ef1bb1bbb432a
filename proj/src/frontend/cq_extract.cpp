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
#include <numeric>
#include <sstream>

#include "common/error.hpp"
#include "frontend/conjunctive_query.hpp"

namespace yr {

std::set<std::string> Atom::variables() const {
  std::set<std::string> vars;
  for (const auto& b : bindings) vars.insert(b.variable);
  return vars;
}

const Atom* ConjunctiveQuery::find_atom(const std::string& id) const {
  for (const auto& a : atoms)
    if (a.id == id) return &a;
  return nullptr;
}

std::vector<ConstantSelection> ConjunctiveQuery::selections_for(const std::string& atom_id) const {
  std::vector<ConstantSelection> out;
  for (const auto& s : selections)
    if (s.atom == atom_id) out.push_back(s);
  return out;
}

std::vector<std::string> ConjunctiveQuery::output_vars() const {
  std::vector<std::string> vars;
  for (const auto& o : outputs)
    if (o.kind == OutputColumn::Kind::Variable &&
        std::find(vars.begin(), vars.end(), o.variable) == vars.end())
      vars.push_back(o.variable);
  return vars;
}

std::set<std::string> ConjunctiveQuery::projection_vars() const {
  std::set<std::string> s(grouping_vars.begin(), grouping_vars.end());
  for (const auto& a : aggregates) s.insert(a.variable);
  for (const auto& v : output_vars()) s.insert(v);
  return s;
}

std::set<std::string> ConjunctiveQuery::all_vars() const {
  std::set<std::string> vars;
  for (const auto& a : atoms)
    for (const auto& b : a.bindings) vars.insert(b.variable);
  return vars;
}

bool ConjunctiveQuery::is_boolean() const {
  return outputs.size() == 1 && outputs.front().kind == OutputColumn::Kind::Literal;
}

std::vector<std::string> OutputSpec::column_names() const {
  std::vector<std::string> names;
  for (const auto& c : columns) names.push_back(c.first);
  return names;
}

OutputSpec output_spec(const ConjunctiveQuery& cq) {
  OutputSpec spec;
  spec.distinct = cq.distinct;
  if (cq.is_boolean()) {
    spec.boolean = true;
    spec.literal = cq.outputs.front().literal;
    spec.columns.emplace_back(cq.outputs.front().name, "");
    return spec;
  }
  spec.aggregated = cq.is_aggregated();
  spec.grouping = cq.grouping_vars;
  for (std::size_t i = 0; i < cq.aggregates.size(); ++i) {
    const auto& a = cq.aggregates[i];
    spec.aggregates.push_back({a.func, a.variable, a.distinct, "#agg" + std::to_string(i)});
  }
  if (cq.having)
    spec.having = OutputSpec::Having{spec.aggregates[cq.having->aggregate].output, cq.having->cmp,
                                     cq.having->constant};
  for (const auto& o : cq.outputs) {
    if (o.kind == OutputColumn::Kind::Variable)
      spec.columns.emplace_back(o.name, o.variable);
    else
      spec.columns.emplace_back(o.name, spec.aggregates[o.aggregate].output);
  }
  return spec;
}

namespace {

struct AttrKey {
  std::size_t atom;
  std::string attribute;
  auto operator<=>(const AttrKey&) const = default;
};

class UnionFind {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

class Extractor {
 public:
  Extractor(const ParsedQuery& pq, const Catalog* catalog) : pq_(pq), catalog_(catalog) {}

  ConjunctiveQuery run() {
    build_atoms();
    // Resolve every reference first so that key indices follow textual order.
    for (const auto& item : pq_.select_items) {
      if (item.kind == SelectItem::Kind::Column) key_of(item.column);
      if (item.kind == SelectItem::Kind::Aggregate) key_of(item.aggregate.argument);
    }
    for (const auto& c : pq_.where_conjuncts) {
      std::size_t l = key_of(c.left);
      if (c.is_join()) uf_.unite(l, key_of(std::get<ColumnRef>(c.right)));
    }
    for (const auto& g : pq_.group_by) key_of(g);
    if (pq_.having) key_of(pq_.having->aggregate.argument);

    name_variables();
    fill_atoms();
    fill_selections();
    fill_outputs();
    return std::move(cq_);
  }

 private:
  void build_atoms() {
    std::map<std::string, int> unaliased_count;
    for (const auto& f : pq_.from_items)
      if (!f.alias) ++unaliased_count[f.table];
    std::map<std::string, int> seen;
    for (const auto& f : pq_.from_items) {
      Atom atom;
      atom.relation = f.table;
      if (f.alias) {
        atom.id = *f.alias;
      } else if (unaliased_count[f.table] > 1) {
        atom.id = f.table + "_" + std::to_string(++seen[f.table]);
      } else {
        atom.id = f.table;
      }
      for (const auto& other : cq_.atoms)
        if (other.id == atom.id)
          throw Error(ErrorCode::InvalidQuery, "duplicate table name or alias '" + atom.id + "' in FROM");
      cq_.atoms.push_back(std::move(atom));
      aliased_.push_back(f.alias.has_value());
    }
  }

  const std::vector<std::string>* catalog_columns(const std::string& relation) const {
    if (!catalog_) return nullptr;
    auto it = catalog_->find(relation);
    return it == catalog_->end() ? nullptr : &it->second;
  }

  std::size_t resolve_atom(const ColumnRef& ref) const {
    if (!ref.qualifier.empty()) {
      std::vector<std::size_t> hits;
      for (std::size_t i = 0; i < cq_.atoms.size(); ++i)
        if (cq_.atoms[i].id == ref.qualifier) hits.push_back(i);
      if (hits.empty())
        for (std::size_t i = 0; i < cq_.atoms.size(); ++i)
          if (cq_.atoms[i].relation == ref.qualifier && !aliased_[i]) hits.push_back(i);
      if (hits.empty())
        throw Error(ErrorCode::InvalidQuery, "unknown table or alias '" + ref.qualifier + "' in " + ref.to_string());
      if (hits.size() > 1)
        throw Error(ErrorCode::AmbiguousColumn, "ambiguous column reference " + ref.to_string());
      if (const auto* cols = catalog_columns(cq_.atoms[hits[0]].relation);
          cols && std::find(cols->begin(), cols->end(), ref.column) == cols->end())
        throw Error(ErrorCode::InvalidQuery,
                    "relation " + cq_.atoms[hits[0]].relation + " has no column " + ref.column);
      return hits[0];
    }
    if (cq_.atoms.size() == 1) return 0;
    if (!catalog_)
      throw Error(ErrorCode::AmbiguousColumn,
                  "ambiguous column reference " + ref.column + " (qualify it or provide a schema)");
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < cq_.atoms.size(); ++i) {
      const auto* cols = catalog_columns(cq_.atoms[i].relation);
      if (cols && std::find(cols->begin(), cols->end(), ref.column) != cols->end()) hits.push_back(i);
    }
    if (hits.size() == 1) return hits[0];
    if (hits.empty()) throw Error(ErrorCode::InvalidQuery, "unknown column " + ref.column);
    throw Error(ErrorCode::AmbiguousColumn, "ambiguous column reference " + ref.column);
  }

  std::size_t key_of(const ColumnRef& ref) {
    AttrKey key{resolve_atom(ref), ref.column};
    auto it = key_index_.find(key);
    if (it != key_index_.end()) return it->second;
    std::size_t idx = uf_.add();
    keys_.push_back(key);
    key_index_.emplace(key, idx);
    return idx;
  }

  void name_variables() {
    // Representative of a class: the member with the smallest (atom, attribute).
    std::map<std::size_t, AttrKey> rep;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      std::size_t root = uf_.find(i);
      auto it = rep.find(root);
      if (it == rep.end() || keys_[i] < it->second) rep[root] = keys_[i];
    }
    std::map<std::string, int> candidate_uses;
    for (const auto& [root, key] : rep) ++candidate_uses[key.attribute];

    std::vector<std::pair<AttrKey, std::size_t>> ordered;
    for (const auto& [root, key] : rep) ordered.emplace_back(key, root);
    std::sort(ordered.begin(), ordered.end());
    std::set<std::string> taken;
    for (const auto& [key, root] : ordered) {
      std::string name = candidate_uses[key.attribute] == 1
                             ? key.attribute
                             : cq_.atoms[key.atom].id + "_" + key.attribute;
      std::string unique = name;
      for (int k = 2; taken.count(unique); ++k) unique = name + "_" + std::to_string(k);
      taken.insert(unique);
      var_name_[root] = unique;
    }
  }

  const std::string& var_of(const ColumnRef& ref) {
    return var_name_.at(uf_.find(key_of(ref)));
  }

  void fill_atoms() {
    for (std::size_t i = 0; i < keys_.size(); ++i)
      cq_.atoms[keys_[i].atom].bindings.push_back({keys_[i].attribute, var_name_.at(uf_.find(i))});
    for (auto& atom : cq_.atoms)
      std::sort(atom.bindings.begin(), atom.bindings.end(),
                [](const AttrBinding& a, const AttrBinding& b) { return a.attribute < b.attribute; });
  }

  void fill_selections() {
    std::map<std::string, std::set<Value>> eq_constants;
    for (const auto& c : pq_.where_conjuncts) {
      if (c.is_join()) continue;
      std::size_t atom = resolve_atom(c.left);
      const Value& constant = std::get<Value>(c.right);
      cq_.selections.push_back({cq_.atoms[atom].id, c.left.column, c.cmp, constant});
      if (c.cmp == Comparator::Eq) eq_constants[var_of(c.left)].insert(constant);
    }
    for (const auto& [var, values] : eq_constants)
      if (values.size() > 1) cq_.statically_empty = true;
  }

  std::string unique_output_name(std::string name) {
    std::string candidate = name;
    for (int k = 2; output_names_.count(candidate); ++k) candidate = name + "_" + std::to_string(k);
    output_names_.insert(candidate);
    return candidate;
  }

  static std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  }

  std::size_t aggregate_index(const AggregateCall& call, std::optional<std::string> name, bool hidden) {
    const std::string& var = var_of(call.argument);
    if (hidden) {
      for (std::size_t i = 0; i < cq_.aggregates.size(); ++i) {
        const auto& a = cq_.aggregates[i];
        if (a.func == call.func && a.variable == var && a.distinct == call.distinct) return i;
      }
    }
    Aggregate agg;
    agg.func = call.func;
    agg.variable = var;
    agg.distinct = call.distinct;
    agg.hidden = hidden;
    std::string base = (hidden ? "having_" : "") + lower(agg_func_name(call.func)) + "_" +
                       (call.distinct ? "distinct_" : "") + call.argument.column;
    agg.name = hidden ? base : unique_output_name(name.value_or(base));
    cq_.aggregates.push_back(std::move(agg));
    return cq_.aggregates.size() - 1;
  }

  void fill_outputs() {
    cq_.distinct = pq_.distinct;
    cq_.has_group_by = !pq_.group_by.empty();
    for (const auto& g : pq_.group_by) {
      const std::string& v = var_of(g);
      if (std::find(cq_.grouping_vars.begin(), cq_.grouping_vars.end(), v) == cq_.grouping_vars.end())
        cq_.grouping_vars.push_back(v);
    }
    bool has_literal = false;
    bool has_aggregate = false;
    for (const auto& item : pq_.select_items) {
      has_literal |= item.kind == SelectItem::Kind::Literal;
      has_aggregate |= item.kind == SelectItem::Kind::Aggregate;
    }
    if (has_literal && (pq_.select_items.size() > 1 || cq_.has_group_by || pq_.having))
      throw UnsupportedFeature("literal in select list combined with other items");
    bool aggregated = cq_.has_group_by || has_aggregate || pq_.having.has_value();
    if (pq_.having && !cq_.has_group_by && !has_aggregate)
      throw UnsupportedFeature("HAVING without aggregation");

    for (const auto& item : pq_.select_items) {
      OutputColumn out;
      switch (item.kind) {
        case SelectItem::Kind::Literal:
          out.kind = OutputColumn::Kind::Literal;
          out.literal = item.literal;
          out.name = unique_output_name(item.alias.value_or(item.literal == 1 ? "one" : "literal"));
          break;
        case SelectItem::Kind::Column: {
          out.kind = OutputColumn::Kind::Variable;
          out.variable = var_of(item.column);
          if (aggregated && std::find(cq_.grouping_vars.begin(), cq_.grouping_vars.end(), out.variable) ==
                                cq_.grouping_vars.end())
            throw Error(ErrorCode::InvalidQuery,
                        "column " + item.column.to_string() + " must appear in GROUP BY or an aggregate");
          out.name = unique_output_name(item.alias.value_or(item.column.column));
          break;
        }
        case SelectItem::Kind::Aggregate:
          out.kind = OutputColumn::Kind::Aggregate;
          out.aggregate = aggregate_index(item.aggregate, item.alias, false);
          out.name = cq_.aggregates[out.aggregate].name;
          break;
      }
      cq_.outputs.push_back(std::move(out));
    }
    if (pq_.having) {
      HavingFilter h;
      h.aggregate = aggregate_index(pq_.having->aggregate, std::nullopt, true);
      h.cmp = pq_.having->cmp;
      h.constant = pq_.having->constant;
      cq_.having = h;
    }
  }

  const ParsedQuery& pq_;
  const Catalog* catalog_;
  ConjunctiveQuery cq_;
  std::vector<bool> aliased_;
  std::vector<AttrKey> keys_;
  std::map<AttrKey, std::size_t> key_index_;
  UnionFind uf_;
  std::map<std::size_t, std::string> var_name_;
  std::set<std::string> output_names_;
};

}  // namespace

ConjunctiveQuery extract_cq(const ParsedQuery& pq, const Catalog* catalog) {
  return Extractor(pq, catalog).run();
}

ConjunctiveQuery project_to_join_vars(const ConjunctiveQuery& cq) {
  std::map<std::string, int> occurrences;
  for (const auto& a : cq.atoms)
    for (const auto& v : a.variables()) ++occurrences[v];
  ConjunctiveQuery out = cq;
  out.outputs.clear();
  out.aggregates.clear();
  out.grouping_vars.clear();
  out.having.reset();
  out.has_group_by = false;
  out.distinct = false;
  for (const auto& [var, count] : occurrences) {
    if (count < 2) continue;
    OutputColumn col;
    col.kind = OutputColumn::Kind::Variable;
    col.variable = var;
    col.name = var;
    out.outputs.push_back(std::move(col));
  }
  if (out.outputs.empty()) {
    OutputColumn col;
    col.kind = OutputColumn::Kind::Literal;
    col.literal = 1;
    col.name = "one";
    out.outputs.push_back(std::move(col));
  }
  return out;
}

std::string render_canonical_sql(const ConjunctiveQuery& cq) {
  // Members of each variable class in atom order, then attribute order.
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& atom : cq.atoms)
    for (const auto& b : atom.bindings) members[b.variable].push_back(atom.id + "." + b.attribute);
  auto ref = [&](const std::string& var) { return members.at(var).front(); };
  auto agg_text = [&](const Aggregate& a) {
    return agg_func_name(a.func) + "(" + (a.distinct ? "DISTINCT " : "") + ref(a.variable) + ")";
  };

  std::ostringstream out;
  out << "SELECT ";
  if (cq.distinct) out << "DISTINCT ";
  for (std::size_t i = 0; i < cq.outputs.size(); ++i) {
    const auto& o = cq.outputs[i];
    if (i) out << ", ";
    switch (o.kind) {
      case OutputColumn::Kind::Literal: out << o.literal; break;
      case OutputColumn::Kind::Variable: out << ref(o.variable); break;
      case OutputColumn::Kind::Aggregate: out << agg_text(cq.aggregates[o.aggregate]); break;
    }
    out << " AS " << o.name;
  }
  out << " FROM ";
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    if (i) out << ", ";
    out << cq.atoms[i].relation;
    if (cq.atoms[i].id != cq.atoms[i].relation) out << " AS " << cq.atoms[i].id;
  }
  std::vector<std::string> conjuncts;
  // Class order follows the first member so the text is stable.
  std::vector<std::pair<std::string, std::string>> classes;
  for (const auto& [var, refs] : members) classes.emplace_back(refs.front(), var);
  std::sort(classes.begin(), classes.end());
  for (const auto& [first, var] : classes) {
    const auto& refs = members.at(var);
    for (std::size_t i = 1; i < refs.size(); ++i) conjuncts.push_back(refs.front() + " = " + refs[i]);
  }
  for (const auto& s : cq.selections)
    conjuncts.push_back(s.atom + "." + s.attribute + " " + comparator_symbol(s.cmp) + " " +
                        value_to_sql(s.constant));
  if (!conjuncts.empty()) {
    out << " WHERE ";
    for (std::size_t i = 0; i < conjuncts.size(); ++i) out << (i ? " AND " : "") << conjuncts[i];
  }
  if (cq.has_group_by) {
    out << " GROUP BY ";
    for (std::size_t i = 0; i < cq.grouping_vars.size(); ++i)
      out << (i ? ", " : "") << ref(cq.grouping_vars[i]);
  }
  if (cq.having)
    out << " HAVING " << agg_text(cq.aggregates[cq.having->aggregate]) << " "
        << comparator_symbol(cq.having->cmp) << " " << value_to_sql(cq.having->constant);
  return out.str();
}

}  // namespace yr
