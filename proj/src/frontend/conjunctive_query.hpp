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

#include "common/value.hpp"
#include "frontend/parsed_query.hpp"

namespace yr {

/// Attribute of a base relation bound to a query variable. Several attributes
/// of one atom may share a variable (r.a = r.b).
struct AttrBinding {
  std::string attribute;
  std::string variable;
};

struct Atom {
  std::string id;        // pairwise distinct, also the join-tree node name
  std::string relation;  // base relation, may repeat across atoms
  std::vector<AttrBinding> bindings;  // sorted by attribute

  std::set<std::string> variables() const;
};

/// Atom-local comparison against a constant, applied when the atom is read.
struct ConstantSelection {
  std::string atom;
  std::string attribute;
  Comparator cmp = Comparator::Eq;
  Value constant;
};

struct Aggregate {
  AggFunc func = AggFunc::Min;
  std::string variable;
  bool distinct = false;
  std::string name;     // output column name
  bool hidden = false;  // only referenced by HAVING
};

struct OutputColumn {
  enum class Kind { Variable, Aggregate, Literal };
  Kind kind = Kind::Variable;
  std::string name;
  std::string variable;          // Kind::Variable
  std::size_t aggregate = 0;     // Kind::Aggregate, index into aggregates
  std::int64_t literal = 0;      // Kind::Literal
};

struct HavingFilter {
  std::size_t aggregate = 0;
  Comparator cmp = Comparator::Eq;
  Value constant;
};

/// Normalized select-project-join query with aggregation metadata. Equi-joins
/// are absorbed into shared variables; everything else is atom-local.
struct ConjunctiveQuery {
  std::vector<Atom> atoms;
  std::vector<ConstantSelection> selections;
  std::vector<OutputColumn> outputs;
  std::vector<std::string> grouping_vars;
  std::vector<Aggregate> aggregates;
  std::optional<HavingFilter> having;
  bool distinct = false;
  bool has_group_by = false;
  /// Contradictory equality constants on one variable class; the query is
  /// known to return nothing before looking at data.
  bool statically_empty = false;

  const Atom* find_atom(const std::string& id) const;
  std::vector<ConstantSelection> selections_for(const std::string& atom_id) const;

  /// Variables of Variable-kind output columns, in output order, deduplicated.
  std::vector<std::string> output_vars() const;
  /// S: grouping variables, aggregate variables and output variables.
  std::set<std::string> projection_vars() const;
  std::set<std::string> all_vars() const;
  bool is_boolean() const;
  bool is_aggregated() const { return has_group_by || !aggregates.empty(); }
};

/// Optional table -> column list used to resolve unqualified column references
/// when a query has more than one FROM item.
using Catalog = std::map<std::string, std::vector<std::string>>;

/// Turns a parsed query into a conjunctive query: union-find over equality
/// conjuncts yields the variable classes; constant comparisons stay with their
/// atom. Throws AmbiguousColumn / InvalidQuery. Contradictory equality
/// constants do not throw; they set `statically_empty`.
ConjunctiveQuery extract_cq(const ParsedQuery& pq, const Catalog* catalog = nullptr);

/// Canonical SQL text for a conjunctive query. Parsing and extracting it again
/// yields a query that renders to the same text.
std::string render_canonical_sql(const ConjunctiveQuery& cq);

/// Replaces the output of a query by its join variables (one column per
/// equi-join class), dropping aggregation. This is the projection convention
/// used for full-enumeration benchmarking.
ConjunctiveQuery project_to_join_vars(const ConjunctiveQuery& cq);

/// Everything the final stage needs to turn a (joined or reduced) relation
/// over query variables into the query answer.
struct AggregateSpec {
  AggFunc func = AggFunc::Min;
  std::string input;   // variable
  bool distinct = false;
  std::string output;  // column name
};

struct OutputSpec {
  bool boolean = false;
  std::int64_t literal = 1;
  bool aggregated = false;
  std::vector<std::string> grouping;
  std::vector<AggregateSpec> aggregates;
  struct Having {
    std::string column;
    Comparator cmp = Comparator::Eq;
    Value constant;
  };
  std::optional<Having> having;
  /// (output name, source column) pairs; source is a variable or an
  /// aggregate output.
  std::vector<std::pair<std::string, std::string>> columns;
  bool distinct = false;

  std::vector<std::string> column_names() const;
};

OutputSpec output_spec(const ConjunctiveQuery& cq);

}  // namespace yr
