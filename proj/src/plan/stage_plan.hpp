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
#include <variant>
#include <vector>

#include "classification/classification.hpp"
#include "decomposition/ghd.hpp"
#include "decomposition/join_tree.hpp"
#include "frontend/conjunctive_query.hpp"

namespace yr {

enum class Stage { Setup, SemijoinUp, SemijoinDown, Join, Finalize };
enum class PlanMode { FullEnum, ZeroMA, Partial };
enum class StatementKind { CreateView, CreateTemp, Select };

std::string stage_name(Stage s);       // "SETUP", "SEMIJOIN_UP", ...
std::string plan_mode_name(PlanMode m);  // "FullEnum", "ZeroMA", "Partial"

/// One base atom read by a setup statement: selections applied, attributes
/// renamed to their variables. Filter-only sources are reduced to the
/// distinct values of their variables that the statement keeps.
struct SetupSource {
  std::string atom;
  std::string relation;
  std::vector<AttrBinding> bindings;
  std::vector<ConstantSelection> selections;
  bool filter_only = false;
  std::vector<std::string> filter_vars;  // variables a filter-only source keeps
};

struct SetupBody {
  std::vector<SetupSource> sources;
  std::vector<std::string> projection;
};

struct SemijoinReducer {
  std::string handle;
  std::vector<std::string> keys;  // empty: keep the input iff the reducer is nonempty
};

struct SemijoinBody {
  std::string input;
  std::vector<SemijoinReducer> reducers;
};

struct JoinBody {
  std::vector<std::string> inputs;  // every input shares variables with an earlier one where the tree allows
  std::vector<std::string> projection;
};

struct FinalizeBody {
  std::string input;  // empty: the query is statically empty
  std::vector<std::string> input_schema;
  std::vector<std::string> projection;  // S
  bool distinct_input = false;
  OutputSpec output;
};

struct PlanStatement {
  StatementKind kind = StatementKind::CreateView;
  Stage stage = Stage::Setup;
  std::string name;
  std::string node;  // tree node, group label or empty
  std::variant<SetupBody, SemijoinBody, JoinBody, FinalizeBody> body;
  std::vector<std::string> schema;
  std::vector<std::string> depends_on;  // handles defined by earlier statements
};

struct StagePlan {
  PlanMode mode = PlanMode::FullEnum;
  JoinTree tree;
  std::set<std::string> scope;  // nodes taking part in SEMIJOIN_DOWN and JOIN
  std::vector<PlanStatement> statements;
  /// Latest handle of every node after each stage that ran.
  std::map<Stage, std::map<std::string, std::string>> node_relations;
  std::vector<std::string> output_projection;
  std::vector<std::string> output_columns;
  std::vector<std::string> warnings;

  std::vector<const PlanStatement*> stage(Stage s) const;
  std::size_t count(Stage s) const { return stage(s).size(); }
  const PlanStatement* find(const std::string& name) const;
  const PlanStatement& final_statement() const { return statements.back(); }

  /// Stable text form, one statement per line grouped by stage.
  std::string render() const;
};

struct PlanOptions {
  std::size_t join_group_cap = 12;
  /// Definitions of View nodes, when the tree came from a GHD.
  std::vector<ViewDefinition> views;
};

/// ZeroMA: re-roots at the guard (or at the view owning it). Partial: keeps
/// the root when it lies in the minimal covering subtree, else moves it to the
/// subtree node closest to it. FullEnum: unchanged. Throws GuardNotInTree.
JoinTree select_root(const JoinTree& t, const ZeroMAReport& report, PlanMode mode,
                     const std::vector<ViewDefinition>& views = {});

/// Compiles the four stages plus FINALIZE. Throws ModeMismatch when ZeroMA is
/// requested for a query that is not set-safe or whose root does not hold S,
/// or Partial for a query that is not set-safe or whose root lies outside the
/// covering subtree; EmptyTree for an empty tree.
StagePlan build_plan(const JoinTree& t, const AggregationForm& form, PlanMode mode,
                     const PlanOptions& options = {});

/// Greedy bottom-up grouping into connected subtrees of at most `cap` nodes,
/// restricted to `scope`; groups are listed in closing order.
std::vector<std::vector<std::string>> group_join_tree(const JoinTree& t, const std::set<std::string>& scope,
                                                      std::size_t cap);

}  // namespace yr
