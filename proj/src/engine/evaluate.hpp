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
#include <string>
#include <vector>

#include "engine/relation.hpp"
#include "plan/stage_plan.hpp"

namespace yr {

struct StatementStats {
  std::string name;
  Stage stage = Stage::Setup;
  std::uint64_t rows = 0;
  std::uint64_t input_rows = 0;  // input handle of a semi-join, else 0
  std::int64_t micros = 0;
};

/// Execution statistics in statement order. Naive evaluation reports its
/// atom scans as SETUP and each pairwise join as JOIN.
struct StageStats {
  std::vector<StatementStats> statements;
  bool short_circuited = false;

  std::uint64_t max_rows(Stage s) const;
  std::int64_t stage_micros(Stage s) const;
  /// Largest relation produced before FINALIZE.
  std::uint64_t max_intermediate() const;
  /// `statement, rows, micros` per line.
  std::string render() const;
};

/// The atom as a relation over its variables (sorted): selections applied,
/// attributes sharing a variable required equal and non-NULL.
Relation atom_relation(const std::string& relation, const std::vector<AttrBinding>& bindings,
                       const std::vector<ConstantSelection>& selections, const Database& db);

/// Natural join of every atom in declaration order, over all variables.
Relation naive_join(const ConjunctiveQuery& cq, const Database& db, StageStats* stats = nullptr);

/// Reference semantics: naive_join, then the query's projection, grouping,
/// HAVING and output shaping. Throws MissingRelation.
Relation eval_naive(const ConjunctiveQuery& cq, const Database& db, StageStats* stats = nullptr);

struct EvalOptions {
  /// Skip SEMIJOIN_DOWN and JOIN work once the root is empty after
  /// SEMIJOIN_UP; the skipped statements yield empty relations.
  bool short_circuit = false;
};

struct PlanResult {
  Relation result;
  StageStats stats;
  std::map<std::string, Relation> handles;  // every statement's output
};

/// Runs the statements in order. Throws PlanReferenceError for a handle that
/// was not defined earlier.
PlanResult eval_plan(const StagePlan& plan, const Database& db, const EvalOptions& options = {});

/// Every tuple of every node's handle after `stage` occurs in the projection
/// of the full join onto the handle's columns.
bool full_reducer_holds(const StagePlan& plan, const std::map<std::string, Relation>& handles, Stage stage,
                        const ConjunctiveQuery& cq, const Database& db);

}  // namespace yr
