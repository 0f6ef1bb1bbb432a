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
#include <optional>
#include <string>
#include <vector>

#include "classification/classification.hpp"
#include "decomposition/ghd.hpp"
#include "emit/sql_emitter.hpp"
#include "engine/evaluate.hpp"
#include "plan/stage_plan.hpp"

namespace yr {

enum class ModeChoice { Auto, Full, ZeroMA, Partial };

ModeChoice parse_mode_choice(const std::string& text);  // auto | full | 0ma | partial

struct PipelineOptions {
  ModeChoice mode = ModeChoice::Auto;
  std::size_t join_group_cap = 12;
  /// Output replaced by one column per equi-join class, no aggregation;
  /// implies FullEnum under Auto.
  bool join_attrs_only = false;
  std::optional<std::string> guard;
  /// For cyclic queries: search a GHD up to this width (0: none) ...
  int ghd_width = 0;
  std::uint64_t seed = 0;
  /// ... or use this one.
  std::optional<GHDecomposition> ghd;
};

/// Everything derived from one query on the way to a plan.
struct Compiled {
  ConjunctiveQuery cq;
  Hypergraph hypergraph;
  AggregationForm form;
  ZeroMAReport report;
  bool cyclic = false;
  Hypergraph residual;
  std::optional<GHDecomposition> ghd;
  std::vector<ViewDefinition> views;
  JoinTree tree;  // rooted as used by the plan
  PlanMode mode = PlanMode::FullEnum;
  StagePlan plan;
  std::vector<std::string> warnings;
};

ConjunctiveQuery parse_sql(const std::string& sql, const Catalog* catalog = nullptr);

/// Mode Auto: ZeroMA for 0MA queries, Partial when the query is set-safe and
/// a proper covering subtree exists, FullEnum otherwise. Throws NoJoinTree for
/// a cyclic query without a decomposition (the message carries the residual).
Compiled compile(const ConjunctiveQuery& cq, const PipelineOptions& options);

/// Hypergraph, join tree (or residual), classification and chosen mode. Does
/// not throw for cyclic queries.
std::string analyze_report(const ConjunctiveQuery& cq, const PipelineOptions& options);

struct Comparison {
  bool equal = false;
  Relation naive;
  Relation plan;
  StageStats naive_stats;
  StageStats plan_stats;

  std::string render() const;
};

Comparison compare(const Compiled& c, const Database& db, const EvalOptions& options = {});

}  // namespace yr
