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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decomposition/join_tree.hpp"
#include "frontend/conjunctive_query.hpp"

namespace yr {

/// gamma_U(pi_S(Q')): the join part, the projection variables S and the
/// grouping/aggregate spec U, with HAVING kept apart as a post-filter.
struct AggregationForm {
  ConjunctiveQuery inner;  // atoms and selections only
  std::set<std::string> projection_vars;
  std::vector<std::string> grouping_vars;
  std::vector<Aggregate> aggregates;
  std::optional<HavingFilter> having;
  bool boolean = false;
  bool distinct = false;
  bool has_group_by = false;
  ConjunctiveQuery query;  // the original query, for output naming
};

AggregationForm normalize_aggregation(const ConjunctiveQuery& cq);

/// Atoms whose variables include all of S, lexicographically sorted.
std::vector<std::string> find_guards(const AggregationForm& form);

enum class SetSafety { MinMax, DistinctAggregate, DistinctProjection, BooleanQuery, NotSafe };

std::string set_safety_name(SetSafety s);

struct ZeroMAReport {
  bool guarded = false;
  std::vector<std::string> guards;
  bool set_safe = false;
  SetSafety set_safe_reason = SetSafety::NotSafe;
  std::string not_safe_function;  // "SUM", "COUNT", "AVG" or "projection"
  bool is_0ma = false;
  std::optional<std::string> chosen_root;
  std::set<std::string> projection_vars;
  std::vector<std::string> notes;

  /// Multi-line `key: value` text used by `analyze`.
  std::string render() const;
};

/// Guardedness plus the syntactic set-safety whitelist. `guard_override`
/// picks a specific guard as root; it must be one of the guards (throws
/// InvalidArgument otherwise).
ZeroMAReport classify_0ma(const AggregationForm& form,
                          const std::optional<std::string>& guard_override = std::nullopt);

/// Smallest connected set of tree nodes whose attributes cover `vars`, ties
/// broken by the label of the candidate root so the result does not depend on
/// where the tree is rooted. Empty `vars` give the root alone.
std::set<std::string> minimal_covering_subtree(const JoinTree& t, const std::set<std::string>& vars);

}  // namespace yr
