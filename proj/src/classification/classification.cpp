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

#include "classification/classification.hpp"

#include <algorithm>
#include <sstream>

#include "common/error.hpp"

namespace yr {

AggregationForm normalize_aggregation(const ConjunctiveQuery& cq) {
  AggregationForm form;
  form.query = cq;
  form.inner.atoms = cq.atoms;
  form.inner.selections = cq.selections;
  form.inner.statically_empty = cq.statically_empty;
  form.projection_vars = cq.projection_vars();
  form.grouping_vars = cq.grouping_vars;
  form.aggregates = cq.aggregates;
  form.having = cq.having;
  form.boolean = cq.is_boolean();
  form.distinct = cq.distinct;
  form.has_group_by = cq.has_group_by;
  return form;
}

std::vector<std::string> find_guards(const AggregationForm& form) {
  std::vector<std::string> guards;
  for (const auto& atom : form.inner.atoms) {
    const auto vars = atom.variables();
    if (std::includes(vars.begin(), vars.end(), form.projection_vars.begin(), form.projection_vars.end()))
      guards.push_back(atom.id);
  }
  std::sort(guards.begin(), guards.end());
  return guards;
}

std::string set_safety_name(SetSafety s) {
  switch (s) {
    case SetSafety::MinMax: return "MinMax";
    case SetSafety::DistinctAggregate: return "DistinctAggregate";
    case SetSafety::DistinctProjection: return "DistinctProjection";
    case SetSafety::BooleanQuery: return "BooleanQuery";
    case SetSafety::NotSafe: return "NotSafe";
  }
  return "?";
}

namespace {

void decide_set_safety(const AggregationForm& form, ZeroMAReport& r) {
  if (!form.aggregates.empty()) {
    bool all_minmax = true;
    bool any_distinct = false;
    for (const auto& a : form.aggregates) {
      const bool minmax = a.func == AggFunc::Min || a.func == AggFunc::Max;
      all_minmax = all_minmax && minmax;
      any_distinct = any_distinct || a.distinct;
      if (!minmax && !a.distinct && r.not_safe_function.empty()) r.not_safe_function = agg_func_name(a.func);
    }
    if (all_minmax) {
      r.set_safe = true;
      r.set_safe_reason = SetSafety::MinMax;
    } else if (r.not_safe_function.empty() && any_distinct) {
      r.set_safe = true;
      r.set_safe_reason = SetSafety::DistinctAggregate;
    }
    if (!r.set_safe)
      r.notes.push_back("aggregate " + r.not_safe_function +
                        " counts duplicates; key constraints that might make it set-safe are not considered");
    return;
  }
  if (form.boolean) {
    r.set_safe = true;
    r.set_safe_reason = SetSafety::BooleanQuery;
  } else if (form.distinct || form.has_group_by) {
    r.set_safe = true;
    r.set_safe_reason = SetSafety::DistinctProjection;
  } else {
    r.not_safe_function = "projection";
  }
}

}  // namespace

ZeroMAReport classify_0ma(const AggregationForm& form, const std::optional<std::string>& guard_override) {
  ZeroMAReport r;
  r.projection_vars = form.projection_vars;
  r.guards = find_guards(form);
  r.guarded = !r.guards.empty();
  decide_set_safety(form, r);
  r.is_0ma = r.guarded && r.set_safe;
  if (guard_override) {
    if (std::find(r.guards.begin(), r.guards.end(), *guard_override) == r.guards.end())
      throw Error(ErrorCode::InvalidArgument, "requested guard " + *guard_override + " does not guard the query");
  }
  if (r.is_0ma) r.chosen_root = guard_override ? *guard_override : r.guards.front();
  return r;
}

std::string ZeroMAReport::render() const {
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& x : items) s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? std::string("-") : s;
  };
  std::ostringstream out;
  out << "projection vars: " << join(projection_vars) << '\n';
  out << "guarded: " << (guarded ? "yes" : "no") << '\n';
  out << "guards: " << join(guards) << '\n';
  out << "set-safe: " << (set_safe ? "yes" : "no") << " (" << set_safety_name(set_safe_reason);
  if (!set_safe) out << ": " << not_safe_function;
  out << ")\n";
  out << "0MA: " << (is_0ma ? "yes" : "no");
  if (chosen_root) out << ", guard: " << *chosen_root;
  out << '\n';
  for (const auto& n : notes) out << "note: " << n << '\n';
  return out.str();
}

std::set<std::string> minimal_covering_subtree(const JoinTree& t, const std::set<std::string>& vars) {
  if (t.size() == 0) throw Error(ErrorCode::EmptyTree, "empty join tree");
  for (const auto& v : vars) {
    bool held = false;
    for (const auto& [id, attrs] : t.attrs) held = held || attrs.count(v);
    if (!held) throw Error(ErrorCode::InvalidArgument, "variable " + v + " occurs in no tree node");
  }
  if (vars.empty()) return {t.root};

  std::set<std::string> best;
  for (const auto& r : t.nodes()) {
    std::set<std::string> chosen{r};
    for (const auto& v : vars) {
      // Holders of v form a connected subtree, so the nearest holder is
      // unique and every covering set rooted at r contains the path to it.
      std::vector<std::string> nearest;
      for (const auto& [id, attrs] : t.attrs) {
        if (!attrs.count(v)) continue;
        std::vector<std::string> p = t.path(r, id);
        if (nearest.empty() || p.size() < nearest.size()) nearest = std::move(p);
      }
      chosen.insert(nearest.begin(), nearest.end());
    }
    if (best.empty() || chosen.size() < best.size()) best = std::move(chosen);
  }
  return best;
}

}  // namespace yr
