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

#include "engine/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "common/error.hpp"

namespace yr {

std::uint64_t StageStats::max_rows(Stage s) const {
  std::uint64_t m = 0;
  for (const auto& st : statements)
    if (st.stage == s) m = std::max(m, st.rows);
  return m;
}

std::int64_t StageStats::stage_micros(Stage s) const {
  std::int64_t total = 0;
  for (const auto& st : statements)
    if (st.stage == s) total += st.micros;
  return total;
}

std::uint64_t StageStats::max_intermediate() const {
  std::uint64_t m = 0;
  for (const auto& st : statements)
    if (st.stage != Stage::Finalize) m = std::max(m, st.rows);
  return m;
}

std::string StageStats::render() const {
  std::ostringstream out;
  for (const auto& st : statements) out << st.name << ", " << st.rows << ", " << st.micros << '\n';
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

}  // namespace

Relation atom_relation(const std::string& relation, const std::vector<AttrBinding>& bindings,
                       const std::vector<ConstantSelection>& selections, const Database& db) {
  auto it = db.find(relation);
  if (it == db.end()) throw Error(ErrorCode::MissingRelation, "no data for relation " + relation);
  const Relation& base = it->second;

  std::map<std::string, std::vector<std::size_t>> var_cols;
  for (const auto& b : bindings) {
    auto c = base.column(b.attribute);
    if (!c) throw Error(ErrorCode::UnknownAttribute, "relation " + relation + " has no attribute " + b.attribute);
    var_cols[b.variable].push_back(*c);
  }
  std::vector<std::pair<std::size_t, const ConstantSelection*>> sels;
  for (const auto& s : selections) {
    auto c = base.column(s.attribute);
    if (!c) throw Error(ErrorCode::UnknownAttribute, "relation " + relation + " has no attribute " + s.attribute);
    sels.emplace_back(*c, &s);
  }

  std::vector<std::string> schema;
  for (const auto& [v, _] : var_cols) schema.push_back(v);
  Relation out(schema);
  for (const auto& [t, n] : base.rows()) {
    bool keep = true;
    for (const auto& [c, s] : sels) keep = keep && compare_values(t[c], s->cmp, s->constant);
    if (!keep) continue;
    Tuple row;
    for (const auto& [v, cols] : var_cols) {
      for (std::size_t i = 1; i < cols.size() && keep; ++i)
        keep = compare_values(t[cols[0]], Comparator::Eq, t[cols[i]]);
      row.push_back(t[cols[0]]);
    }
    if (keep) out.add(std::move(row), n);
  }
  return out;
}

Relation naive_join(const ConjunctiveQuery& cq, const Database& db, StageStats* stats) {
  Relation acc = Relation::unit();
  for (std::size_t i = 0; i < cq.atoms.size(); ++i) {
    const Atom& atom = cq.atoms[i];
    auto start = Clock::now();
    Relation r = atom_relation(atom.relation, atom.bindings, cq.selections_for(atom.id), db);
    if (stats) stats->statements.push_back({atom.id + "_scan", Stage::Setup, r.cardinality(), 0, micros_since(start)});
    start = Clock::now();
    acc = i == 0 ? std::move(r) : natural_join(acc, r);
    if (stats && i > 0)
      stats->statements.push_back({"join" + std::to_string(i), Stage::Join, acc.cardinality(), 0, micros_since(start)});
  }
  return acc;
}

Relation eval_naive(const ConjunctiveQuery& cq, const Database& db, StageStats* stats) {
  for (const auto& atom : cq.atoms)
    if (!db.count(atom.relation)) throw Error(ErrorCode::MissingRelation, "no data for relation " + atom.relation);
  Relation joined = naive_join(cq, db, stats);
  auto start = Clock::now();
  const std::set<std::string> s = cq.projection_vars();
  Relation out = finalize(joined, std::vector<std::string>(s.begin(), s.end()), false, output_spec(cq));
  if (stats) stats->statements.push_back({"result", Stage::Finalize, out.cardinality(), 0, micros_since(start)});
  return out;
}

namespace {

class PlanInterpreter {
 public:
  PlanInterpreter(const StagePlan& plan, const Database& db, const EvalOptions& options)
      : plan_(plan), db_(db), options_(options) {}

  PlanResult run() {
    for (const auto& st : plan_.statements) {
      if (skipping_ && st.stage != Stage::Finalize) {
        result_.handles[st.name] = Relation(st.schema);
        result_.stats.statements.push_back({st.name, st.stage, 0, 0, 0});
        continue;
      }
      auto start = Clock::now();
      std::uint64_t input_rows = 0;
      Relation out = std::visit([&](const auto& body) { return exec(body, input_rows); }, st.body);
      result_.stats.statements.push_back({st.name, st.stage, out.cardinality(), input_rows, micros_since(start)});
      result_.handles[st.name] = std::move(out);
      if (st.stage == Stage::SemijoinUp || st.stage == Stage::Setup) maybe_short_circuit(st);
    }
    result_.result = result_.handles.at(plan_.final_statement().name);
    return std::move(result_);
  }

 private:
  // After the last SEMIJOIN_UP statement (or the last SETUP one when there is
  // no up pass) the root's handle is final for the rest of the plan.
  void maybe_short_circuit(const PlanStatement& st) {
    if (!options_.short_circuit || plan_.mode == PlanMode::ZeroMA) return;
    auto snap = plan_.node_relations.find(Stage::SemijoinUp);
    if (snap == plan_.node_relations.end()) return;
    auto root = snap->second.find(plan_.tree.root);
    if (root == snap->second.end() || root->second != st.name) return;
    if (result_.handles.at(st.name).empty()) {
      skipping_ = true;
      result_.stats.short_circuited = true;
    }
  }

  const Relation& handle(const std::string& name) const {
    auto it = result_.handles.find(name);
    if (it == result_.handles.end()) throw Error(ErrorCode::PlanReferenceError, "undefined handle " + name);
    return it->second;
  }

  Relation exec(const SetupBody& body, std::uint64_t&) const {
    Relation acc = Relation::unit();
    for (const auto& src : body.sources) {
      Relation r = atom_relation(src.relation, src.bindings, src.selections, db_);
      if (src.filter_only) r = project(r, src.filter_vars, true);
      acc = natural_join(acc, r);
    }
    return project(acc, body.projection);
  }

  Relation exec(const SemijoinBody& body, std::uint64_t& input_rows) const {
    Relation rel = handle(body.input);
    input_rows = rel.cardinality();
    for (const auto& r : body.reducers) {
      std::vector<std::pair<std::string, std::string>> keys;
      for (const auto& k : r.keys) keys.emplace_back(k, k);
      rel = semi_join(rel, handle(r.handle), keys);
    }
    return rel;
  }

  Relation exec(const JoinBody& body, std::uint64_t&) const {
    Relation acc = Relation::unit();
    for (const auto& in : body.inputs) acc = natural_join(acc, handle(in));
    return project(acc, body.projection);
  }

  Relation exec(const FinalizeBody& body, std::uint64_t&) const {
    const Relation input = body.input.empty() ? Relation(body.projection) : handle(body.input);
    return finalize(input, body.projection, body.distinct_input, body.output);
  }

  const StagePlan& plan_;
  const Database& db_;
  const EvalOptions& options_;
  PlanResult result_;
  bool skipping_ = false;
};

}  // namespace

PlanResult eval_plan(const StagePlan& plan, const Database& db, const EvalOptions& options) {
  if (plan.statements.empty()) throw Error(ErrorCode::PlanReferenceError, "plan has no statements");
  return PlanInterpreter(plan, db, options).run();
}

bool full_reducer_holds(const StagePlan& plan, const std::map<std::string, Relation>& handles, Stage stage,
                        const ConjunctiveQuery& cq, const Database& db) {
  auto snap = plan.node_relations.find(stage);
  if (snap == plan.node_relations.end()) return false;
  const Relation joined = naive_join(cq, db);
  for (const auto& [node, name] : snap->second) {
    auto it = handles.find(name);
    if (it == handles.end()) return false;
    const Relation& h = it->second;
    Relation allowed = project(joined, h.schema(), true);
    for (const auto& [t, n] : h.rows())
      if (!allowed.count(t)) return false;
  }
  return true;
}

}  // namespace yr
