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

#include "plan/stage_plan.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "common/error.hpp"

namespace yr {

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::Setup: return "SETUP";
    case Stage::SemijoinUp: return "SEMIJOIN_UP";
    case Stage::SemijoinDown: return "SEMIJOIN_DOWN";
    case Stage::Join: return "JOIN";
    case Stage::Finalize: return "FINALIZE";
  }
  return "?";
}

std::string plan_mode_name(PlanMode m) {
  switch (m) {
    case PlanMode::FullEnum: return "FullEnum";
    case PlanMode::ZeroMA: return "ZeroMA";
    case PlanMode::Partial: return "Partial";
  }
  return "?";
}

std::vector<const PlanStatement*> StagePlan::stage(Stage s) const {
  std::vector<const PlanStatement*> out;
  for (const auto& st : statements)
    if (st.stage == s) out.push_back(&st);
  return out;
}

const PlanStatement* StagePlan::find(const std::string& name) const {
  for (const auto& st : statements)
    if (st.name == name) return &st;
  return nullptr;
}

namespace {

std::string join_list(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::vector<std::string> intersect(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

std::string owning_view(const std::vector<ViewDefinition>& views, const std::string& atom) {
  for (const auto& v : views)
    for (const auto& s : v.sources)
      if (s.atom == atom && !s.filter_only) return v.id;
  return {};
}

}  // namespace

JoinTree select_root(const JoinTree& t, const ZeroMAReport& report, PlanMode mode,
                     const std::vector<ViewDefinition>& views) {
  if (t.size() == 0) throw Error(ErrorCode::EmptyTree, "empty join tree");
  switch (mode) {
    case PlanMode::FullEnum: return t;
    case PlanMode::ZeroMA: {
      if (!report.is_0ma || !report.chosen_root)
        throw Error(ErrorCode::ModeMismatch, "ZeroMA mode requested for a query that is not 0MA");
      std::string node = *report.chosen_root;
      if (!t.contains(node) || t.label.at(node).kind != NodeLabel::Kind::BaseAtom) node = owning_view(views, node);
      if (node.empty() || !t.contains(node))
        throw Error(ErrorCode::GuardNotInTree, "guard " + *report.chosen_root + " is not a node of the join tree");
      return reroot(t, node);
    }
    case PlanMode::Partial: {
      const std::set<std::string> cover = minimal_covering_subtree(t, report.projection_vars);
      if (cover.count(t.root)) return t;
      // The covering subtree is connected, so the first of its nodes on the
      // way down from the root is the closest one.
      std::string best;
      for (const auto& n : cover)
        if (best.empty() || t.path(t.root, n).size() < t.path(t.root, best).size()) best = n;
      return reroot(t, best);
    }
  }
  return t;
}

std::vector<std::vector<std::string>> group_join_tree(const JoinTree& t, const std::set<std::string>& scope,
                                                      std::size_t cap) {
  if (cap == 0) throw Error(ErrorCode::InvalidArgument, "join group cap must be positive");
  std::vector<std::vector<std::string>> closed;
  std::map<std::string, std::vector<std::string>> pending;
  for (const auto& u : t.post_order()) {
    if (!scope.count(u)) continue;
    std::vector<std::string> group{u};
    for (const auto& c : t.children(u)) {
      auto it = pending.find(c);
      if (it == pending.end()) continue;
      if (group.size() + it->second.size() <= cap) {
        group.insert(group.end(), it->second.begin(), it->second.end());
      } else {
        closed.push_back(std::move(it->second));
      }
      pending.erase(it);
    }
    pending[u] = std::move(group);
  }
  // Only the scope's top node can still be pending here.
  for (auto& [node, group] : pending) closed.push_back(std::move(group));
  return closed;
}

namespace {

class PlanBuilder {
 public:
  PlanBuilder(const JoinTree& t, const AggregationForm& form, PlanMode mode, const PlanOptions& options)
      : t_(t), form_(form), mode_(mode), options_(options) {}

  StagePlan run() {
    plan_.mode = mode_;
    plan_.tree = t_;
    plan_.output_projection.assign(form_.projection_vars.begin(), form_.projection_vars.end());
    OutputSpec spec = output_spec(form_.query);
    plan_.output_columns = spec.column_names();

    if (form_.inner.statically_empty) {
      plan_.warnings.push_back("contradictory constants: the query result is empty");
      finalize("", {}, std::move(spec));
      return std::move(plan_);
    }
    if (t_.size() == 0) throw Error(ErrorCode::EmptyTree, "empty join tree");
    check_mode();

    setup();
    semijoin_up();
    if (mode_ == PlanMode::ZeroMA) {
      const std::string& root = handle_.at(t_.root);
      finalize(root, schema_.at(root), std::move(spec));
      return std::move(plan_);
    }
    semijoin_down();
    std::string joined = join();
    finalize(joined, schema_.at(joined), std::move(spec));
    return std::move(plan_);
  }

 private:
  void check_mode() {
    ZeroMAReport report = classify_0ma(form_);
    const VertexSet& root_attrs = t_.attrs.at(t_.root);
    switch (mode_) {
      case PlanMode::FullEnum:
        for (const auto& n : t_.nodes()) scope_.insert(n);
        break;
      case PlanMode::ZeroMA:
        if (!report.set_safe)
          throw Error(ErrorCode::ModeMismatch, "ZeroMA mode requires a set-safe query (" + report.not_safe_function + ")");
        if (!std::includes(root_attrs.begin(), root_attrs.end(), form_.projection_vars.begin(),
                           form_.projection_vars.end()))
          throw Error(ErrorCode::ModeMismatch, "ZeroMA mode requires the root " + t_.root + " to guard the query");
        scope_ = {t_.root};
        break;
      case PlanMode::Partial:
        if (!report.set_safe)
          throw Error(ErrorCode::ModeMismatch,
                      "Partial mode requires a set-safe query (" + report.not_safe_function + ")");
        scope_ = minimal_covering_subtree(t_, form_.projection_vars);
        if (!scope_.count(t_.root))
          throw Error(ErrorCode::ModeMismatch, "Partial mode requires the root inside the covering subtree");
        break;
    }
    plan_.scope = scope_;
  }

  void add(PlanStatement st) {
    schema_[st.name] = st.schema;
    plan_.statements.push_back(std::move(st));
  }

  void snapshot(Stage s) { plan_.node_relations[s] = handle_; }

  std::vector<SetupSource> sources_for(const std::string& node) const {
    std::vector<SetupSource> out;
    const VertexSet& bag = t_.attrs.at(node);
    auto source = [&](const std::string& atom_id, bool filter_only) {
      const Atom* atom = form_.inner.find_atom(atom_id);
      if (!atom) throw Error(ErrorCode::InvalidArgument, "tree refers to unknown atom " + atom_id);
      SetupSource s;
      s.atom = atom->id;
      s.relation = atom->relation;
      s.bindings = atom->bindings;
      s.selections = form_.inner.selections_for(atom->id);
      s.filter_only = filter_only;
      if (filter_only)
        for (const auto& v : atom->variables())
          if (bag.count(v)) s.filter_vars.push_back(v);
      out.push_back(std::move(s));
    };
    const NodeLabel& lbl = t_.label.at(node);
    if (lbl.kind == NodeLabel::Kind::BaseAtom) {
      source(lbl.ref, false);
      return out;
    }
    for (const auto& v : options_.views)
      if (v.id == lbl.ref) {
        for (const auto& s : v.sources) source(s.atom, s.filter_only);
        return out;
      }
    throw Error(ErrorCode::InvalidArgument, "no definition for view " + lbl.ref);
  }

  void setup() {
    for (const auto& u : t_.pre_order()) {
      std::set<std::string> needed = form_.projection_vars;
      for (const auto& [other, vars] : t_.attrs)
        if (other != u) needed.insert(vars.begin(), vars.end());
      SetupBody body;
      body.sources = sources_for(u);
      for (const auto& v : t_.attrs.at(u))
        if (needed.count(v)) body.projection.push_back(v);
      PlanStatement st;
      st.kind = StatementKind::CreateView;
      st.stage = Stage::Setup;
      st.name = u + "_setup";
      st.node = u;
      st.schema = body.projection;
      st.body = std::move(body);
      handle_[u] = st.name;
      add(std::move(st));
    }
    snapshot(Stage::Setup);
  }

  SemijoinReducer reducer(const std::string& input, const std::string& other) const {
    return SemijoinReducer{other, intersect(schema_.at(input), schema_.at(other))};
  }

  void semijoin_up() {
    for (const auto& u : t_.post_order()) {
      std::vector<std::string> kids = t_.children(u);
      if (kids.empty()) continue;
      SemijoinBody body;
      body.input = handle_.at(u);
      PlanStatement st;
      for (const auto& c : kids) {
        body.reducers.push_back(reducer(body.input, handle_.at(c)));
        st.depends_on.push_back(handle_.at(c));
      }
      st.depends_on.insert(st.depends_on.begin(), body.input);
      st.kind = StatementKind::CreateTemp;
      st.stage = Stage::SemijoinUp;
      st.name = u + "_sjup";
      st.node = u;
      st.schema = schema_.at(body.input);
      st.body = std::move(body);
      handle_[u] = st.name;
      add(std::move(st));
    }
    snapshot(Stage::SemijoinUp);
  }

  void semijoin_down() {
    for (const auto& u : t_.pre_order()) {
      if (u == t_.root || !scope_.count(u)) continue;
      const std::string& par = t_.parent.at(u);
      SemijoinBody body;
      body.input = handle_.at(u);
      body.reducers.push_back(reducer(body.input, handle_.at(par)));
      PlanStatement st;
      st.kind = StatementKind::CreateTemp;
      st.stage = Stage::SemijoinDown;
      st.name = u + "_sjdown";
      st.node = u;
      st.schema = schema_.at(body.input);
      st.depends_on = {body.input, handle_.at(par)};
      st.body = std::move(body);
      handle_[u] = st.name;
      add(std::move(st));
    }
    snapshot(Stage::SemijoinDown);
  }

  std::string join() {
    std::vector<std::vector<std::string>> groups = group_join_tree(t_, scope_, options_.join_group_cap);
    std::map<std::string, std::size_t> group_of;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (const auto& n : groups[g]) group_of[n] = g;
    const std::vector<std::string> pre = t_.pre_order();
    auto pre_rank = [&](const std::string& n) { return std::find(pre.begin(), pre.end(), n) - pre.begin(); };

    // Statement order is closing order (bottom-up); inputs of one statement
    // follow pre-order so every input meets an already joined neighbour.
    std::vector<std::pair<std::string, std::string>> results;  // (top node, handle)
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<std::string> members = groups[g];
      std::sort(members.begin(), members.end(),
                [&](const std::string& a, const std::string& b) { return pre_rank(a) < pre_rank(b); });
      std::set<std::string> keep = form_.projection_vars;
      if (groups.size() > 1)
        for (const auto& n : members)
          for (const auto& [other, gi] : group_of)
            if (gi != g)
              for (const auto& v : t_.attrs.at(n))
                if (t_.attrs.at(other).count(v)) keep.insert(v);
      JoinBody body;
      PlanStatement st;
      std::set<std::string> available;
      for (const auto& n : members) {
        body.inputs.push_back(handle_.at(n));
        for (const auto& v : schema_.at(handle_.at(n))) available.insert(v);
      }
      for (const auto& v : keep)
        if (available.count(v)) body.projection.push_back(v);
      st.kind = StatementKind::CreateTemp;
      st.stage = Stage::Join;
      st.name = "group" + std::to_string(g + 1) + "_join";
      st.node = members.front();
      st.schema = body.projection;
      st.depends_on = body.inputs;
      st.body = std::move(body);
      results.emplace_back(members.front(), st.name);
      add(std::move(st));
    }
    std::string out = results.front().second;
    if (results.size() > 1) {
      std::sort(results.begin(), results.end(),
                [&](const auto& a, const auto& b) { return pre_rank(a.first) < pre_rank(b.first); });
      JoinBody body;
      PlanStatement st;
      for (const auto& [top, h] : results) body.inputs.push_back(h);
      body.projection = plan_.output_projection;
      st.kind = StatementKind::CreateTemp;
      st.stage = Stage::Join;
      st.name = "final_join";
      st.schema = body.projection;
      st.depends_on = body.inputs;
      st.body = std::move(body);
      out = st.name;
      add(std::move(st));
    }
    snapshot(Stage::Join);
    return out;
  }

  void finalize(const std::string& input, std::vector<std::string> input_schema, OutputSpec spec) {
    FinalizeBody body;
    body.input = input;
    body.input_schema = std::move(input_schema);
    body.projection = plan_.output_projection;
    body.distinct_input = mode_ != PlanMode::FullEnum;
    body.output = std::move(spec);
    PlanStatement st;
    st.kind = StatementKind::Select;
    st.stage = Stage::Finalize;
    st.name = "result";
    st.schema = body.output.column_names();
    if (!input.empty()) st.depends_on = {input};
    st.body = std::move(body);
    add(std::move(st));
  }

  const JoinTree& t_;
  const AggregationForm& form_;
  PlanMode mode_;
  const PlanOptions& options_;
  StagePlan plan_;
  std::set<std::string> scope_;
  std::map<std::string, std::string> handle_;                  // node -> latest handle
  std::map<std::string, std::vector<std::string>> schema_;     // handle -> columns
};

std::string render_source(const SetupSource& s) {
  std::ostringstream out;
  out << s.relation;
  if (s.atom != s.relation) out << " AS " << s.atom;
  out << "(";
  for (std::size_t i = 0; i < s.bindings.size(); ++i)
    out << (i ? ", " : "") << s.bindings[i].attribute
        << (s.bindings[i].attribute == s.bindings[i].variable ? "" : "->" + s.bindings[i].variable);
  out << ")";
  for (const auto& sel : s.selections)
    out << " [" << sel.attribute << comparator_symbol(sel.cmp) << value_to_sql(sel.constant) << "]";
  if (s.filter_only) out << " filter[" << join_list(s.filter_vars) << "]";
  return out.str();
}

std::string render_output(const FinalizeBody& f) {
  const OutputSpec& o = f.output;
  std::ostringstream out;
  if (o.boolean) return "exists -> " + std::to_string(o.literal) + " AS " + o.columns.front().first;
  if (o.aggregated) {
    out << "group by [" << join_list(o.grouping) << "]";
    for (const auto& a : o.aggregates)
      out << " " << a.output << "=" << agg_func_name(a.func) << "(" << (a.distinct ? "DISTINCT " : "") << a.input
          << ")";
    if (o.having)
      out << " having " << o.having->column << comparator_symbol(o.having->cmp) << value_to_sql(o.having->constant);
    out << " ->";
  } else {
    out << (o.distinct ? "distinct" : "project") << " ->";
  }
  for (const auto& [name, source] : o.columns) out << " " << name << (name == source ? "" : "=" + source);
  return out.str();
}

}  // namespace

StagePlan build_plan(const JoinTree& t, const AggregationForm& form, PlanMode mode, const PlanOptions& options) {
  return PlanBuilder(t, form, mode, options).run();
}

std::string StagePlan::render() const {
  std::ostringstream out;
  out << "mode: " << plan_mode_name(mode) << '\n';
  out << "output projection: [" << join_list(output_projection) << "]\n";
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  std::optional<Stage> current;
  for (const auto& st : statements) {
    if (!current || *current != st.stage) {
      current = st.stage;
      out << stage_name(st.stage) << '\n';
    }
    out << "  " << st.name << "(" << join_list(st.schema) << ") := ";
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, SetupBody>) {
            std::vector<std::string> parts;
            for (const auto& s : body.sources) parts.push_back(render_source(s));
            out << "setup " << join_list(parts, " * ");
          } else if constexpr (std::is_same_v<T, SemijoinBody>) {
            out << body.input;
            for (const auto& r : body.reducers) out << " semijoin " << r.handle << " on [" << join_list(r.keys) << "]";
          } else if constexpr (std::is_same_v<T, JoinBody>) {
            out << "join " << join_list(body.inputs, " * ");
          } else {
            out << (body.input.empty() ? std::string("<empty>") : body.input);
            out << " project [" << join_list(body.projection) << "]" << (body.distinct_input ? " distinct" : "");
            out << " " << render_output(body);
          }
        },
        st.body);
    out << '\n';
  }
  return out.str();
}

}  // namespace yr
