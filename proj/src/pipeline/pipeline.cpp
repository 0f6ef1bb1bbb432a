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

#include "pipeline/pipeline.hpp"

#include <sstream>

#include "common/error.hpp"

namespace yr {

ModeChoice parse_mode_choice(const std::string& text) {
  if (text == "auto") return ModeChoice::Auto;
  if (text == "full" || text == "fullenum") return ModeChoice::Full;
  if (text == "0ma" || text == "zeroma") return ModeChoice::ZeroMA;
  if (text == "partial") return ModeChoice::Partial;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + text + "' (auto, full, 0ma, partial)");
}

ConjunctiveQuery parse_sql(const std::string& sql, const Catalog* catalog) {
  return extract_cq(parse_query(sql), catalog);
}

namespace {

std::string indent(const std::string& text, const std::string& pad) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) out += pad + line + "\n";
  return out;
}

/// Join tree for the query, through a GHD when the hypergraph is cyclic.
void build_tree(Compiled& c, const PipelineOptions& options) {
  GyoResult gyo = build_join_tree(c.hypergraph, &c.warnings);
  if (gyo.acyclic()) {
    c.tree = std::move(*gyo.tree);
    return;
  }
  c.cyclic = true;
  c.residual = gyo.residual;
  if (options.ghd) {
    c.ghd = options.ghd;
  } else if (options.ghd_width > 0) {
    c.ghd = find_ghd(c.hypergraph, options.ghd_width, options.seed);
    if (!c.ghd)
      throw Error(ErrorCode::NoJoinTree,
                  "query is cyclic and has no decomposition of width " + std::to_string(options.ghd_width));
  } else {
    throw Error(ErrorCode::NoJoinTree, "query is cyclic; residual hypergraph:\n" + c.residual.dump() +
                                           "retry with a GHD (--ghd-width 2 or --ghd-file)");
  }
  GhdJoinTree gj = ghd_to_join_tree(*c.ghd, c.cq);
  c.tree = std::move(gj.tree);
  c.views = std::move(gj.views);
}

PlanMode choose_mode(const Compiled& c, ModeChoice choice) {
  switch (choice) {
    case ModeChoice::Full: return PlanMode::FullEnum;
    case ModeChoice::ZeroMA: return PlanMode::ZeroMA;
    case ModeChoice::Partial: return PlanMode::Partial;
    case ModeChoice::Auto: break;
  }
  if (c.report.is_0ma) return PlanMode::ZeroMA;
  if (c.report.set_safe && c.tree.size() > 0 &&
      minimal_covering_subtree(c.tree, c.form.projection_vars).size() < c.tree.size())
    return PlanMode::Partial;
  return PlanMode::FullEnum;
}

Compiled prepare(const ConjunctiveQuery& cq, const PipelineOptions& options) {
  Compiled c;
  c.cq = options.join_attrs_only ? project_to_join_vars(cq) : cq;
  c.hypergraph = build_hypergraph(c.cq);
  c.form = normalize_aggregation(c.cq);
  c.report = classify_0ma(c.form, options.guard);
  return c;
}

}  // namespace

Compiled compile(const ConjunctiveQuery& cq, const PipelineOptions& options) {
  Compiled c = prepare(cq, options);
  build_tree(c, options);
  ModeChoice choice = options.mode;
  if (options.join_attrs_only && choice == ModeChoice::Auto) choice = ModeChoice::Full;
  c.mode = choose_mode(c, choice);
  c.tree = select_root(c.tree, c.report, c.mode, c.views);
  PlanOptions po;
  po.join_group_cap = options.join_group_cap;
  po.views = c.views;
  c.plan = build_plan(c.tree, c.form, c.mode, po);
  c.plan.warnings.insert(c.plan.warnings.begin(), c.warnings.begin(), c.warnings.end());
  return c;
}

std::string analyze_report(const ConjunctiveQuery& cq, const PipelineOptions& options) {
  std::ostringstream out;
  Compiled c = prepare(cq, options);
  out << "hypergraph:\n" << indent(c.hypergraph.dump(), "  ");
  try {
    Compiled full = compile(cq, options);
    for (const auto& w : full.warnings) out << "warning: " << w << '\n';
    if (full.cyclic) {
      out << "acyclic: no\nresidual hypergraph:\n" << indent(full.residual.dump(), "  ");
      out << "decomposition (width " << full.ghd->width() << "):\n" << indent(write_ghd(*full.ghd), "  ");
    } else {
      out << "acyclic: yes\n";
    }
    out << "join tree (depth " << full.tree.depth() << "):\n" << indent(full.tree.render(), "  ");
    out << "classification:\n" << indent(full.report.render(), "  ");
    out << "mode: " << plan_mode_name(full.mode) << '\n';
    if (full.mode == PlanMode::Partial) {
      std::string scope;
      for (const auto& n : full.plan.scope) scope += (scope.empty() ? "" : ", ") + n;
      out << "covering subtree: " << scope << '\n';
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoJoinTree) throw;
    GyoResult gyo = build_join_tree(c.hypergraph);
    out << "acyclic: no\n";
    if (!gyo.acyclic()) out << "residual hypergraph:\n" << indent(gyo.residual.dump(), "  ");
    out << "note: " << e.what() << '\n';
    out << "classification:\n" << indent(c.report.render(), "  ");
  }
  return out.str();
}

Comparison compare(const Compiled& c, const Database& db, const EvalOptions& options) {
  Comparison cmp;
  cmp.naive = eval_naive(c.cq, db, &cmp.naive_stats);
  PlanResult pr = eval_plan(c.plan, db, options);
  cmp.plan = std::move(pr.result);
  cmp.plan_stats = std::move(pr.stats);
  cmp.equal = bag_equal(cmp.naive, cmp.plan);
  return cmp;
}

std::string Comparison::render() const {
  std::ostringstream out;
  out << "bag-equal: " << (equal ? "true" : "false") << '\n';
  out << "naive rows: " << naive.cardinality() << ", plan rows: " << plan.cardinality() << '\n';
  out << "naive max intermediate: " << naive_stats.max_intermediate() << '\n';
  out << "plan max intermediate: " << plan_stats.max_intermediate() << '\n';
  out << "naive stats:\n" << indent(naive_stats.render(), "  ");
  out << "plan stats:\n" << indent(plan_stats.render(), "  ");
  return out.str();
}

}  // namespace yr
