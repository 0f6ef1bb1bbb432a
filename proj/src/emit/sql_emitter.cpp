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

#include "emit/sql_emitter.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "common/error.hpp"

namespace yr {

Dialect make_dialect(DialectName name, std::optional<SemijoinStyle> style, bool forced) {
  Dialect d;
  d.name = name;
  d.temp_object = name == DialectName::Spark ? TempObject::TempView : TempObject::TempTable;
  d.semijoin_style = style.value_or(SemijoinStyle::Exists);
  d.style_forced = forced && style.has_value();
  return d;
}

DialectName parse_dialect_name(const std::string& text) {
  if (text == "postgres" || text == "postgresql") return DialectName::Postgres;
  if (text == "duckdb") return DialectName::DuckDB;
  if (text == "spark") return DialectName::Spark;
  if (text == "generic") return DialectName::Generic;
  throw Error(ErrorCode::InvalidArgument, "unknown dialect '" + text + "' (postgres, duckdb, spark, generic)");
}

std::string dialect_name(DialectName d) {
  switch (d) {
    case DialectName::Postgres: return "postgres";
    case DialectName::DuckDB: return "duckdb";
    case DialectName::Spark: return "spark";
    case DialectName::Generic: return "generic";
  }
  return "?";
}

SemijoinStyle parse_semijoin_style(const std::string& text) {
  if (text == "rowin" || text == "in") return SemijoinStyle::RowIn;
  if (text == "exists") return SemijoinStyle::Exists;
  throw Error(ErrorCode::InvalidArgument, "unknown semi-join style '" + text + "' (rowin, exists)");
}

std::string emit_script(const std::vector<std::string>& statements) {
  std::string out;
  for (const auto& s : statements) out += s + ";\n";
  return out;
}

namespace {

constexpr const char* kUnitColumn = "unit";

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "all",    "and",   "as",     "asc",   "between", "by",     "case",  "cast",   "check", "column",
      "create", "cross", "desc",   "distinct", "drop", "else",   "end",   "exists", "false", "from",
      "full",   "group", "having", "in",    "inner",   "into",   "is",    "join",   "left",  "like",
      "limit",  "natural", "not",  "null",  "on",      "or",     "order", "outer",  "right", "select",
      "table",  "then",  "to",     "true",  "union",   "user",   "using", "values", "view",  "when",
      "where",  "with",  "default", "primary", "references", "unique", "foreign", "offset", "window"};
  return words;
}

class Emitter {
 public:
  Emitter(const StagePlan& plan, const Dialect& d, const EmitOptions& options)
      : plan_(plan), d_(d), options_(options) {}

  std::vector<std::string> run() {
    std::vector<std::string> out;
    for (const auto& st : plan_.statements) {
      std::visit([&](const auto& body) { out.push_back(render(st, body)); }, st.body);
      schemas_[st.name] = st.schema;
    }
    if (options_.with_cleanup) {
      for (auto it = plan_.statements.rbegin(); it != plan_.statements.rend(); ++it) {
        if (it->kind == StatementKind::Select) continue;
        const bool view = it->kind == StatementKind::CreateView || d_.temp_object == TempObject::TempView;
        out.push_back(std::string(view ? "DROP VIEW IF EXISTS " : "DROP TABLE IF EXISTS ") + object(it->name));
      }
    }
    return out;
  }

 private:
  std::string q(const std::string& id) const {
    bool plain = !id.empty() && (std::islower(static_cast<unsigned char>(id[0])) || id[0] == '_');
    for (char c : id)
      plain = plain && (std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                        c == '_');
    if (plain && !reserved_words().count(id)) return id;
    const char quote = d_.name == DialectName::Spark ? '`' : '"';
    std::string out(1, quote);
    for (char c : id) {
      if (c == quote) out += quote;
      out += c;
    }
    return out + quote;
  }

  std::string object(const std::string& name) const { return q(options_.prefix + name); }

  std::string create(const PlanStatement& st) const {
    if (d_.temp_object == TempObject::TempView) return "CREATE OR REPLACE TEMP VIEW " + object(st.name) + " AS ";
    if (st.kind == StatementKind::CreateView) return "CREATE VIEW " + object(st.name) + " AS ";
    if (d_.name == DialectName::Generic) return "CREATE TEMPORARY TABLE " + object(st.name) + " AS ";
    return "CREATE TEMP TABLE " + object(st.name) + " AS ";
  }

  std::string false_predicate() const { return d_.name == DialectName::Generic ? "1=0" : "FALSE"; }

  static std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
  }

  std::string columns_or_unit(const std::vector<std::string>& cols, const std::string& qualifier = "") const {
    if (cols.empty()) return std::string("1 AS ") + kUnitColumn;
    std::vector<std::string> parts;
    for (const auto& c : cols) parts.push_back(qualifier.empty() ? q(c) : qualifier + "." + q(c));
    return join(parts, ", ");
  }

  // ---- SETUP ----

  /// Predicates of one source; `col` renders an attribute reference.
  template <typename Col>
  std::vector<std::string> source_predicates(const SetupSource& s, Col col) const {
    std::vector<std::string> preds;
    std::map<std::string, std::string> first;
    for (const auto& b : s.bindings) {
      auto [it, inserted] = first.emplace(b.variable, b.attribute);
      if (!inserted) preds.push_back(col(b.attribute) + "=" + col(it->second));
    }
    for (const auto& sel : s.selections)
      preds.push_back(col(sel.attribute) + comparator_symbol(sel.cmp) + value_to_sql(sel.constant));
    return preds;
  }

  static std::string attr_of(const SetupSource& s, const std::string& var) {
    for (const auto& b : s.bindings)
      if (b.variable == var) return b.attribute;
    return {};
  }

  std::string render(const PlanStatement& st, const SetupBody& body) const {
    std::ostringstream sql;
    sql << create(st);
    if (body.sources.empty()) {
      sql << "SELECT " << columns_or_unit({});
      return sql.str();
    }
    if (body.sources.size() == 1 && !body.sources.front().filter_only) {
      const SetupSource& s = body.sources.front();
      std::vector<std::string> cols;
      for (const auto& v : body.projection) {
        const std::string a = attr_of(s, v);
        cols.push_back(a == v ? q(v) : q(a) + " AS " + q(v));
      }
      sql << "SELECT " << (cols.empty() ? std::string("1 AS ") + kUnitColumn : join(cols, ", ")) << " FROM "
          << q(s.relation);
      auto preds = source_predicates(s, [&](const std::string& a) { return q(a); });
      if (!preds.empty()) sql << " WHERE " << join(preds, " AND ");
      return sql.str();
    }

    // Several sources: owned atoms join directly, filter-only atoms enter as
    // duplicate-free derived tables over the variables they restrict.
    std::vector<std::string> from;
    std::vector<std::string> preds;
    std::map<std::string, std::string> var_ref;
    for (const auto& s : body.sources) {
      const std::string alias = q(s.atom);
      if (s.filter_only) {
        std::vector<std::string> cols;
        for (const auto& v : s.filter_vars) {
          const std::string a = attr_of(s, v);
          cols.push_back(a == v ? q(v) : q(a) + " AS " + q(v));
        }
        std::string inner = "SELECT DISTINCT " + (cols.empty() ? std::string("1 AS ") + kUnitColumn : join(cols, ", ")) +
                            " FROM " + q(s.relation);
        auto inner_preds = source_predicates(s, [&](const std::string& a) { return q(a); });
        if (!inner_preds.empty()) inner += " WHERE " + join(inner_preds, " AND ");
        from.push_back("(" + inner + ") AS " + alias);
        for (const auto& v : s.filter_vars) {
          const std::string ref = alias + "." + q(v);
          auto [it, inserted] = var_ref.emplace(v, ref);
          if (!inserted) preds.push_back(ref + "=" + it->second);
        }
      } else {
        from.push_back(q(s.relation) + " AS " + alias);
        auto local = source_predicates(s, [&](const std::string& a) { return alias + "." + q(a); });
        preds.insert(preds.end(), local.begin(), local.end());
        std::set<std::string> done;
        for (const auto& b : s.bindings) {
          if (!done.insert(b.variable).second) continue;
          const std::string ref = alias + "." + q(b.attribute);
          auto [it, inserted] = var_ref.emplace(b.variable, ref);
          if (!inserted) preds.push_back(ref + "=" + it->second);
        }
      }
    }
    std::vector<std::string> cols;
    for (const auto& v : body.projection) cols.push_back(var_ref.at(v) + " AS " + q(v));
    sql << "SELECT " << (cols.empty() ? std::string("1 AS ") + kUnitColumn : join(cols, ", ")) << " FROM "
        << join(from, ", ");
    if (!preds.empty()) sql << " WHERE " << join(preds, " AND ");
    return sql.str();
  }

  // ---- SEMIJOIN ----

  std::string semijoin_condition(const SemijoinReducer& r) const {
    const std::string target = object(r.handle);
    if (r.keys.empty()) return "EXISTS (SELECT 1 FROM " + target + ")";
    SemijoinStyle style = d_.semijoin_style;
    if (style == SemijoinStyle::RowIn && r.keys.size() > 1 && d_.name == DialectName::Generic) {
      if (d_.style_forced)
        throw Error(ErrorCode::UnsupportedInDialect,
                    "generic SQL has no row constructors for multi-column IN; use the EXISTS style");
      style = SemijoinStyle::Exists;
    }
    if (style == SemijoinStyle::RowIn) {
      std::vector<std::string> keys;
      for (const auto& k : r.keys) keys.push_back(q(k));
      const std::string list = join(keys, ", ");
      const std::string lhs = r.keys.size() == 1 ? list : "(" + list + ")";
      return lhs + " IN (SELECT " + list + " FROM " + target + ")";
    }
    std::vector<std::string> eqs;
    for (const auto& k : r.keys) eqs.push_back("s." + q(k) + " = t." + q(k));
    return "EXISTS (SELECT 1 FROM " + target + " AS s WHERE " + join(eqs, " AND ") + ")";
  }

  std::string render(const PlanStatement& st, const SemijoinBody& body) const {
    std::vector<std::string> conds;
    for (const auto& r : body.reducers) conds.push_back(semijoin_condition(r));
    std::string sql = create(st) + "SELECT * FROM " + object(body.input);
    if (d_.semijoin_style == SemijoinStyle::Exists || d_.name == DialectName::Generic) sql += " AS t";
    return sql + " WHERE " + join(conds, " AND ");
  }

  // ---- JOIN ----

  std::string render(const PlanStatement& st, const JoinBody& body) const {
    std::map<std::string, std::string> var_ref;
    std::string from;
    for (std::size_t i = 0; i < body.inputs.size(); ++i) {
      const std::string alias = "t" + std::to_string(i + 1);
      std::vector<std::string> on;
      for (const auto& v : schemas_.at(body.inputs[i])) {
        auto [it, inserted] = var_ref.emplace(v, alias + "." + q(v));
        if (!inserted) on.push_back(alias + "." + q(v) + " = " + it->second);
      }
      const std::string item = object(body.inputs[i]) + " AS " + alias;
      if (i == 0)
        from = item;
      else if (on.empty())
        from += " CROSS JOIN " + item;
      else
        from += " JOIN " + item + " ON " + join(on, " AND ");
    }
    std::vector<std::string> cols;
    for (const auto& v : body.projection) cols.push_back(var_ref.at(v) + " AS " + q(v));
    return create(st) + "SELECT " + (cols.empty() ? std::string("1 AS ") + kUnitColumn : join(cols, ", ")) +
           " FROM " + from;
  }

  // ---- FINALIZE ----

  std::string aggregate_text(const AggregateSpec& a) const {
    return agg_func_name(a.func) + "(" + (a.distinct ? "DISTINCT " : "") + q(a.input) + ")";
  }

  std::string render(const PlanStatement&, const FinalizeBody& body) const {
    const OutputSpec& o = body.output;
    if (o.boolean) {
      const std::string head = "SELECT " + std::to_string(o.literal) + " AS " + q(o.columns.front().first);
      if (body.input.empty()) return head + " WHERE " + false_predicate();
      return head + " WHERE EXISTS (SELECT 1 FROM " + object(body.input) + ")";
    }
    std::string source;
    if (body.input.empty()) {
      if (!o.aggregated) {
        std::vector<std::string> cols;
        for (const auto& [name, src] : o.columns) cols.push_back("NULL AS " + q(name));
        return "SELECT " + join(cols, ", ") + " WHERE " + false_predicate();
      }
      std::vector<std::string> cols;
      for (const auto& v : body.projection) cols.push_back("NULL AS " + q(v));
      source = "(SELECT " + join(cols, ", ") + " WHERE " + false_predicate() + ") AS t";
    } else if (body.distinct_input) {
      source = "(SELECT DISTINCT " + columns_or_unit(body.projection) + " FROM " + object(body.input) + ") AS t";
    } else {
      source = object(body.input);
    }

    std::map<std::string, const AggregateSpec*> aggs;
    for (const auto& a : o.aggregates) aggs[a.output] = &a;
    std::vector<std::string> cols;
    for (const auto& [name, src] : o.columns) {
      auto it = aggs.find(src);
      if (it != aggs.end())
        cols.push_back(aggregate_text(*it->second) + " AS " + q(name));
      else
        cols.push_back(src == name ? q(src) : q(src) + " AS " + q(name));
    }
    std::string sql = std::string("SELECT ") + (o.distinct ? "DISTINCT " : "") + join(cols, ", ") + " FROM " + source;
    if (o.aggregated && !o.grouping.empty()) {
      std::vector<std::string> g;
      for (const auto& v : o.grouping) g.push_back(q(v));
      sql += " GROUP BY " + join(g, ", ");
    }
    if (o.having)
      sql += " HAVING " + aggregate_text(*aggs.at(o.having->column)) + " " + comparator_symbol(o.having->cmp) + " " +
             value_to_sql(o.having->constant);
    return sql;
  }

  const StagePlan& plan_;
  const Dialect& d_;
  const EmitOptions& options_;
  std::map<std::string, std::vector<std::string>> schemas_;
};

}  // namespace

std::vector<std::string> emit_plan(const StagePlan& plan, const Dialect& d, const EmitOptions& options) {
  return Emitter(plan, d, options).run();
}

}  // namespace yr
