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

#include "yr/yr.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include <json.hpp>

#include "common/error.hpp"
#include "pipeline/pipeline.hpp"

struct yr_query {
  yr::ConjunctiveQuery cq;
};

struct yr_database {
  std::string dir;
  yr::Catalog catalog;
};

struct yr_result {
  yr::Relation relation;
  yr::StageStats stats;
};

struct yr_comparison {
  yr::Comparison cmp;
};

namespace {

thread_local std::string last_error;

yr_status to_status(yr::ErrorCode code) {
  using yr::ErrorCode;
  switch (code) {
    case ErrorCode::SyntaxError: return YR_ERR_SYNTAX;
    case ErrorCode::UnsupportedFeature: return YR_ERR_UNSUPPORTED;
    case ErrorCode::AmbiguousColumn: return YR_ERR_AMBIGUOUS_COLUMN;
    case ErrorCode::InvalidQuery: return YR_ERR_INVALID_QUERY;
    case ErrorCode::DisconnectedInput: return YR_ERR_DISCONNECTED;
    case ErrorCode::TooLarge: return YR_ERR_TOO_LARGE;
    case ErrorCode::NoJoinTree: return YR_ERR_NO_JOIN_TREE;
    case ErrorCode::InvalidGhd: return YR_ERR_INVALID_GHD;
    case ErrorCode::GuardNotInTree: return YR_ERR_GUARD_NOT_IN_TREE;
    case ErrorCode::ModeMismatch: return YR_ERR_MODE_MISMATCH;
    case ErrorCode::EmptyTree: return YR_ERR_EMPTY_TREE;
    case ErrorCode::UnsupportedInDialect: return YR_ERR_UNSUPPORTED_IN_DIALECT;
    case ErrorCode::IoError: return YR_ERR_IO;
    case ErrorCode::ArityMismatch: return YR_ERR_ARITY_MISMATCH;
    case ErrorCode::SchemaMismatch: return YR_ERR_SCHEMA_MISMATCH;
    case ErrorCode::UnknownAttribute: return YR_ERR_UNKNOWN_ATTRIBUTE;
    case ErrorCode::TypeError: return YR_ERR_TYPE;
    case ErrorCode::MissingRelation: return YR_ERR_MISSING_RELATION;
    case ErrorCode::PlanReferenceError: return YR_ERR_PLAN_REFERENCE;
    case ErrorCode::InvalidArgument: return YR_ERR_INVALID_ARGUMENT;
  }
  return YR_ERR_INTERNAL;
}

/// Runs `fn`, translating exceptions into a status and the thread's message.
template <typename Fn>
yr_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return YR_OK;
  } catch (const yr::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  }
  return YR_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw yr::Error(yr::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

yr::PipelineOptions pipeline_options(const yr_options* o) {
  yr::PipelineOptions p;
  if (!o) return p;
  switch (o->mode) {
    case YR_MODE_AUTO: p.mode = yr::ModeChoice::Auto; break;
    case YR_MODE_FULL: p.mode = yr::ModeChoice::Full; break;
    case YR_MODE_ZEROMA: p.mode = yr::ModeChoice::ZeroMA; break;
    case YR_MODE_PARTIAL: p.mode = yr::ModeChoice::Partial; break;
    default: throw yr::Error(yr::ErrorCode::InvalidArgument, "unknown mode");
  }
  p.join_group_cap = o->join_group_cap;
  p.join_attrs_only = o->join_attrs_only != 0;
  if (o->guard) p.guard = std::string(o->guard);
  p.ghd_width = o->ghd_width;
  p.seed = o->seed;
  if (o->ghd_json) p.ghd = yr::read_ghd(o->ghd_json);
  return p;
}

yr::Dialect dialect_of(const yr_options* o) {
  yr_options defaults;
  yr_options_init(&defaults);
  if (!o) o = &defaults;
  yr::DialectName name{};
  switch (o->dialect) {
    case YR_DIALECT_POSTGRES: name = yr::DialectName::Postgres; break;
    case YR_DIALECT_DUCKDB: name = yr::DialectName::DuckDB; break;
    case YR_DIALECT_SPARK: name = yr::DialectName::Spark; break;
    case YR_DIALECT_GENERIC: name = yr::DialectName::Generic; break;
    default: throw yr::Error(yr::ErrorCode::InvalidArgument, "unknown dialect");
  }
  const yr::SemijoinStyle style =
      o->semijoin_style == YR_SEMIJOIN_ROW_IN ? yr::SemijoinStyle::RowIn : yr::SemijoinStyle::Exists;
  return yr::make_dialect(name, style, o->force_semijoin_style != 0);
}

}  // namespace

extern "C" {

void yr_options_init(yr_options* options) {
  if (!options) return;
  std::memset(options, 0, sizeof(*options));
  options->mode = YR_MODE_AUTO;
  options->join_group_cap = 12;
  options->dialect = YR_DIALECT_POSTGRES;
  options->semijoin_style = YR_SEMIJOIN_EXISTS;
}

const char* yr_last_error(void) { return last_error.c_str(); }

const char* yr_status_name(yr_status status) {
  switch (status) {
    case YR_OK: return "OK";
    case YR_ERR_SYNTAX: return "SyntaxError";
    case YR_ERR_UNSUPPORTED: return "UnsupportedFeature";
    case YR_ERR_AMBIGUOUS_COLUMN: return "AmbiguousColumn";
    case YR_ERR_INVALID_QUERY: return "InvalidQuery";
    case YR_ERR_DISCONNECTED: return "DisconnectedInput";
    case YR_ERR_TOO_LARGE: return "TooLarge";
    case YR_ERR_NO_JOIN_TREE: return "NoJoinTree";
    case YR_ERR_INVALID_GHD: return "InvalidGHD";
    case YR_ERR_GUARD_NOT_IN_TREE: return "GuardNotInTree";
    case YR_ERR_MODE_MISMATCH: return "ModeMismatch";
    case YR_ERR_EMPTY_TREE: return "EmptyTree";
    case YR_ERR_UNSUPPORTED_IN_DIALECT: return "UnsupportedInDialect";
    case YR_ERR_IO: return "IoError";
    case YR_ERR_ARITY_MISMATCH: return "ArityMismatch";
    case YR_ERR_SCHEMA_MISMATCH: return "SchemaMismatch";
    case YR_ERR_UNKNOWN_ATTRIBUTE: return "UnknownAttribute";
    case YR_ERR_TYPE: return "TypeError";
    case YR_ERR_MISSING_RELATION: return "MissingRelation";
    case YR_ERR_PLAN_REFERENCE: return "PlanReferenceError";
    case YR_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case YR_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void yr_string_free(char* s) { std::free(s); }

yr_status yr_query_parse(const char* sql, const yr_database* catalog, yr_query** out) {
  return guarded([&] {
    require(sql, "sql");
    require(out, "out");
    *out = nullptr;
    auto q = std::make_unique<yr_query>();
    q->cq = yr::parse_sql(sql, catalog ? &catalog->catalog : nullptr);
    *out = q.release();
  });
}

void yr_query_free(yr_query* query) { delete query; }

yr_status yr_query_canonical_sql(const yr_query* query, char** out) {
  return guarded([&] {
    require(query, "query");
    require(out, "out");
    *out = dup_string(yr::render_canonical_sql(query->cq));
  });
}

yr_status yr_query_analyze(const yr_query* query, const yr_options* options, char** report) {
  return guarded([&] {
    require(query, "query");
    require(report, "report");
    *report = dup_string(yr::analyze_report(query->cq, pipeline_options(options)));
  });
}

yr_status yr_query_plan(const yr_query* query, const yr_options* options, char** plan_text) {
  return guarded([&] {
    require(query, "query");
    require(plan_text, "plan_text");
    *plan_text = dup_string(yr::compile(query->cq, pipeline_options(options)).plan.render());
  });
}

yr_status yr_query_rewrite(const yr_query* query, const yr_options* options, char** sql) {
  return guarded([&] {
    require(query, "query");
    require(sql, "sql");
    yr::Compiled c = yr::compile(query->cq, pipeline_options(options));
    yr::EmitOptions eo;
    if (options && options->prefix) eo.prefix = options->prefix;
    eo.with_cleanup = options && options->with_cleanup;
    std::vector<std::string> statements = yr::emit_plan(c.plan, dialect_of(options), eo);
    std::string text;
    if (options && options->script) {
      text = yr::emit_script(statements);
    } else {
      for (const auto& s : statements) text += s + "\n";
    }
    *sql = dup_string(text);
  });
}

yr_status yr_database_open(const char* dir, yr_database** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = nullptr;
    if (!std::filesystem::is_directory(dir))
      throw yr::Error(yr::ErrorCode::IoError, std::string("not a directory: ") + dir);
    auto db = std::make_unique<yr_database>();
    db->dir = dir;
    db->catalog = yr::load_catalog(dir);
    *out = db.release();
  });
}

void yr_database_free(yr_database* db) { delete db; }

yr_status yr_query_exec(const yr_query* query, const yr_database* db, const yr_options* options, yr_result** out) {
  return guarded([&] {
    require(query, "query");
    require(db, "db");
    require(out, "out");
    *out = nullptr;
    yr::Compiled c = yr::compile(query->cq, pipeline_options(options));
    yr::Database data = yr::load_database(db->dir, c.cq);
    yr::EvalOptions eo;
    eo.short_circuit = options && options->short_circuit;
    yr::PlanResult pr = yr::eval_plan(c.plan, data, eo);
    auto r = std::make_unique<yr_result>();
    r->relation = std::move(pr.result);
    r->stats = std::move(pr.stats);
    *out = r.release();
  });
}

uint64_t yr_result_row_count(const yr_result* result) { return result ? result->relation.cardinality() : 0; }

yr_status yr_result_format(const yr_result* result, yr_format format, char** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = dup_string(result->relation.to_text(format == YR_FORMAT_TSV ? "\t" : " | "));
  });
}

yr_status yr_result_stats(const yr_result* result, char** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = dup_string(result->stats.render());
  });
}

void yr_result_free(yr_result* result) { delete result; }

yr_status yr_query_compare(const yr_query* query, const yr_database* db, const yr_options* options,
                           yr_comparison** out) {
  return guarded([&] {
    require(query, "query");
    require(db, "db");
    require(out, "out");
    *out = nullptr;
    yr::Compiled c = yr::compile(query->cq, pipeline_options(options));
    yr::Database data = yr::load_database(db->dir, c.cq);
    yr::EvalOptions eo;
    eo.short_circuit = options && options->short_circuit;
    auto cmp = std::make_unique<yr_comparison>();
    cmp->cmp = yr::compare(c, data, eo);
    *out = cmp.release();
  });
}

int yr_comparison_equal(const yr_comparison* cmp) { return cmp && cmp->cmp.equal ? 1 : 0; }

uint64_t yr_comparison_naive_max_intermediate(const yr_comparison* cmp) {
  return cmp ? cmp->cmp.naive_stats.max_intermediate() : 0;
}

uint64_t yr_comparison_plan_max_intermediate(const yr_comparison* cmp) {
  return cmp ? cmp->cmp.plan_stats.max_intermediate() : 0;
}

yr_status yr_comparison_report(const yr_comparison* cmp, char** out) {
  return guarded([&] {
    require(cmp, "cmp");
    require(out, "out");
    *out = dup_string(cmp->cmp.render());
  });
}

void yr_comparison_free(yr_comparison* cmp) { delete cmp; }

yr_status yr_query_ghd_search(const yr_query* query, int width, size_t limit, uint64_t seed, char** json,
                              size_t* found) {
  return guarded([&] {
    require(query, "query");
    require(json, "json");
    const yr::Hypergraph h = yr::build_hypergraph(query->cq);
    std::vector<yr::GHDecomposition> ghds;
    if (limit <= 1) {
      if (auto g = yr::find_ghd(h, width, seed)) ghds.push_back(std::move(*g));
    } else {
      ghds = yr::enumerate_ghds(h, width, limit, seed);
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& g : ghds) arr.push_back(nlohmann::ordered_json::parse(yr::write_ghd(g)));
    *json = dup_string(arr.dump(2) + "\n");
    if (found) *found = ghds.size();
  });
}

yr_status yr_query_ghd_validate(const yr_query* query, const char* ghd_json, int* valid) {
  return guarded([&] {
    require(query, "query");
    require(ghd_json, "ghd_json");
    require(valid, "valid");
    *valid = yr::validate_ghd(yr::build_hypergraph(query->cq), yr::read_ghd(ghd_json)) ? 1 : 0;
  });
}

}  // extern "C"
