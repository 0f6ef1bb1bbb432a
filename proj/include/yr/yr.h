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

/* C interface to the yr query rewriter.
 *
 * All objects are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Strings returned through `char**` out
 * parameters are released with yr_string_free. Every call returns a status;
 * on failure yr_last_error() describes the problem for the calling thread.
 */
#ifndef YR_YR_H
#define YR_YR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define YR_API __declspec(dllexport)
#else
#define YR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum yr_status {
  YR_OK = 0,
  YR_ERR_SYNTAX,
  YR_ERR_UNSUPPORTED,
  YR_ERR_AMBIGUOUS_COLUMN,
  YR_ERR_INVALID_QUERY,
  YR_ERR_DISCONNECTED,
  YR_ERR_TOO_LARGE,
  YR_ERR_NO_JOIN_TREE,
  YR_ERR_INVALID_GHD,
  YR_ERR_GUARD_NOT_IN_TREE,
  YR_ERR_MODE_MISMATCH,
  YR_ERR_EMPTY_TREE,
  YR_ERR_UNSUPPORTED_IN_DIALECT,
  YR_ERR_IO,
  YR_ERR_ARITY_MISMATCH,
  YR_ERR_SCHEMA_MISMATCH,
  YR_ERR_UNKNOWN_ATTRIBUTE,
  YR_ERR_TYPE,
  YR_ERR_MISSING_RELATION,
  YR_ERR_PLAN_REFERENCE,
  YR_ERR_INVALID_ARGUMENT,
  YR_ERR_INTERNAL
} yr_status;

typedef enum yr_mode { YR_MODE_AUTO = 0, YR_MODE_FULL, YR_MODE_ZEROMA, YR_MODE_PARTIAL } yr_mode;

typedef enum yr_dialect { YR_DIALECT_POSTGRES = 0, YR_DIALECT_DUCKDB, YR_DIALECT_SPARK, YR_DIALECT_GENERIC } yr_dialect;

typedef enum yr_semijoin_style { YR_SEMIJOIN_EXISTS = 0, YR_SEMIJOIN_ROW_IN } yr_semijoin_style;

typedef enum yr_format { YR_FORMAT_TEXT = 0, YR_FORMAT_TSV } yr_format;

typedef struct yr_options {
  yr_mode mode;
  size_t join_group_cap;   /* default 12 */
  int join_attrs_only;     /* one output column per equi-join class */
  const char* guard;       /* NULL: first guard in label order */
  int ghd_width;           /* cyclic queries: search up to this width, 0 = off */
  const char* ghd_json;    /* cyclic queries: use this decomposition */
  uint64_t seed;
  yr_dialect dialect;
  yr_semijoin_style semijoin_style;
  int force_semijoin_style; /* fail instead of falling back to EXISTS */
  const char* prefix;       /* prepended to created objects */
  int with_cleanup;         /* append DROP statements */
  int script;               /* ';'-terminated statements instead of one per line */
  int short_circuit;        /* exec: stop after the up pass on an empty root */
} yr_options;

typedef struct yr_query yr_query;
typedef struct yr_database yr_database;
typedef struct yr_result yr_result;
typedef struct yr_comparison yr_comparison;

YR_API void yr_options_init(yr_options* options);

/* Message of the last failed call on this thread ("" if none). */
YR_API const char* yr_last_error(void);
YR_API const char* yr_status_name(yr_status status);
YR_API void yr_string_free(char* s);

/* `catalog` may be NULL; when given, its CSV headers resolve unqualified
 * column names. */
YR_API yr_status yr_query_parse(const char* sql, const yr_database* catalog, yr_query** out);
YR_API void yr_query_free(yr_query* query);

/* Canonical SQL text of the extracted conjunctive query. */
YR_API yr_status yr_query_canonical_sql(const yr_query* query, char** out);

YR_API yr_status yr_query_analyze(const yr_query* query, const yr_options* options, char** report);
YR_API yr_status yr_query_plan(const yr_query* query, const yr_options* options, char** plan_text);
YR_API yr_status yr_query_rewrite(const yr_query* query, const yr_options* options, char** sql);

/* Directory of `<relation>.csv` files. Relations are loaded when a query
 * runs. */
YR_API yr_status yr_database_open(const char* dir, yr_database** out);
YR_API void yr_database_free(yr_database* db);

YR_API yr_status yr_query_exec(const yr_query* query, const yr_database* db, const yr_options* options,
                               yr_result** out);
YR_API uint64_t yr_result_row_count(const yr_result* result);
YR_API yr_status yr_result_format(const yr_result* result, yr_format format, char** out);
/* `statement, rows, micros` per line. */
YR_API yr_status yr_result_stats(const yr_result* result, char** out);
YR_API void yr_result_free(yr_result* result);

/* Runs the naive evaluation and the plan on the same data. */
YR_API yr_status yr_query_compare(const yr_query* query, const yr_database* db, const yr_options* options,
                                  yr_comparison** out);
YR_API int yr_comparison_equal(const yr_comparison* cmp);
YR_API uint64_t yr_comparison_naive_max_intermediate(const yr_comparison* cmp);
YR_API uint64_t yr_comparison_plan_max_intermediate(const yr_comparison* cmp);
YR_API yr_status yr_comparison_report(const yr_comparison* cmp, char** out);
YR_API void yr_comparison_free(yr_comparison* cmp);

/* Up to `limit` decompositions of width <= `width` as a JSON array (empty
 * when none exists); `limit` 1 returns the smallest-width one. */
YR_API yr_status yr_query_ghd_search(const yr_query* query, int width, size_t limit, uint64_t seed, char** json,
                                     size_t* found);
YR_API yr_status yr_query_ghd_validate(const yr_query* query, const char* ghd_json, int* valid);

#ifdef __cplusplus
}
#endif

#endif /* YR_YR_H */
