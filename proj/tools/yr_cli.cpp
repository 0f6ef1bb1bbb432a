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

// yr: rewrite SQL join queries into staged semi-join programs.
//
//   yr analyze  query.sql
//   yr rewrite  query.sql --dialect duckdb --semijoin-style rowin
//   yr exec     query.sql --db data/ --stats
//   yr compare  query.sql --db data/
//   yr ghd      query.sql --width 2 --enumerate 8
//
// Exit status: 0 success, 1 verification failure or negative answer, 2 bad
// input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "yr/yr.h"

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

struct Config {
  std::string sql_path;
  std::string db_dir;
  std::string dialect = "postgres";
  std::string mode = "auto";
  std::size_t join_group_cap = 12;
  std::string semijoin_style = "exists";
  bool force_style = false;
  std::string prefix;
  std::string guard;
  bool join_attrs_only = false;
  bool short_circuit = false;
  bool with_cleanup = false;
  bool script = false;
  bool stats = false;
  bool plan = false;
  std::string format = "text";
  int width = 0;
  std::string ghd_path;
  std::size_t enumerate = 0;
  std::uint64_t seed = 0;
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(path + ": cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { yr_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void check(yr_status s, const std::string& context) {
  if (s != YR_OK) throw CliError(context + ": " + yr_status_name(s) + ": " + yr_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};

using Query = Handle<yr_query, yr_query_free>;
using Db = Handle<yr_database, yr_database_free>;
using Result = Handle<yr_result, yr_result_free>;
using Comparison = Handle<yr_comparison, yr_comparison_free>;

class Runner {
 public:
  explicit Runner(const Config& c) : c_(c) {}

  int analyze() {
    load();
    LibString report;
    check(yr_query_analyze(q_.p, &opts_, &report.p), c_.sql_path);
    std::cout << report.str();
    return kOk;
  }

  int rewrite() {
    load();
    LibString out;
    if (c_.plan)
      check(yr_query_plan(q_.p, &opts_, &out.p), c_.sql_path);
    else
      check(yr_query_rewrite(q_.p, &opts_, &out.p), c_.sql_path);
    std::cout << out.str();
    return kOk;
  }

  int exec() {
    load();
    Result r;
    check(yr_query_exec(q_.p, db_.p, &opts_, &r.p), c_.sql_path);
    LibString text;
    check(yr_result_format(r.p, c_.format == "tsv" ? YR_FORMAT_TSV : YR_FORMAT_TEXT, &text.p), c_.sql_path);
    std::cout << text.str();
    if (c_.stats) {
      LibString stats;
      check(yr_result_stats(r.p, &stats.p), c_.sql_path);
      std::cerr << "statement, rows, micros\n" << stats.str();
    }
    return kOk;
  }

  int compare() {
    load();
    Comparison cmp;
    check(yr_query_compare(q_.p, db_.p, &opts_, &cmp.p), c_.sql_path);
    LibString report;
    check(yr_comparison_report(cmp.p, &report.p), c_.sql_path);
    std::cout << report.str();
    return yr_comparison_equal(cmp.p) ? kOk : kNegative;
  }

  int ghd() {
    load();
    if (!c_.ghd_path.empty()) {
      const std::string doc = read_file(c_.ghd_path);
      int valid = 0;
      check(yr_query_ghd_validate(q_.p, doc.c_str(), &valid), c_.ghd_path);
      std::cout << (valid ? "valid" : "invalid") << " decomposition\n";
      return valid ? kOk : kNegative;
    }
    LibString json;
    std::size_t found = 0;
    check(yr_query_ghd_search(q_.p, c_.width, c_.enumerate == 0 ? 1 : c_.enumerate, c_.seed, &json.p, &found),
          c_.sql_path);
    if (found == 0) {
      std::cout << "no decomposition of width " << c_.width << "\n";
      return kNegative;
    }
    std::cout << json.str();
    return kOk;
  }

 private:
  void load() {
    yr_options_init(&opts_);
    if (c_.mode == "auto") opts_.mode = YR_MODE_AUTO;
    else if (c_.mode == "full") opts_.mode = YR_MODE_FULL;
    else if (c_.mode == "0ma") opts_.mode = YR_MODE_ZEROMA;
    else if (c_.mode == "partial") opts_.mode = YR_MODE_PARTIAL;
    if (c_.dialect == "postgres") opts_.dialect = YR_DIALECT_POSTGRES;
    else if (c_.dialect == "duckdb") opts_.dialect = YR_DIALECT_DUCKDB;
    else if (c_.dialect == "spark") opts_.dialect = YR_DIALECT_SPARK;
    else opts_.dialect = YR_DIALECT_GENERIC;
    opts_.semijoin_style = c_.semijoin_style == "rowin" ? YR_SEMIJOIN_ROW_IN : YR_SEMIJOIN_EXISTS;
    opts_.force_semijoin_style = c_.force_style;
    opts_.join_group_cap = c_.join_group_cap;
    opts_.join_attrs_only = c_.join_attrs_only;
    opts_.guard = c_.guard.empty() ? nullptr : c_.guard.c_str();
    opts_.prefix = c_.prefix.c_str();
    opts_.with_cleanup = c_.with_cleanup;
    opts_.script = c_.script;
    opts_.short_circuit = c_.short_circuit;
    opts_.seed = c_.seed;
    opts_.ghd_width = c_.width;
    if (!c_.ghd_path.empty()) {
      ghd_doc_ = read_file(c_.ghd_path);
      opts_.ghd_json = ghd_doc_.c_str();
    }
    if (!c_.db_dir.empty()) check(yr_database_open(c_.db_dir.c_str(), &db_.p), c_.db_dir);
    const std::string sql = read_file(c_.sql_path);
    check(yr_query_parse(sql.c_str(), db_.p, &q_.p), c_.sql_path);
  }

  const Config& c_;
  yr_options opts_{};
  std::string ghd_doc_;
  Db db_;
  Query q_;
};

void add_query_options(CLI::App* cmd, Config& c) {
  cmd->add_option("query", c.sql_path, "SQL file, '-' for stdin")->required();
  cmd->add_option("--mode", c.mode, "auto, full, 0ma or partial")
      ->check(CLI::IsMember({"auto", "full", "0ma", "partial"}));
  cmd->add_option("--join-group-cap", c.join_group_cap, "maximum nodes per JOIN-stage group")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--guard", c.guard, "guard atom to root the tree at (0MA queries)");
  cmd->add_flag("--join-attrs-only", c.join_attrs_only, "project to one column per equi-join class");
  cmd->add_option("--ghd-width", c.width, "cyclic queries: search a decomposition up to this width")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--ghd-file", c.ghd_path, "cyclic queries: decomposition document (JSON)");
  cmd->add_option("--seed", c.seed, "seed for the decomposition search order");
}

void add_db_option(CLI::App* cmd, Config& c, bool required) {
  auto* opt = cmd->add_option("--db", c.db_dir, "directory with <relation>.csv files");
  if (required) opt->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged semi-join rewriting of SQL join queries"};
  app.require_subcommand(1);
  Config c;

  auto* analyze = app.add_subcommand("analyze", "hypergraph, join tree and 0MA classification");
  add_query_options(analyze, c);
  add_db_option(analyze, c, false);

  auto* rewrite = app.add_subcommand("rewrite", "emit the staged SQL statements");
  add_query_options(rewrite, c);
  add_db_option(rewrite, c, false);
  rewrite->add_option("--dialect", c.dialect, "postgres, duckdb, spark or generic")
      ->check(CLI::IsMember({"postgres", "duckdb", "spark", "generic"}));
  rewrite->add_option("--semijoin-style", c.semijoin_style, "exists or rowin")
      ->check(CLI::IsMember({"exists", "rowin"}));
  rewrite->add_flag("--force-style", c.force_style, "fail instead of falling back to EXISTS");
  rewrite->add_option("--prefix", c.prefix, "prefix for created views and tables");
  rewrite->add_flag("--with-cleanup", c.with_cleanup, "append DROP statements");
  rewrite->add_flag("--script", c.script, "';'-terminated statements");
  rewrite->add_flag("--plan", c.plan, "print the plan IR instead of SQL");

  auto* exec = app.add_subcommand("exec", "run the plan on CSV data");
  add_query_options(exec, c);
  add_db_option(exec, c, true);
  exec->add_flag("--stats", c.stats, "per-statement cardinalities on stderr");
  exec->add_flag("--short-circuit", c.short_circuit, "stop after the up pass when the root is empty");
  exec->add_option("--format", c.format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));

  auto* compare = app.add_subcommand("compare", "check the plan against naive evaluation");
  add_query_options(compare, c);
  add_db_option(compare, c, true);
  compare->add_flag("--short-circuit", c.short_circuit, "stop after the up pass when the root is empty");

  auto* ghd = app.add_subcommand("ghd", "find, enumerate or validate decompositions");
  ghd->add_option("query", c.sql_path, "SQL file, '-' for stdin")->required();
  add_db_option(ghd, c, false);
  auto* width = ghd->add_option("--width", c.width, "maximum width")->check(CLI::Range(1, 3));
  auto* file = ghd->add_option("--ghd-file", c.ghd_path, "validate this decomposition document");
  width->excludes(file);
  ghd->add_option("--enumerate", c.enumerate, "list up to N distinct decompositions");
  ghd->add_option("--seed", c.seed, "seed for the search order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }
  if (ghd->parsed() && c.width == 0 && c.ghd_path.empty()) {
    std::cerr << "yr ghd: --width or --ghd-file is required\n";
    return kInputError;
  }

  Runner runner(c);
  try {
    if (analyze->parsed()) return runner.analyze();
    if (rewrite->parsed()) return runner.rewrite();
    if (exec->parsed()) return runner.exec();
    if (compare->parsed()) return runner.compare();
    return runner.ghd();
  } catch (const CliError& e) {
    std::cerr << "yr: " << e.what() << '\n';
    return kInputError;
  }
}
