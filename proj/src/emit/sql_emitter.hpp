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
#include <string>
#include <vector>

#include "plan/stage_plan.hpp"

namespace yr {

enum class DialectName { Postgres, DuckDB, Spark, Generic };
enum class TempObject { TempTable, TempView };
enum class SemijoinStyle { RowIn, Exists };

struct Dialect {
  DialectName name = DialectName::Postgres;
  TempObject temp_object = TempObject::TempTable;
  SemijoinStyle semijoin_style = SemijoinStyle::Exists;
  /// A forced style is never replaced by a fallback; unsupported renderings
  /// throw UnsupportedInDialect instead.
  bool style_forced = false;
};

/// Spark always gets TempView. `style` defaults to Exists.
Dialect make_dialect(DialectName name, std::optional<SemijoinStyle> style = std::nullopt, bool forced = false);
DialectName parse_dialect_name(const std::string& text);  // throws InvalidArgument
std::string dialect_name(DialectName d);
SemijoinStyle parse_semijoin_style(const std::string& text);  // "rowin" | "exists"

struct EmitOptions {
  std::string prefix;        // prepended to every created object
  bool with_cleanup = false;  // DROP statements after the final SELECT
};

/// One SQL string per plan statement, the last being the final SELECT,
/// followed by DROP statements when requested. No trailing semicolons.
std::vector<std::string> emit_plan(const StagePlan& plan, const Dialect& d, const EmitOptions& options = {});

/// `;`-terminated statements, one per line.
std::string emit_script(const std::vector<std::string>& statements);

}  // namespace yr
