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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "common/value.hpp"

namespace yr {

enum class AggFunc { Min, Max, Sum, Count, Avg };

std::string agg_func_name(AggFunc f);  // upper case, e.g. "MIN"

struct ColumnRef {
  std::string qualifier;  // empty when unqualified
  std::string column;
  std::size_t position = 0;

  std::string to_string() const { return qualifier.empty() ? column : qualifier + "." + column; }
};

struct AggregateCall {
  AggFunc func = AggFunc::Min;
  bool distinct = false;
  ColumnRef argument;
};

struct SelectItem {
  enum class Kind { Column, Aggregate, Literal };
  Kind kind = Kind::Column;
  ColumnRef column;         // Kind::Column
  AggregateCall aggregate;  // Kind::Aggregate
  std::int64_t literal = 0; // Kind::Literal
  std::optional<std::string> alias;
};

struct FromItem {
  std::string table;
  std::optional<std::string> alias;
};

/// One WHERE/ON conjunct: column op (column | constant). Column-to-column
/// conjuncts are always equalities; the parser rejects anything else.
struct WhereConjunct {
  ColumnRef left;
  Comparator cmp = Comparator::Eq;
  std::variant<ColumnRef, Value> right;

  bool is_join() const { return std::holds_alternative<ColumnRef>(right); }
};

struct HavingClause {
  AggregateCall aggregate;
  Comparator cmp = Comparator::Eq;
  Value constant;
};

struct ParsedQuery {
  bool distinct = false;
  std::vector<SelectItem> select_items;
  std::vector<FromItem> from_items;
  std::vector<WhereConjunct> where_conjuncts;
  std::vector<ColumnRef> group_by;
  std::optional<HavingClause> having;
};

/// Parses one statement of the supported fragment: SELECT [DISTINCT] over
/// columns, MIN/MAX/SUM/COUNT/AVG([DISTINCT] col) or a literal; FROM with
/// commas or INNER JOIN ... ON; WHERE conjunctions of column equalities and
/// column-vs-constant comparisons; GROUP BY; HAVING agg op constant.
/// Unquoted identifiers are folded to lower case.
ParsedQuery parse_query(std::string_view sql_text);

}  // namespace yr
