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

#include <cstdint>
#include <string>
#include <variant>

namespace yr {

/// A single cell: SQL NULL, a 64-bit integer or a string. The variant order
/// gives a total order (null < integers < strings) used for deterministic
/// output; it is not SQL comparison semantics, see `compare_values`.
using Value = std::variant<std::monostate, std::int64_t, std::string>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
inline bool is_int(const Value& v) { return std::holds_alternative<std::int64_t>(v); }
inline bool is_string(const Value& v) { return std::holds_alternative<std::string>(v); }

enum class Comparator { Eq, Ne, Lt, Le, Gt, Ge };

std::string comparator_symbol(Comparator c);

/// SQL-style predicate evaluation: NULL never satisfies anything and values
/// of different types never compare true.
bool compare_values(const Value& lhs, Comparator cmp, const Value& rhs);

/// Plain rendering for result output ("NULL" for null).
std::string value_to_string(const Value& v);

/// Rendering as a SQL literal ('it''s' for strings).
std::string value_to_sql(const Value& v);

}  // namespace yr
