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

#include "common/value.hpp"

namespace yr {

std::string comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::Eq: return "=";
    case Comparator::Ne: return "<>";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
  }
  return "?";
}

bool compare_values(const Value& lhs, Comparator cmp, const Value& rhs) {
  if (is_null(lhs) || is_null(rhs) || lhs.index() != rhs.index()) return false;
  switch (cmp) {
    case Comparator::Eq: return lhs == rhs;
    case Comparator::Ne: return lhs != rhs;
    case Comparator::Lt: return lhs < rhs;
    case Comparator::Le: return lhs <= rhs;
    case Comparator::Gt: return lhs > rhs;
    case Comparator::Ge: return lhs >= rhs;
  }
  return false;
}

std::string value_to_string(const Value& v) {
  if (is_null(v)) return "NULL";
  if (is_int(v)) return std::to_string(std::get<std::int64_t>(v));
  return std::get<std::string>(v);
}

std::string value_to_sql(const Value& v) {
  if (is_null(v)) return "NULL";
  if (is_int(v)) return std::to_string(std::get<std::int64_t>(v));
  std::string out = "'";
  for (char c : std::get<std::string>(v)) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

}  // namespace yr
