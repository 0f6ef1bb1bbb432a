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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common/value.hpp"
#include "frontend/conjunctive_query.hpp"

namespace yr {

using Tuple = std::vector<Value>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept;
};

/// Multiset of tuples over an ordered schema, stored as tuple -> count.
class Relation {
 public:
  using Rows = std::unordered_map<Tuple, std::uint64_t, TupleHash>;

  Relation() = default;
  explicit Relation(std::vector<std::string> schema) : schema_(std::move(schema)) {}

  /// Zero columns, one empty tuple: the identity of natural_join.
  static Relation unit();

  const std::vector<std::string>& schema() const { return schema_; }
  std::size_t arity() const { return schema_.size(); }
  const Rows& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  /// Tuples counted with multiplicity.
  std::uint64_t cardinality() const { return cardinality_; }
  std::size_t distinct_count() const { return rows_.size(); }

  /// Throws ArityMismatch for a tuple of the wrong width.
  void add(Tuple t, std::uint64_t count = 1);
  std::uint64_t count(const Tuple& t) const;

  std::optional<std::size_t> column(const std::string& name) const;
  /// Like column() but throws UnknownAttribute.
  std::size_t column_at(const std::string& name) const;

  /// Rows in the value order of `Value`, for deterministic output.
  std::vector<std::pair<Tuple, std::uint64_t>> sorted_rows() const;

  /// Header plus one line per tuple occurrence; `sep` between cells.
  std::string to_text(std::string_view sep = " | ") const;

 private:
  std::vector<std::string> schema_;
  Rows rows_;
  std::uint64_t cardinality_ = 0;
};

using Database = std::map<std::string, Relation>;

/// CSV with a header row. Unquoted integers (optional leading '-') become
/// integers, an unquoted empty field is NULL, everything else is a string.
/// Throws ArityMismatch, SchemaMismatch (header vs `declared`).
Relation parse_csv(std::string_view text, const std::optional<std::vector<std::string>>& declared = std::nullopt,
                   const std::string& source = "<csv>");
/// Throws IoError when the file cannot be read.
Relation load_csv(const std::string& path, const std::optional<std::vector<std::string>>& declared = std::nullopt);

/// `<dir>/<relation>.csv` for every relation the query reads. Throws
/// MissingRelation when a file is absent.
Database load_database(const std::string& dir, const ConjunctiveQuery& cq);

/// Header names of every `<dir>/*.csv`, used to resolve unqualified columns.
Catalog load_catalog(const std::string& dir);

/// Keeps l-tuples with at least one r-tuple agreeing on every (l, r) key
/// pair; multiplicities of l are kept. NULL keys never match. Without keys
/// the result is l if r is nonempty, else empty. Throws UnknownAttribute.
Relation semi_join(const Relation& l, const Relation& r,
                   const std::vector<std::pair<std::string, std::string>>& keys);

/// Bag join on equally named columns; l's columns first, then r's new ones.
Relation natural_join(const Relation& l, const Relation& r);

/// Bag projection (duplicates kept unless `distinct`). Throws UnknownAttribute.
Relation project(const Relation& rel, const std::vector<std::string>& attrs, bool distinct = false);

/// Group-by with MIN/MAX/SUM/COUNT/AVG skipping NULLs. Output schema is the
/// grouping columns followed by each aggregate's output name. With no
/// grouping columns an empty input still yields one row (NULLs, COUNT 0).
/// AVG is an exact quotient rendered with 6 decimals. Throws TypeError.
Relation aggregate(const Relation& rel, const std::vector<std::string>& grouping,
                   const std::vector<AggregateSpec>& aggs, bool distinct_input = false);

/// The final stage shared by the naive and the staged evaluator: project to
/// `projection` (optionally duplicate free), then aggregate / HAVING /
/// output projection / DISTINCT as `spec` describes.
Relation finalize(const Relation& rel, const std::vector<std::string>& projection, bool distinct_input,
                  const OutputSpec& spec);

/// Same schema up to column order and identical multisets.
bool bag_equal(const Relation& a, const Relation& b);

}  // namespace yr
