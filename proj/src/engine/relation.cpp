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

#include "engine/relation.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "common/error.hpp"

namespace yr {

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& v : t) {
    std::size_t x = std::visit(
        [](const auto& x) -> std::size_t {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            return 0x51ed27;
          } else {
            return std::hash<T>{}(x);
          }
        },
        v);
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Relation Relation::unit() {
  Relation r;
  r.add({});
  return r;
}

void Relation::add(Tuple t, std::uint64_t count) {
  if (t.size() != schema_.size())
    throw Error(ErrorCode::ArityMismatch, "tuple of width " + std::to_string(t.size()) + " for schema of width " +
                                              std::to_string(schema_.size()));
  if (count == 0) return;
  rows_[std::move(t)] += count;
  cardinality_ += count;
}

std::uint64_t Relation::count(const Tuple& t) const {
  auto it = rows_.find(t);
  return it == rows_.end() ? 0 : it->second;
}

std::optional<std::size_t> Relation::column(const std::string& name) const {
  auto it = std::find(schema_.begin(), schema_.end(), name);
  if (it == schema_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - schema_.begin());
}

std::size_t Relation::column_at(const std::string& name) const {
  auto c = column(name);
  if (!c) throw Error(ErrorCode::UnknownAttribute, "unknown attribute " + name);
  return *c;
}

std::vector<std::pair<Tuple, std::uint64_t>> Relation::sorted_rows() const {
  std::vector<std::pair<Tuple, std::uint64_t>> out(rows_.begin(), rows_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string Relation::to_text(std::string_view sep) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < schema_.size(); ++i) out << (i ? sep : "") << schema_[i];
  out << '\n';
  for (const auto& [t, n] : sorted_rows())
    for (std::uint64_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? sep : "") << value_to_string(t[i]);
      out << '\n';
    }
  return out.str();
}

namespace {

struct CsvField {
  std::string text;
  bool quoted = false;
};

/// RFC-4180 style: fields split on commas, double quotes escape.
std::vector<std::vector<CsvField>> split_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<CsvField>> lines;
  std::vector<CsvField> line;
  CsvField field;
  bool in_quotes = false;
  bool line_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.text += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      field.quoted = true;
      line_has_content = true;
    } else if (c == ',') {
      line.push_back(std::move(field));
      field = CsvField{};
      line_has_content = true;
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      line.push_back(std::move(field));
      field = CsvField{};
      lines.push_back(std::move(line));
      line.clear();
      line_has_content = false;
    } else {
      field.text += c;
      line_has_content = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::IoError, source + ": unterminated quoted field");
  if (line_has_content || !field.text.empty()) {
    line.push_back(std::move(field));
    lines.push_back(std::move(line));
  }
  return lines;
}

bool is_integer(const std::string& s) {
  std::size_t start = s.size() > 1 && s[0] == '-' ? 1 : 0;
  if (start == s.size() || s.size() - start > 18) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

Value to_value(const CsvField& f) {
  if (f.quoted) return f.text;
  if (f.text.empty()) return std::monostate{};
  if (is_integer(f.text)) return static_cast<std::int64_t>(std::stoll(f.text));
  return f.text;
}

}  // namespace

Relation parse_csv(std::string_view text, const std::optional<std::vector<std::string>>& declared,
                   const std::string& source) {
  auto lines = split_csv(text, source);
  if (lines.empty()) throw Error(ErrorCode::IoError, source + ": missing header row");
  std::vector<std::string> header;
  for (const auto& f : lines.front()) {
    std::string name = f.text;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    header.push_back(std::move(name));
  }
  if (declared && *declared != header)
    throw Error(ErrorCode::SchemaMismatch, source + ": header does not match the declared schema");
  Relation rel(header);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& fields = lines[i];
    // A blank line is a single NULL for one-column files and noise otherwise.
    if (header.size() > 1 && fields.size() == 1 && fields[0].text.empty() && !fields[0].quoted) continue;
    if (fields.size() != header.size())
      throw Error(ErrorCode::ArityMismatch, source + ": line " + std::to_string(i + 1) + " has " +
                                                std::to_string(fields.size()) + " fields, header has " +
                                                std::to_string(header.size()));
    Tuple t;
    t.reserve(fields.size());
    for (const auto& f : fields) t.push_back(to_value(f));
    rel.add(std::move(t));
  }
  return rel;
}

Relation load_csv(const std::string& path, const std::optional<std::vector<std::string>>& declared) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), declared, path);
}

Database load_database(const std::string& dir, const ConjunctiveQuery& cq) {
  Database db;
  for (const auto& atom : cq.atoms) {
    if (db.count(atom.relation)) continue;
    std::filesystem::path p = std::filesystem::path(dir) / (atom.relation + ".csv");
    if (!std::filesystem::exists(p))
      throw Error(ErrorCode::MissingRelation, "no data for relation " + atom.relation + " (" + p.string() + ")");
    db.emplace(atom.relation, load_csv(p.string()));
  }
  return db;
}

Catalog load_catalog(const std::string& dir) {
  Catalog catalog;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() != ".csv") continue;
    std::ifstream in(entry.path());
    std::string header;
    std::getline(in, header);
    auto lines = split_csv(header, entry.path().string());
    std::vector<std::string> cols;
    if (!lines.empty())
      for (const auto& f : lines.front()) {
        std::string name = f.text;
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        cols.push_back(std::move(name));
      }
    catalog[entry.path().stem().string()] = std::move(cols);
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir + ": " + ec.message());
  return catalog;
}

namespace {

bool any_null(const Tuple& t, const std::vector<std::size_t>& cols) {
  for (auto c : cols)
    if (is_null(t[c])) return true;
  return false;
}

Tuple pick(const Tuple& t, const std::vector<std::size_t>& cols) {
  Tuple out;
  out.reserve(cols.size());
  for (auto c : cols) out.push_back(t[c]);
  return out;
}

}  // namespace

Relation semi_join(const Relation& l, const Relation& r,
                   const std::vector<std::pair<std::string, std::string>>& keys) {
  Relation out(l.schema());
  std::vector<std::size_t> lc;
  std::vector<std::size_t> rc;
  for (const auto& [a, b] : keys) {
    lc.push_back(l.column_at(a));
    rc.push_back(r.column_at(b));
  }
  if (keys.empty()) {
    if (!r.empty())
      for (const auto& [t, n] : l.rows()) out.add(t, n);
    return out;
  }
  std::unordered_map<Tuple, bool, TupleHash> present;
  for (const auto& [t, n] : r.rows())
    if (!any_null(t, rc)) present.emplace(pick(t, rc), true);
  for (const auto& [t, n] : l.rows())
    if (!any_null(t, lc) && present.count(pick(t, lc))) out.add(t, n);
  return out;
}

Relation natural_join(const Relation& l, const Relation& r) {
  std::vector<std::size_t> lc;
  std::vector<std::size_t> rc;
  std::vector<std::size_t> r_extra;
  std::vector<std::string> schema = l.schema();
  for (std::size_t j = 0; j < r.arity(); ++j) {
    if (auto i = l.column(r.schema()[j])) {
      lc.push_back(*i);
      rc.push_back(j);
    } else {
      r_extra.push_back(j);
      schema.push_back(r.schema()[j]);
    }
  }
  Relation out(std::move(schema));
  std::unordered_map<Tuple, std::vector<std::pair<const Tuple*, std::uint64_t>>, TupleHash> index;
  for (const auto& [t, n] : r.rows())
    if (!any_null(t, rc)) index[pick(t, rc)].emplace_back(&t, n);
  for (const auto& [t, n] : l.rows()) {
    if (any_null(t, lc)) continue;
    auto it = index.find(pick(t, lc));
    if (it == index.end()) continue;
    for (const auto& [rt, m] : it->second) {
      Tuple joined = t;
      for (auto j : r_extra) joined.push_back((*rt)[j]);
      out.add(std::move(joined), n * m);
    }
  }
  return out;
}

Relation project(const Relation& rel, const std::vector<std::string>& attrs, bool distinct) {
  std::vector<std::size_t> cols;
  for (const auto& a : attrs) cols.push_back(rel.column_at(a));
  Relation out(attrs);
  for (const auto& [t, n] : rel.rows()) {
    Tuple p = pick(t, cols);
    if (distinct) {
      if (!out.count(p)) out.add(std::move(p), 1);
    } else {
      out.add(std::move(p), n);
    }
  }
  return out;
}

namespace {

std::string format_avg(__int128 sum, std::int64_t count) {
  // Round half away from zero at the sixth decimal.
  const bool negative = sum < 0;
  unsigned __int128 mag = static_cast<unsigned __int128>(negative ? -sum : sum);
  unsigned __int128 scaled = mag * 1000000;
  unsigned __int128 q = scaled / static_cast<unsigned __int128>(count);
  unsigned __int128 rem = scaled % static_cast<unsigned __int128>(count);
  if (rem * 2 >= static_cast<unsigned __int128>(count)) ++q;
  auto to_string = [](unsigned __int128 v) {
    if (v == 0) return std::string("0");
    std::string s;
    while (v > 0) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return s;
  };
  std::string whole = to_string(q / 1000000);
  std::string frac = to_string(q % 1000000);
  frac.insert(frac.begin(), 6 - frac.size(), '0');
  return std::string(negative && q != 0 ? "-" : "") + whole + "." + frac;
}

class Accumulator {
 public:
  explicit Accumulator(const AggregateSpec& spec) : spec_(spec) {}

  void add(const Value& v, std::uint64_t n) {
    if (is_null(v)) return;
    if (spec_.distinct) {
      if (!seen_.insert(v).second) return;
      n = 1;
    }
    switch (spec_.func) {
      case AggFunc::Min:
      case AggFunc::Max: {
        if (is_null(best_)) {
          best_ = v;
          break;
        }
        if (best_.index() != v.index())
          throw Error(ErrorCode::TypeError, agg_func_name(spec_.func) + " over mixed integer and string values");
        const bool less = v < best_;
        if ((spec_.func == AggFunc::Min) == less && v != best_) best_ = v;
        break;
      }
      case AggFunc::Sum:
      case AggFunc::Avg:
        if (!is_int(v)) throw Error(ErrorCode::TypeError, agg_func_name(spec_.func) + " over a string value");
        sum_ += static_cast<__int128>(std::get<std::int64_t>(v)) * static_cast<__int128>(n);
        count_ += n;
        break;
      case AggFunc::Count: count_ += n; break;
    }
  }

  Value result() const {
    switch (spec_.func) {
      case AggFunc::Min:
      case AggFunc::Max: return best_;
      case AggFunc::Count: return static_cast<std::int64_t>(count_);
      case AggFunc::Sum:
        if (count_ == 0) return std::monostate{};
        if (sum_ > INT64_MAX || sum_ < INT64_MIN) throw Error(ErrorCode::TypeError, "SUM overflows 64 bits");
        return static_cast<std::int64_t>(sum_);
      case AggFunc::Avg:
        if (count_ == 0) return std::monostate{};
        return format_avg(sum_, static_cast<std::int64_t>(count_));
    }
    return std::monostate{};
  }

 private:
  AggregateSpec spec_;
  Value best_;
  __int128 sum_ = 0;
  std::uint64_t count_ = 0;
  std::set<Value> seen_;
};

}  // namespace

Relation aggregate(const Relation& rel, const std::vector<std::string>& grouping,
                   const std::vector<AggregateSpec>& aggs, bool distinct_input) {
  std::vector<std::size_t> gcols;
  for (const auto& g : grouping) gcols.push_back(rel.column_at(g));
  std::vector<std::size_t> acols;
  for (const auto& a : aggs) acols.push_back(rel.column_at(a.input));

  std::vector<std::string> schema = grouping;
  for (const auto& a : aggs) schema.push_back(a.output);
  Relation out(std::move(schema));

  // Ordered map so evaluation order (and hence any error) is deterministic.
  std::map<Tuple, std::vector<Accumulator>> groups;
  for (const auto& [t, n] : rel.sorted_rows()) {
    Tuple key = pick(t, gcols);
    auto it = groups.find(key);
    if (it == groups.end()) {
      std::vector<Accumulator> accs;
      for (const auto& a : aggs) accs.emplace_back(a);
      it = groups.emplace(std::move(key), std::move(accs)).first;
    }
    for (std::size_t i = 0; i < aggs.size(); ++i) it->second[i].add(t[acols[i]], distinct_input ? 1 : n);
  }
  if (groups.empty() && grouping.empty()) {
    std::vector<Accumulator> accs;
    for (const auto& a : aggs) accs.emplace_back(a);
    groups.emplace(Tuple{}, std::move(accs));
  }
  for (const auto& [key, accs] : groups) {
    Tuple row = key;
    for (const auto& a : accs) row.push_back(a.result());
    out.add(std::move(row));
  }
  return out;
}

Relation finalize(const Relation& rel, const std::vector<std::string>& projection, bool distinct_input,
                  const OutputSpec& spec) {
  Relation input = project(rel, projection, distinct_input);
  if (spec.boolean) {
    Relation out(spec.column_names());
    if (!input.empty()) out.add({Value{spec.literal}});
    return out;
  }
  Relation shaped = input;
  if (spec.aggregated) {
    shaped = aggregate(input, spec.grouping, spec.aggregates);
    if (spec.having) {
      Relation kept(shaped.schema());
      const std::size_t c = shaped.column_at(spec.having->column);
      for (const auto& [t, n] : shaped.rows())
        if (compare_values(t[c], spec.having->cmp, spec.having->constant)) kept.add(t, n);
      shaped = std::move(kept);
    }
  }
  std::vector<std::size_t> cols;
  for (const auto& [name, source] : spec.columns) cols.push_back(shaped.column_at(source));
  Relation out(spec.column_names());
  for (const auto& [t, n] : shaped.rows()) {
    Tuple p = pick(t, cols);
    if (spec.distinct) {
      if (!out.count(p)) out.add(std::move(p));
    } else {
      out.add(std::move(p), n);
    }
  }
  return out;
}

bool bag_equal(const Relation& a, const Relation& b) {
  if (a.arity() != b.arity()) return false;
  std::vector<std::string> sa = a.schema();
  std::vector<std::string> sb = b.schema();
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb || std::adjacent_find(sa.begin(), sa.end()) != sa.end()) return false;
  if (a.cardinality() != b.cardinality() || a.distinct_count() != b.distinct_count()) return false;
  Relation reordered = project(b, a.schema());
  for (const auto& [t, n] : a.rows())
    if (reordered.count(t) != n) return false;
  return true;
}

}  // namespace yr
