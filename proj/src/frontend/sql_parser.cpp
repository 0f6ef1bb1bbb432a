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

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "common/error.hpp"
#include "frontend/parsed_query.hpp"

namespace yr {

std::string agg_func_name(AggFunc f) {
  switch (f) {
    case AggFunc::Min: return "MIN";
    case AggFunc::Max: return "MAX";
    case AggFunc::Sum: return "SUM";
    case AggFunc::Count: return "COUNT";
    case AggFunc::Avg: return "AVG";
  }
  return "?";
}

namespace {

enum class TokenKind { Identifier, Integer, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifiers: folded unless quoted; symbols: as written
  bool quoted = false;
  std::size_t position = 0;
  std::string raw;  // as written, for error messages
};

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < sql.size()) {
    unsigned char c = static_cast<unsigned char>(sql[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < sql.size() && sql[i + 1] == '-') {
      while (i < sql.size() && sql[i] != '\n') ++i;
      continue;
    }
    Token tok;
    tok.position = i;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < sql.size() &&
             (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_' || sql[j] == '$'))
        ++j;
      tok.kind = TokenKind::Identifier;
      tok.text.reserve(j - i);
      for (std::size_t k = i; k < j; ++k)
        tok.text += static_cast<char>(std::tolower(static_cast<unsigned char>(sql[k])));
      tok.raw = std::string(sql.substr(i, j - i));
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < sql.size() && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
      if (j < sql.size() && (sql[j] == '.' || std::isalpha(static_cast<unsigned char>(sql[j]))))
        throw SyntaxError(i, std::string(sql.substr(i, j - i + 1)),
                          "only integer numeric literals are supported");
      tok.kind = TokenKind::Integer;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (c == '\'') {
      std::size_t j = i + 1;
      std::string text;
      for (;;) {
        if (j >= sql.size()) throw SyntaxError(i, "'", "unterminated string literal");
        if (sql[j] == '\'') {
          if (j + 1 < sql.size() && sql[j + 1] == '\'') {
            text += '\'';
            j += 2;
            continue;
          }
          ++j;
          break;
        }
        text += sql[j++];
      }
      tok.kind = TokenKind::String;
      tok.text = std::move(text);
      i = j;
    } else if (c == '"' || c == '`') {
      char close = static_cast<char>(c);
      std::size_t j = sql.find(close, i + 1);
      if (j == std::string_view::npos) throw SyntaxError(i, std::string(1, close), "unterminated quoted identifier");
      tok.kind = TokenKind::Identifier;
      tok.quoted = true;
      tok.text = std::string(sql.substr(i + 1, j - i - 1));
      if (tok.text.empty()) throw SyntaxError(i, "\"\"", "empty quoted identifier");
      i = j + 1;
    } else {
      static constexpr std::array<std::string_view, 4> two_char = {"<=", ">=", "<>", "!="};
      std::string_view rest = sql.substr(i);
      auto it = std::find_if(two_char.begin(), two_char.end(),
                             [&](std::string_view s) { return rest.substr(0, 2) == s; });
      if (it != two_char.end()) {
        tok.text = std::string(*it);
        i += 2;
      } else if (std::string_view("(),.;*=<>+-/%|").find(static_cast<char>(c)) != std::string_view::npos) {
        tok.text = std::string(1, static_cast<char>(c));
        ++i;
      } else {
        throw SyntaxError(i, std::string(1, static_cast<char>(c)), "unexpected character");
      }
      tok.kind = TokenKind::Symbol;
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::End;
  end.position = sql.size();
  tokens.push_back(end);
  return tokens;
}

bool is_reserved(const std::string& word) {
  static constexpr std::array<std::string_view, 38> reserved = {
      "select", "distinct", "from",   "where",   "and",       "or",     "not",   "group",
      "by",     "having",   "join",   "inner",   "left",      "right",  "full",  "outer",
      "cross",  "on",       "as",     "union",   "intersect", "except", "in",    "exists",
      "between", "like",    "is",     "null",    "order",     "limit",  "over",  "natural",
      "using",  "case",     "all",    "any",     "some",      "offset"};
  return std::find(reserved.begin(), reserved.end(), word) != reserved.end();
}

std::optional<AggFunc> aggregate_from_name(const std::string& name) {
  if (name == "min") return AggFunc::Min;
  if (name == "max") return AggFunc::Max;
  if (name == "sum") return AggFunc::Sum;
  if (name == "count") return AggFunc::Count;
  if (name == "avg") return AggFunc::Avg;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ParsedQuery parse() {
    ParsedQuery q;
    expect_keyword("select");
    if (accept_keyword("all")) {
      // SELECT ALL is the default bag semantics.
    } else if (accept_keyword("distinct")) {
      q.distinct = true;
    }
    parse_select_list(q);
    expect_keyword("from");
    parse_from_list(q);
    if (accept_keyword("where")) parse_conjunction(q.where_conjuncts);
    if (accept_keyword("group")) {
      expect_keyword("by");
      do {
        q.group_by.push_back(parse_column_ref());
      } while (accept_symbol(","));
    }
    if (accept_keyword("having")) q.having = parse_having();
    reject_trailing_clauses();
    accept_symbol(";");
    if (peek().kind != TokenKind::End) {
      if (peek().kind == TokenKind::Symbol && peek().text == ";")
        throw SyntaxError(peek().position, ";", "expected a single statement");
      fail("unexpected token");
    }
    return q;
  }

 private:
  const Token& peek(std::size_t offset = 0) const {
    return tokens_[std::min(pos_ + offset, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw SyntaxError(t.position, t.kind == TokenKind::End ? "" : t.raw.empty() ? t.text : t.raw, what);
  }

  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == TokenKind::Identifier && !t.quoted && t.text == kw;
  }
  bool accept_keyword(std::string_view kw) {
    if (is_keyword(peek(), kw)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }
  bool is_symbol(const Token& t, std::string_view s) const {
    return t.kind == TokenKind::Symbol && t.text == s;
  }
  bool accept_symbol(std::string_view s) {
    if (is_symbol(peek(), s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
  }

  std::string parse_identifier(const char* what) {
    const Token& t = peek();
    if (t.kind != TokenKind::Identifier || (!t.quoted && is_reserved(t.text)))
      fail(std::string("expected ") + what);
    ++pos_;
    return t.text;
  }

  void reject_set_operations() {
    for (auto kw : {"union", "intersect", "except"})
      if (is_keyword(peek(), kw)) throw UnsupportedFeature("UNION");
  }

  void reject_trailing_clauses() {
    reject_set_operations();
    if (is_keyword(peek(), "order")) throw UnsupportedFeature("ORDER BY");
    if (is_keyword(peek(), "limit") || is_keyword(peek(), "offset")) throw UnsupportedFeature("LIMIT");
    if (is_keyword(peek(), "or")) throw UnsupportedFeature("OR");
  }

  void reject_arithmetic() {
    const Token& t = peek();
    if (t.kind == TokenKind::Symbol &&
        (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/" || t.text == "%" || t.text == "|"))
      throw UnsupportedFeature("arithmetic expression");
  }

  ColumnRef parse_column_ref() {
    ColumnRef ref;
    ref.position = peek().position;
    std::string first = parse_identifier("column reference");
    if (accept_symbol(".")) {
      ref.qualifier = std::move(first);
      ref.column = parse_identifier("column name");
    } else {
      ref.column = std::move(first);
    }
    if (is_symbol(peek(), "(")) throw UnsupportedFeature("function call " + ref.to_string() + "()");
    return ref;
  }

  AggregateCall parse_aggregate_call(AggFunc func) {
    AggregateCall call;
    call.func = func;
    expect_symbol("(");
    if (accept_keyword("distinct")) call.distinct = true;
    if (is_symbol(peek(), "*")) throw UnsupportedFeature(agg_func_name(func) + "(*)");
    if (is_keyword(peek(), "select")) throw UnsupportedFeature("subquery");
    call.argument = parse_column_ref();
    reject_arithmetic();
    expect_symbol(")");
    if (is_keyword(peek(), "over")) throw UnsupportedFeature("window function");
    return call;
  }

  std::optional<std::string> parse_optional_alias() {
    if (accept_keyword("as")) return parse_identifier("alias");
    const Token& t = peek();
    if (t.kind == TokenKind::Identifier && (t.quoted || !is_reserved(t.text))) {
      ++pos_;
      return t.text;
    }
    return std::nullopt;
  }

  void parse_select_list(ParsedQuery& q) {
    do {
      SelectItem item;
      const Token& t = peek();
      if (is_symbol(t, "*")) throw UnsupportedFeature("SELECT *");
      if (is_symbol(t, "(")) {
        if (is_keyword(peek(1), "select")) throw UnsupportedFeature("subquery");
        fail("parenthesized select expressions are not supported");
      }
      if (t.kind == TokenKind::Integer) {
        item.kind = SelectItem::Kind::Literal;
        item.literal = parse_integer(advance());
      } else if (t.kind == TokenKind::String) {
        throw UnsupportedFeature("string literal in select list");
      } else if (t.kind == TokenKind::Identifier && !t.quoted && is_symbol(peek(1), "(")) {
        auto func = aggregate_from_name(t.text);
        if (!func) throw UnsupportedFeature("function call " + t.text + "()");
        ++pos_;
        item.kind = SelectItem::Kind::Aggregate;
        item.aggregate = parse_aggregate_call(*func);
      } else {
        item.kind = SelectItem::Kind::Column;
        item.column = parse_column_ref();
      }
      reject_arithmetic();
      item.alias = parse_optional_alias();
      q.select_items.push_back(std::move(item));
    } while (accept_symbol(","));
  }

  FromItem parse_from_item() {
    if (is_symbol(peek(), "(")) {
      if (is_keyword(peek(1), "select")) throw UnsupportedFeature("subquery");
      fail("parenthesized joins are not supported");
    }
    FromItem item;
    item.table = parse_identifier("table name");
    if (accept_symbol(".")) item.table = parse_identifier("table name");  // drop schema qualifier
    item.alias = parse_optional_alias();
    return item;
  }

  void parse_from_list(ParsedQuery& q) {
    q.from_items.push_back(parse_from_item());
    for (;;) {
      if (accept_symbol(",")) {
        q.from_items.push_back(parse_from_item());
        continue;
      }
      for (auto kw : {"left", "right", "full"})
        if (is_keyword(peek(), kw)) throw UnsupportedFeature("OUTER JOIN");
      if (is_keyword(peek(), "natural")) throw UnsupportedFeature("NATURAL JOIN");
      if (accept_keyword("cross")) {
        expect_keyword("join");
        q.from_items.push_back(parse_from_item());
        continue;
      }
      bool inner = accept_keyword("inner");
      if (accept_keyword("join")) {
        q.from_items.push_back(parse_from_item());
        if (is_keyword(peek(), "using")) throw UnsupportedFeature("JOIN ... USING");
        expect_keyword("on");
        parse_conjunction(q.where_conjuncts);
        continue;
      }
      if (inner) fail("expected JOIN");
      break;
    }
  }

  std::int64_t parse_integer(const Token& t, bool negative = false) {
    std::int64_t value = 0;
    std::string text = negative ? "-" + t.text : t.text;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw SyntaxError(t.position, t.text, "integer literal out of range");
    return value;
  }

  std::optional<Value> try_parse_constant() {
    const Token& t = peek();
    if (t.kind == TokenKind::Integer) {
      ++pos_;
      return Value(parse_integer(t));
    }
    if (t.kind == TokenKind::String) {
      ++pos_;
      return Value(t.text);
    }
    if (is_symbol(t, "-") && peek(1).kind == TokenKind::Integer) {
      pos_ += 2;
      return Value(parse_integer(tokens_[pos_ - 1], true));
    }
    if (is_keyword(t, "null")) throw UnsupportedFeature("NULL literal");
    return std::nullopt;
  }

  Comparator parse_comparator() {
    const Token& t = peek();
    if (is_keyword(t, "in")) throw UnsupportedFeature("IN predicate");
    if (is_keyword(t, "between")) throw UnsupportedFeature("BETWEEN");
    if (is_keyword(t, "like")) throw UnsupportedFeature("LIKE");
    if (is_keyword(t, "is")) throw UnsupportedFeature("IS NULL");
    if (is_keyword(t, "not")) throw UnsupportedFeature("NOT");
    reject_arithmetic();
    if (t.kind != TokenKind::Symbol) fail("expected comparison operator");
    Comparator c;
    if (t.text == "=") c = Comparator::Eq;
    else if (t.text == "<>" || t.text == "!=") c = Comparator::Ne;
    else if (t.text == "<") c = Comparator::Lt;
    else if (t.text == "<=") c = Comparator::Le;
    else if (t.text == ">") c = Comparator::Gt;
    else if (t.text == ">=") c = Comparator::Ge;
    else fail("expected comparison operator");
    ++pos_;
    return c;
  }

  static Comparator flip(Comparator c) {
    switch (c) {
      case Comparator::Lt: return Comparator::Gt;
      case Comparator::Le: return Comparator::Ge;
      case Comparator::Gt: return Comparator::Lt;
      case Comparator::Ge: return Comparator::Le;
      default: return c;
    }
  }

  void parse_predicate(std::vector<WhereConjunct>& out) {
    if (accept_symbol("(")) {
      if (is_keyword(peek(), "select")) throw UnsupportedFeature("subquery");
      std::vector<WhereConjunct> inner;
      parse_predicate(inner);
      while (accept_keyword("and")) parse_predicate(inner);
      if (is_keyword(peek(), "or")) throw UnsupportedFeature("OR");
      expect_symbol(")");
      out.insert(out.end(), inner.begin(), inner.end());
      return;
    }
    if (is_keyword(peek(), "not")) throw UnsupportedFeature("NOT");
    if (is_keyword(peek(), "exists")) throw UnsupportedFeature("subquery");
    if (is_keyword(peek(), "true") || is_keyword(peek(), "false"))
      throw UnsupportedFeature("boolean literal predicate");

    auto left_const = try_parse_constant();
    std::optional<ColumnRef> left_col;
    if (!left_const) left_col = parse_column_ref();
    reject_arithmetic();
    Comparator cmp = parse_comparator();
    if (is_symbol(peek(), "(")) {
      if (is_keyword(peek(1), "select")) throw UnsupportedFeature("subquery");
      fail("unexpected '('");
    }
    for (auto kw : {"any", "all", "some"})
      if (is_keyword(peek(), kw)) throw UnsupportedFeature("subquery");
    auto right_const = try_parse_constant();
    std::optional<ColumnRef> right_col;
    if (!right_const) right_col = parse_column_ref();
    reject_arithmetic();

    WhereConjunct conj;
    if (left_col && right_col) {
      if (cmp != Comparator::Eq) throw UnsupportedFeature("non-equality join predicate");
      conj.left = *left_col;
      conj.cmp = cmp;
      conj.right = *right_col;
    } else if (left_col) {
      conj.left = *left_col;
      conj.cmp = cmp;
      conj.right = *right_const;
    } else if (right_col) {
      conj.left = *right_col;
      conj.cmp = flip(cmp);
      conj.right = *left_const;
    } else {
      throw UnsupportedFeature("constant-only predicate");
    }
    out.push_back(std::move(conj));
  }

  void parse_conjunction(std::vector<WhereConjunct>& out) {
    parse_predicate(out);
    for (;;) {
      if (accept_keyword("and")) {
        parse_predicate(out);
        continue;
      }
      if (is_keyword(peek(), "or")) throw UnsupportedFeature("OR");
      break;
    }
  }

  HavingClause parse_having() {
    HavingClause h;
    const Token& t = peek();
    auto func = t.kind == TokenKind::Identifier && !t.quoted ? aggregate_from_name(t.text) : std::nullopt;
    if (!func || !is_symbol(peek(1), "(")) fail("HAVING must compare an aggregate call with a constant");
    ++pos_;
    h.aggregate = parse_aggregate_call(*func);
    h.cmp = parse_comparator();
    if (is_symbol(peek(), "(") && is_keyword(peek(1), "select")) throw UnsupportedFeature("subquery");
    auto constant = try_parse_constant();
    if (!constant) fail("HAVING must compare an aggregate call with a constant");
    reject_arithmetic();
    if (is_keyword(peek(), "and") || is_keyword(peek(), "or"))
      throw UnsupportedFeature("compound HAVING condition");
    h.constant = *constant;
    return h;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedQuery parse_query(std::string_view sql_text) {
  return Parser(tokenize(sql_text)).parse();
}

}  // namespace yr
