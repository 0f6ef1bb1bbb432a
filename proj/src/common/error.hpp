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

#include <stdexcept>
#include <string>
#include <string_view>

namespace yr {

enum class ErrorCode {
  SyntaxError,
  UnsupportedFeature,
  AmbiguousColumn,
  InvalidQuery,
  DisconnectedInput,
  TooLarge,
  NoJoinTree,
  InvalidGhd,
  GuardNotInTree,
  ModeMismatch,
  EmptyTree,
  UnsupportedInDialect,
  IoError,
  ArityMismatch,
  SchemaMismatch,
  UnknownAttribute,
  TypeError,
  MissingRelation,
  PlanReferenceError,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Base exception for every failure raised by the core library. The code is
/// what the C API surfaces; the message carries the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the SQL lexer/parser; remembers where the offending token sits.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string token, const std::string& what)
      : Error(ErrorCode::SyntaxError,
              what + " at position " + std::to_string(position) +
                  (token.empty() ? std::string(" (end of input)")
                                 : " near '" + token + "'")),
        position_(position),
        token_(std::move(token)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t position_;
  std::string token_;
};

/// A construct outside the supported SQL fragment. `construct()` names it,
/// e.g. "OUTER JOIN" or "subquery".
class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(std::string construct)
      : Error(ErrorCode::UnsupportedFeature, "unsupported feature: " + construct),
        construct_(std::move(construct)) {}

  const std::string& construct() const noexcept { return construct_; }

 private:
  std::string construct_;
};

}  // namespace yr
