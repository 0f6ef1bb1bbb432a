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

#include "common/error.hpp"

namespace yr {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::AmbiguousColumn: return "AmbiguousColumn";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::DisconnectedInput: return "DisconnectedInput";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoJoinTree: return "NoJoinTree";
    case ErrorCode::InvalidGhd: return "InvalidGHD";
    case ErrorCode::GuardNotInTree: return "GuardNotInTree";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::EmptyTree: return "EmptyTree";
    case ErrorCode::UnsupportedInDialect: return "UnsupportedInDialect";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::MissingRelation: return "MissingRelation";
    case ErrorCode::PlanReferenceError: return "PlanReferenceError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace yr
