/*
 * Copyright 2026 The ontomatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ontomatch {

enum class ErrorCode {
  MalformedRecord,
  DuplicateEntityId,
  EmptyOntology,
  UnknownEntity,
  ProviderUnavailable,
  MissingVector,
  DimensionMismatch,
  ZeroVector,
  MissingPlaceholder,
  EndpointUnavailable,
  PersistFailure,
  StaleKB,
  MismatchedInputs,
  InvalidParameter,
  ConfigError,
  InputNotFound,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateEntityId: return "DuplicateEntityId";
    case ErrorCode::EmptyOntology: return "EmptyOntology";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::MissingVector: return "MissingVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MissingPlaceholder: return "MissingPlaceholder";
    case ErrorCode::EndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::PersistFailure: return "PersistFailure";
    case ErrorCode::StaleKB: return "StaleKB";
    case ErrorCode::MismatchedInputs: return "MismatchedInputs";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InputNotFound: return "InputNotFound";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; the
// code is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process exit codes used by the command-line tool.
namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfig = 2;
inline constexpr int kInput = 3;
inline constexpr int kEndpoint = 4;
}  // namespace exit_code

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParameter:
    case ErrorCode::StaleKB:
    case ErrorCode::MismatchedInputs:
    case ErrorCode::MissingPlaceholder:
      return exit_code::kConfig;
    case ErrorCode::MalformedRecord:
    case ErrorCode::DuplicateEntityId:
    case ErrorCode::EmptyOntology:
    case ErrorCode::UnknownEntity:
    case ErrorCode::MissingVector:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ZeroVector:
    case ErrorCode::InputNotFound:
      return exit_code::kInput;
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::EndpointUnavailable:
      return exit_code::kEndpoint;
    case ErrorCode::PersistFailure:
      return exit_code::kFailure;
  }
  return exit_code::kFailure;
}

}  // namespace ontomatch
