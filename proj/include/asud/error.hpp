// Copyright 2026 The asud Authors
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

#ifndef ASUD_ERROR_HPP
#define ASUD_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace asud {

enum class ErrorCode {
  InvalidArgument,
  EmptyEstimate,
  CapacityExceeded,
  RankDeficient,
  ZeroChristoffel,
  UnknownFunction,
  SampleOutsideEstimate,
  Underdetermined,
  RedrawLimit,
  ZeroNorm,
  EmptyTrueDomain,
  SchemaMismatch,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyEstimate: return "EmptyEstimate";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ZeroChristoffel: return "ZeroChristoffel";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::SampleOutsideEstimate: return "SampleOutsideEstimate";
    case ErrorCode::Underdetermined: return "Underdetermined";
    case ErrorCode::RedrawLimit: return "RedrawLimit";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::EmptyTrueDomain: return "EmptyTrueDomain";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace asud

#endif  // ASUD_ERROR_HPP
