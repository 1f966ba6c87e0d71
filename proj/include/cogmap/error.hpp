// Copyright 2026 The cogmap Authors
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

namespace cogmap {

/// Failure categories raised across the library. The CLI maps these onto
/// exit codes, so keep the numbering stable.
enum class ErrorCode {
  kInvalidPose = 1,
  kDegenerateDepth,
  kBounds,
  kDomain,
  kParse,
  kOrdering,
  kInvalidRotation,
  kValue,
  kEmptyScene,
  kConfiguration,
  kRouting,
  kNotFound,
  kReference,
  kCycle,
  kDuplication,
  kArity,
  kDegenerateBandwidth,
  kIncompleteEvidence,
  kIntegrity,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the category prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace cogmap
