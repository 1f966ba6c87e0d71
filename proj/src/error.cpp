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

#include "cogmap/error.hpp"

namespace cogmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidPose: return "invalid-pose";
    case ErrorCode::kDegenerateDepth: return "degenerate-depth";
    case ErrorCode::kBounds: return "bounds";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kOrdering: return "ordering";
    case ErrorCode::kInvalidRotation: return "invalid-rotation";
    case ErrorCode::kValue: return "value";
    case ErrorCode::kEmptyScene: return "empty-scene";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kRouting: return "routing";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kReference: return "reference";
    case ErrorCode::kCycle: return "cycle";
    case ErrorCode::kDuplication: return "duplication";
    case ErrorCode::kArity: return "arity";
    case ErrorCode::kDegenerateBandwidth: return "degenerate-bandwidth";
    case ErrorCode::kIncompleteEvidence: return "incomplete-evidence";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace cogmap
