// Copyright 2026 The kbtriage Authors
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

#include "kbtriage/error.hpp"

#include <fmt/format.h>

namespace kbtriage {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMissingField: return "MissingField";
    case Errc::kMalformedTimestamp: return "MalformedTimestamp";
    case Errc::kMalformedRecord: return "MalformedRecord";
    case Errc::kDuplicateReport: return "DuplicateReport";
    case Errc::kJudgeFailure: return "JudgeFailure";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kMissingManualVerdict: return "MissingManualVerdict";
    case Errc::kNegativeDuration: return "NegativeDuration";
    case Errc::kEmptySample: return "EmptySample";
    case Errc::kDegenerateTable: return "DegenerateTable";
    case Errc::kAllZeroDifferences: return "AllZeroDifferences";
    case Errc::kMissingRootCause: return "MissingRootCause";
    case Errc::kIncompleteInput: return "IncompleteInput";
    case Errc::kEmbedderFailure: return "EmbedderFailure";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kZeroVector: return "ZeroVector";
    case Errc::kInsufficientClass: return "InsufficientClass";
    case Errc::kMissingContext: return "MissingContext";
    case Errc::kClientFailure: return "ClientFailure";
    case Errc::kParseFailure: return "ParseFailure";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kSingleClassTraining: return "SingleClassTraining";
    case Errc::kEmptyTrainingSet: return "EmptyTrainingSet";
    case Errc::kKeyMismatch: return "KeyMismatch";
    case Errc::kTooFewItems: return "TooFewItems";
    case Errc::kMissingEffort: return "MissingEffort";
    case Errc::kIo: return "Io";
    case Errc::kConfig: return "Config";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string detail)
    : std::runtime_error(fmt::format("{}({})", errc_name(code), detail)),
      code_(code),
      detail_(std::move(detail)) {}

void fail(Errc code, std::string detail) { throw Error(code, std::move(detail)); }

}  // namespace kbtriage
