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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kbtriage {

/// Error categories raised by the library. Each operation documents which
/// codes it can produce; callers switch on `Error::code()`.
enum class Errc {
  kInvalidArgument,
  kMissingField,
  kMalformedTimestamp,
  kMalformedRecord,
  kDuplicateReport,
  kJudgeFailure,
  kLengthMismatch,
  kEmptyInput,
  kMissingManualVerdict,
  kNegativeDuration,
  kEmptySample,
  kDegenerateTable,
  kAllZeroDifferences,
  kMissingRootCause,
  kIncompleteInput,
  kEmbedderFailure,
  kDimensionMismatch,
  kZeroVector,
  kInsufficientClass,
  kMissingContext,
  kClientFailure,
  kParseFailure,
  kEmptyCorpus,
  kSingleClassTraining,
  kEmptyTrainingSet,
  kKeyMismatch,
  kTooFewItems,
  kMissingEffort,
  kIo,
  kConfig,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

[[noreturn]] void fail(Errc code, std::string detail);

}  // namespace kbtriage
