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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbtriage/label.hpp"
#include "kbtriage/prompt.hpp"

namespace kbtriage {

enum class ParseFailureKind { kNoLabel, kAmbiguous, kEmptyResponse, kEmptyExplanation };

std::string_view to_string(ParseFailureKind kind) noexcept;

struct ParsedVerdict {
  Label label = Label::kGenuineBug;
  std::string explanation;
};

/// The final line a model is instructed to emit, e.g. `LABEL: FALSE_POSITIVE`.
std::string render_marker(Label label);

/// A marker line starts with `LABEL:` (case-insensitive, after optional
/// markdown emphasis) and names at least one label. The last marker line
/// decides; the remaining lines, trimmed, form the explanation.
/// Throws Error(kParseFailure) whose detail starts with the failure kind name.
ParsedVerdict parse_verdict(std::string_view raw);

/// Classifies a kParseFailure error detail; nullopt for other errors.
std::optional<ParseFailureKind> parse_failure_kind(std::string_view detail);

struct Verdict {
  ReportKey report;
  Label label = Label::kGenuineBug;
  std::string explanation;
  std::string raw_response;
  PromptStrategy strategy = PromptStrategy::kBasicZeroShot;
  std::string model_id;
  double latency_ms = 0.0;
};

/// One line of the verdict log. `label` is absent when the response could not
/// be parsed; `explanation` then holds the parse failure.
struct VerdictRecord {
  std::string report_id;  // ReportKey::str()
  PromptStrategy strategy = PromptStrategy::kBasicZeroShot;
  std::string model_id;
  std::optional<Label> label;
  std::string explanation;
  std::string raw_response_digest;  // sha256 hex of the raw response
  double latency_ms = 0.0;

  bool operator==(const VerdictRecord&) const = default;
};

VerdictRecord to_record(const Verdict& verdict);

std::string to_json_line(const VerdictRecord& record);
VerdictRecord verdict_record_from_json_line(std::string_view line);

void write_verdict_log(std::ostream& out, const std::vector<VerdictRecord>& records);
std::vector<VerdictRecord> read_verdict_log(std::istream& in);
void save_verdict_log(const std::filesystem::path& path, const std::vector<VerdictRecord>& records);
std::vector<VerdictRecord> load_verdict_log(const std::filesystem::path& path);

}  // namespace kbtriage
