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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/label.hpp"
#include "kbtriage/model_client.hpp"
#include "kbtriage/taxonomy.hpp"
#include "kbtriage/time.hpp"

namespace kbtriage {

enum class Consensus { kFalsePositiveCandidate, kGenuineCandidate, kNeedsManual };

std::string_view to_string(Consensus c) noexcept;

struct JudgeLabel {
  std::string judge_id;
  Label label = Label::kGenuineBug;
  std::string justification;  // verbatim judge explanation

  bool operator==(const JudgeLabel&) const = default;
};

struct PreLabel {
  ReportKey report;
  std::vector<JudgeLabel> judges;
  Consensus consensus = Consensus::kNeedsManual;
};

/// Unanimous labels map to the matching candidate, anything else to
/// NeedsManual. Throws kInvalidArgument for fewer than two judges.
Consensus consensus_of(std::span<const JudgeLabel> labels);

/// Queries every judge concurrently with the basic zero-shot prompt. Any
/// client or parse failure throws kJudgeFailure naming the judge; no vote is
/// cast with fewer judges. Judge ids are the clients' model ids, suffixed
/// with `#<index>` when they repeat.
PreLabel preannotate(const BugReport& report, std::span<const ModelClient* const> judges,
                     const TemplateSet& templates = TemplateSet::builtin(),
                     const RetryPolicy& retry = {});

struct ManualVerdict {
  ReportKey report;
  std::string annotator_id;
  Decision decision = Label::kGenuineBug;
  std::string rationale;
  int round = 1;
  Timestamp timestamp{};
  std::optional<RootCauseCategory> root_cause;  // for false positives

  bool operator==(const ManualVerdict&) const = default;
};

/// Throws kInvalidArgument for round < 1, an empty annotator or an Excluded
/// decision without a reason.
void validate(const ManualVerdict& verdict);

struct AgreementResult {
  double kappa = 0.0;
  double observed = 0.0;  // p_o
  double expected = 0.0;  // p_e
  std::size_t n = 0;
  bool degenerate = false;  // p_e == 1: both raters constant and equal

  bool operator==(const AgreementResult&) const = default;
};

/// Cohen's kappa over the categories present. Throws kLengthMismatch,
/// kEmptyInput.
AgreementResult cohen_kappa(std::span<const std::string> a, std::span<const std::string> b);
AgreementResult cohen_kappa(std::span<const Decision> a, std::span<const Decision> b);

/// Kappa between two annotators over the reports both judged in `round`.
AgreementResult round_agreement(std::span<const ManualVerdict> verdicts, int round,
                                std::string_view annotator_a, std::string_view annotator_b);

inline constexpr std::string_view kUnresolvedDisagreement = "unresolved disagreement";

/// Final decision per report. Every prelabeled report needs a manual verdict
/// (kMissingManualVerdict otherwise). For each report the highest round
/// decides; disagreeing categories within it yield
/// Excluded("unresolved disagreement").
std::map<ReportKey, Decision> merge_verdicts(std::span<const PreLabel> prelabels,
                                             std::span<const ManualVerdict> manual);

/// A final label as consumed by the analytics commands.
struct LabelRecord {
  ReportKey report;
  Decision decision = Label::kGenuineBug;
  std::optional<RootCauseCategory> root_cause;

  bool operator==(const LabelRecord&) const = default;
};

/// Attaches root causes to merged false-positive decisions: the first
/// top-round verdict (by annotator id) that names one supplies it.
std::vector<LabelRecord> label_records(const std::map<ReportKey, Decision>& merged,
                                       std::span<const ManualVerdict> manual);

std::string to_json_line(const LabelRecord& record);
LabelRecord label_record_from_json_line(std::string_view line);
std::vector<LabelRecord> load_label_records(const std::filesystem::path& path);
void save_label_records(const std::filesystem::path& path, std::span<const LabelRecord> records);

/// Shuffles the keys with `seed`, then cuts consecutive batches of
/// round(fraction * n) keys; the remainder forms a final batch.
std::vector<std::vector<ReportKey>> split_batches(std::vector<ReportKey> keys,
                                                  std::span<const double> fractions,
                                                  std::uint64_t seed);

// Line-delimited logs.
std::string to_json_line(const ManualVerdict& verdict);
ManualVerdict manual_verdict_from_json_line(std::string_view line);
std::vector<ManualVerdict> load_manual_verdicts(const std::filesystem::path& path);
/// Appends one record; the log is append-only.
void append_manual_verdict(const std::filesystem::path& path, const ManualVerdict& verdict);

std::string to_json_line(const PreLabel& prelabel);
PreLabel prelabel_from_json_line(std::string_view line);
std::vector<PreLabel> load_prelabels(const std::filesystem::path& path);

}  // namespace kbtriage
