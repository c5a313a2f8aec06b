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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kbtriage/label.hpp"
#include "kbtriage/time.hpp"

namespace kbtriage {

struct Comment {
  std::string author;
  Timestamp timestamp{};
  std::string body;
  bool is_reporter = false;

  bool operator==(const Comment&) const = default;
};

struct DiscussionThread {
  std::string thread_id;
  std::vector<Comment> comments;  // non-decreasing by timestamp

  bool operator==(const DiscussionThread&) const = default;
};

struct BugReport {
  std::string id;
  Source source = Source::kBugzilla;
  std::string title;
  std::string description;
  std::string status;
  std::optional<std::string> resolution;
  std::string component_raw;
  Timestamp open_time{};
  std::vector<DiscussionThread> discussions;

  ReportKey key() const { return {source, id}; }
  std::size_t comment_count() const;

  bool operator==(const BugReport&) const = default;
};

// ---------------------------------------------------------------------------
// Tracker ingestion

/// Parses a Bugzilla bug payload (REST field names, with the aliases listed in
/// the README). All comments land in one thread, sorted by timestamp.
/// Throws kMissingField for id / created / status, kMalformedTimestamp.
BugReport ingest_bugzilla(const nlohmann::json& payload);

/// Parses a syzbot dashboard payload; one thread per `discussions` entry.
BugReport ingest_syzkaller(const nlohmann::json& payload);

BugReport ingest(Source source, const nlohmann::json& payload);

// ---------------------------------------------------------------------------
// Canonical line-delimited persistence

nlohmann::json to_json(const BugReport& report);
/// Strict reader of the canonical schema written by `to_json`.
BugReport report_from_json(const nlohmann::json& record);

std::string to_json_line(const BugReport& report);
BugReport report_from_json_line(std::string_view line);

// ---------------------------------------------------------------------------
// Corpus

/// Inclusive date window; `end` covers the whole final day.
struct TimeWindow {
  Timestamp start;
  Timestamp end;

  bool contains(Timestamp t) const;
  static TimeWindow study_default();  // 2020-01-01 .. 2025-07-31
};

/// Reports keyed by (source, id). Built single-writer; read-only afterwards.
/// The window is carried for candidate selection, which excludes reports
/// outside it; insertion does not reject them.
class Corpus {
 public:
  explicit Corpus(TimeWindow window = TimeWindow::study_default());

  /// Throws kInvalidArgument on structural violations (empty id, a Bugzilla
  /// report without exactly one thread, empty comment author, unsorted
  /// comments) and kDuplicateReport on key collisions.
  void add(BugReport report);
  /// Inserts or replaces by key.
  void upsert(BugReport report);

  const BugReport* find(const ReportKey& key) const;
  const std::map<ReportKey, BugReport>& reports() const { return reports_; }
  std::size_t size() const { return reports_.size(); }
  bool empty() const { return reports_.empty(); }
  const TimeWindow& window() const { return window_; }

 private:
  TimeWindow window_;
  std::map<ReportKey, BugReport> reports_;
};

/// Structural checks shared by Corpus::add and the corpus reader.
void validate_report(const BugReport& report);

Corpus read_corpus(std::istream& in, TimeWindow window = TimeWindow::study_default());
Corpus load_corpus(const std::filesystem::path& path,
                   TimeWindow window = TimeWindow::study_default());
/// One canonical line per report, ordered by key.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

// ---------------------------------------------------------------------------
// Candidate selection

struct CandidateKind {
  enum class Kind { kPotentialGenuine, kPotentialFalsePositive, kExcluded };

  Kind kind = Kind::kExcluded;
  std::string reason;  // non-empty iff kind == kExcluded

  static CandidateKind genuine() { return {Kind::kPotentialGenuine, {}}; }
  static CandidateKind false_positive() { return {Kind::kPotentialFalsePositive, {}}; }
  static CandidateKind excluded(std::string why) { return {Kind::kExcluded, std::move(why)}; }

  bool operator==(const CandidateKind&) const = default;
};

inline constexpr std::string_view kReasonOutsideWindow = "outside window";
inline constexpr std::string_view kReasonNoDiscussion = "no developer discussion";
inline constexpr std::string_view kReasonUnresolved = "unresolved or other resolution";
inline constexpr std::string_view kReasonOtherStatus = "other status";

/// At least one comment, in any thread, whose author is not the reporter.
bool has_developer_discussion(const BugReport& report);

CandidateKind classify_candidate(const BugReport& report, const TimeWindow& window);
std::map<ReportKey, CandidateKind> select_candidates(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Components

enum class ComponentKind {
  kFileSystem,
  kDrivers,
  kNetworking,
  kKernelCore,
  kTools,
  kSecurity,
  kIO,
  kOther,
};

/// The seven named components, in display order.
inline constexpr ComponentKind kNamedComponents[] = {
    ComponentKind::kDrivers,  ComponentKind::kFileSystem, ComponentKind::kKernelCore,
    ComponentKind::kNetworking, ComponentKind::kSecurity, ComponentKind::kTools,
    ComponentKind::kIO,
};

struct Component {
  ComponentKind kind = ComponentKind::kOther;
  std::string other_name;  // set iff kind == kOther

  static Component named(ComponentKind kind) { return {kind, {}}; }
  static Component other(std::string name);

  bool is_named() const { return kind != ComponentKind::kOther; }
  /// Display name: "File System", "Drivers", ..., or the Other label.
  std::string display_name() const;

  auto operator<=>(const Component&) const = default;
  bool operator==(const Component&) const = default;
};

/// Identifier used in the mapping table (`FileSystem`, `Drivers`, ...).
std::string_view component_kind_id(ComponentKind kind) noexcept;
std::string_view component_kind_display(ComponentKind kind) noexcept;
std::optional<ComponentKind> parse_component_kind(std::string_view text);

/// Versioned raw-label → component lookup table.
///
/// File format: UTF-8 text, one `raw_label<TAB>component` pair per line;
/// blank lines and `#` comments ignored; a `# version: N` comment sets the
/// version. Keys compare after `text::normalize_label`.
class ComponentMap {
 public:
  static ComponentMap builtin();
  static ComponentMap parse(std::string_view contents);
  static ComponentMap load(const std::filesystem::path& path);

  /// Total and deterministic. Bugzilla labels of the form `Product/Component`
  /// try the full label, then the component, then the product. Syzkaller
  /// subsystem lists (comma or space separated) take the first mapped entry.
  /// Unmapped labels yield Other(raw), empty input Other("unspecified").
  Component normalize(std::string_view component_raw, Source source) const;

  std::optional<ComponentKind> lookup(std::string_view label) const;
  const std::map<std::string, ComponentKind>& entries() const { return table_; }
  int version() const { return version_; }

 private:
  std::map<std::string, ComponentKind> table_;
  int version_ = 0;
};

Component normalize_component(std::string_view component_raw, Source source);

}  // namespace kbtriage
