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

#include "kbtriage/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

using nlohmann::json;

namespace {

// Returns the first present, non-null field among `names`.
const json* field(const json& obj, std::initializer_list<std::string_view> names) {
  if (!obj.is_object()) return nullptr;
  for (auto name : names) {
    auto it = obj.find(name);
    if (it != obj.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string as_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number_unsigned()) return std::to_string(value.get<unsigned long long>());
  return value.dump();
}

std::string required_text(const json& obj, std::initializer_list<std::string_view> names,
                          std::string_view canonical) {
  const json* value = field(obj, names);
  if (value == nullptr) fail(Errc::kMissingField, std::string(canonical));
  std::string out = as_text(*value);
  if (text::trim(out).empty()) fail(Errc::kMissingField, std::string(canonical));
  return out;
}

std::string optional_text(const json& obj, std::initializer_list<std::string_view> names) {
  const json* value = field(obj, names);
  return value == nullptr ? std::string{} : as_text(*value);
}

Timestamp timestamp_field(const json& value) {
  if (!value.is_string()) fail(Errc::kMalformedTimestamp, value.dump());
  return parse_timestamp(value.get<std::string>());
}

bool same_author(std::string_view a, std::string_view b) {
  return !b.empty() && text::to_lower(text::trim(a)) == text::to_lower(text::trim(b));
}

Comment comment_from_payload(const json& raw, std::string_view reporter) {
  Comment c;
  c.author = required_text(raw, {"author", "creator", "from"}, "comments[].author");
  const json* ts = field(raw, {"timestamp", "time", "creation_time", "date"});
  if (ts == nullptr) fail(Errc::kMissingField, "comments[].timestamp");
  c.timestamp = timestamp_field(*ts);
  c.body = optional_text(raw, {"body", "text"});
  if (const json* flag = field(raw, {"is_reporter"}); flag != nullptr && flag->is_boolean()) {
    c.is_reporter = flag->get<bool>();
  } else {
    c.is_reporter = same_author(c.author, reporter);
  }
  return c;
}

void sort_thread(DiscussionThread& thread) {
  std::stable_sort(thread.comments.begin(), thread.comments.end(),
                   [](const Comment& a, const Comment& b) { return a.timestamp < b.timestamp; });
}

}  // namespace

std::size_t BugReport::comment_count() const {
  std::size_t n = 0;
  for (const auto& thread : discussions) n += thread.comments.size();
  return n;
}

BugReport ingest_bugzilla(const json& payload) {
  if (!payload.is_object()) fail(Errc::kMalformedRecord, "bugzilla payload is not an object");
  BugReport report;
  report.source = Source::kBugzilla;
  report.id = required_text(payload, {"id"}, "id");
  const json* created = field(payload, {"created", "creation_time"});
  if (created == nullptr) fail(Errc::kMissingField, "created");
  report.open_time = timestamp_field(*created);
  report.status = required_text(payload, {"status"}, "status");
  if (const json* res = field(payload, {"resolution"}); res != nullptr) {
    std::string r = as_text(*res);
    if (!text::trim(r).empty()) report.resolution = std::move(r);
  }
  report.title = optional_text(payload, {"title", "summary"});
  report.description = optional_text(payload, {"description"});

  const std::string product = optional_text(payload, {"product"});
  const std::string component = optional_text(payload, {"component", "component_raw"});
  if (!product.empty() && !component.empty()) {
    report.component_raw = product + "/" + component;
  } else {
    report.component_raw = component.empty() ? product : component;
  }

  const std::string reporter = optional_text(payload, {"creator", "reporter"});
  DiscussionThread thread;
  thread.thread_id = report.id;
  if (const json* comments = field(payload, {"comments"}); comments != nullptr) {
    if (!comments->is_array()) fail(Errc::kMalformedRecord, "comments is not an array");
    for (const auto& raw : *comments) thread.comments.push_back(comment_from_payload(raw, reporter));
  }
  sort_thread(thread);
  report.discussions.push_back(std::move(thread));
  return report;
}

BugReport ingest_syzkaller(const json& payload) {
  if (!payload.is_object()) fail(Errc::kMalformedRecord, "syzkaller payload is not an object");
  BugReport report;
  report.source = Source::kSyzkaller;
  report.id = required_text(payload, {"id", "extid"}, "id");
  report.title = required_text(payload, {"title"}, "title");
  report.status = required_text(payload, {"status"}, "status");
  if (const json* res = field(payload, {"resolution"}); res != nullptr) {
    report.resolution = as_text(*res);
  }
  report.description = optional_text(payload, {"description", "crash_report"});

  if (const json* subsystems = field(payload, {"subsystems"});
      subsystems != nullptr && subsystems->is_array()) {
    std::string joined;
    for (const auto& s : *subsystems) {
      if (!joined.empty()) joined += ", ";
      joined += as_text(s);
    }
    report.component_raw = joined;
  } else {
    report.component_raw = optional_text(payload, {"component", "component_raw", "subsystem"});
  }

  std::string reporter = optional_text(payload, {"reporter"});
  if (reporter.empty()) reporter = "syzbot";

  if (const json* threads = field(payload, {"discussions", "threads"}); threads != nullptr) {
    if (!threads->is_array()) fail(Errc::kMalformedRecord, "discussions is not an array");
    std::size_t index = 0;
    for (const auto& raw : *threads) {
      DiscussionThread thread;
      thread.thread_id = optional_text(raw, {"thread_id", "link", "subject"});
      if (thread.thread_id.empty()) thread.thread_id = fmt::format("{}#{}", report.id, index);
      if (const json* messages = field(raw, {"messages", "comments"}); messages != nullptr) {
        if (!messages->is_array()) fail(Errc::kMalformedRecord, "messages is not an array");
        for (const auto& m : *messages) thread.comments.push_back(comment_from_payload(m, reporter));
      }
      sort_thread(thread);
      report.discussions.push_back(std::move(thread));
      ++index;
    }
  }

  if (const json* created = field(payload, {"created", "first_crash"}); created != nullptr) {
    report.open_time = timestamp_field(*created);
  } else {
    std::optional<Timestamp> earliest;
    for (const auto& thread : report.discussions) {
      if (!thread.comments.empty() && (!earliest || thread.comments.front().timestamp < *earliest)) {
        earliest = thread.comments.front().timestamp;
      }
    }
    if (!earliest) fail(Errc::kMissingField, "created");
    report.open_time = *earliest;
  }
  return report;
}

BugReport ingest(Source source, const json& payload) {
  return source == Source::kBugzilla ? ingest_bugzilla(payload) : ingest_syzkaller(payload);
}

// ---------------------------------------------------------------------------

json to_json(const BugReport& r) {
  json threads = json::array();
  for (const auto& t : r.discussions) {
    json comments = json::array();
    for (const auto& c : t.comments) {
      comments.push_back({{"author", c.author},
                          {"timestamp", format_timestamp(c.timestamp)},
                          {"body", c.body},
                          {"is_reporter", c.is_reporter}});
    }
    threads.push_back({{"thread_id", t.thread_id}, {"comments", std::move(comments)}});
  }
  json out = {{"id", r.id},
              {"source", to_string(r.source)},
              {"title", r.title},
              {"description", r.description},
              {"status", r.status},
              {"resolution", r.resolution ? json(*r.resolution) : json(nullptr)},
              {"component_raw", r.component_raw},
              {"open_time", format_timestamp(r.open_time)},
              {"discussions", std::move(threads)}};
  return out;
}

BugReport report_from_json(const json& rec) {
  if (!rec.is_object()) fail(Errc::kMalformedRecord, "corpus record is not an object");
  auto str = [&](const char* name) -> std::string {
    auto it = rec.find(name);
    if (it == rec.end() || !it->is_string()) fail(Errc::kMissingField, name);
    return it->get<std::string>();
  };
  BugReport r;
  r.id = str("id");
  auto source = parse_source(str("source"));
  if (!source) fail(Errc::kMalformedRecord, "unknown source " + str("source"));
  r.source = *source;
  r.title = str("title");
  r.description = str("description");
  r.status = str("status");
  if (auto it = rec.find("resolution"); it != rec.end() && it->is_string()) {
    r.resolution = it->get<std::string>();
  }
  r.component_raw = str("component_raw");
  r.open_time = parse_timestamp(str("open_time"));
  auto threads = rec.find("discussions");
  if (threads == rec.end() || !threads->is_array()) fail(Errc::kMissingField, "discussions");
  for (const auto& t : *threads) {
    DiscussionThread thread;
    thread.thread_id = t.at("thread_id").get<std::string>();
    for (const auto& c : t.at("comments")) {
      Comment comment;
      comment.author = c.at("author").get<std::string>();
      comment.timestamp = parse_timestamp(c.at("timestamp").get<std::string>());
      comment.body = c.at("body").get<std::string>();
      comment.is_reporter = c.at("is_reporter").get<bool>();
      thread.comments.push_back(std::move(comment));
    }
    r.discussions.push_back(std::move(thread));
  }
  return r;
}

std::string to_json_line(const BugReport& report) { return to_json(report).dump(); }

BugReport report_from_json_line(std::string_view line) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::exception& e) {
    fail(Errc::kMalformedRecord, e.what());
  }
  try {
    return report_from_json(rec);
  } catch (const json::exception& e) {
    fail(Errc::kMalformedRecord, e.what());
  }
}

// ---------------------------------------------------------------------------

bool TimeWindow::contains(Timestamp t) const {
  return t >= start && t < end + std::chrono::days{1};
}

TimeWindow TimeWindow::study_default() {
  return {make_timestamp(2020, 1, 1), make_timestamp(2025, 7, 31)};
}

Corpus::Corpus(TimeWindow window) : window_(window) {}

void validate_report(const BugReport& r) {
  if (text::trim(r.id).empty()) fail(Errc::kInvalidArgument, "report id is empty");
  if (r.source == Source::kBugzilla && r.discussions.size() != 1) {
    fail(Errc::kInvalidArgument,
         fmt::format("bugzilla report {} has {} threads, expected 1", r.id, r.discussions.size()));
  }
  for (const auto& thread : r.discussions) {
    for (std::size_t i = 0; i < thread.comments.size(); ++i) {
      if (text::trim(thread.comments[i].author).empty()) {
        fail(Errc::kInvalidArgument, fmt::format("report {} has a comment without author", r.id));
      }
      if (i > 0 && thread.comments[i].timestamp < thread.comments[i - 1].timestamp) {
        fail(Errc::kInvalidArgument, fmt::format("report {} thread {} is not time-ordered", r.id,
                                                 thread.thread_id));
      }
    }
  }
}

void Corpus::add(BugReport report) {
  validate_report(report);
  auto key = report.key();
  if (reports_.contains(key)) fail(Errc::kDuplicateReport, key.str());
  reports_.emplace(std::move(key), std::move(report));
}

void Corpus::upsert(BugReport report) {
  validate_report(report);
  auto key = report.key();
  reports_.insert_or_assign(std::move(key), std::move(report));
}

const BugReport* Corpus::find(const ReportKey& key) const {
  auto it = reports_.find(key);
  return it == reports_.end() ? nullptr : &it->second;
}

Corpus read_corpus(std::istream& in, TimeWindow window) {
  Corpus corpus(window);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      corpus.add(report_from_json_line(line));
    } catch (const Error& e) {
      fail(e.code(), fmt::format("line {}: {}", line_no, e.detail()));
    }
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, TimeWindow window) {
  std::ifstream in(path);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  return read_corpus(in, window);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& [key, report] : corpus.reports()) out << to_json_line(report) << '\n';
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::kIo, "cannot write " + tmp.string());
    write_corpus(out, corpus);
    if (!out) fail(Errc::kIo, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------

bool has_developer_discussion(const BugReport& report) {
  for (const auto& thread : report.discussions) {
    for (const auto& c : thread.comments) {
      if (!c.is_reporter) return true;
    }
  }
  return false;
}

CandidateKind classify_candidate(const BugReport& report, const TimeWindow& window) {
  if (!window.contains(report.open_time)) {
    return CandidateKind::excluded(std::string(kReasonOutsideWindow));
  }
  if (report.source == Source::kBugzilla) {
    const std::string resolution = text::normalize_label(report.resolution.value_or(""));
    if (resolution == "code fix") return CandidateKind::genuine();
    if (resolution == "invalid") return CandidateKind::false_positive();
    return CandidateKind::excluded(std::string(kReasonUnresolved));
  }
  const std::string status = text::normalize_label(report.status);
  if (status == "fix bisection done") return CandidateKind::genuine();
  if (status == "invalid") {
    if (has_developer_discussion(report)) return CandidateKind::false_positive();
    return CandidateKind::excluded(std::string(kReasonNoDiscussion));
  }
  return CandidateKind::excluded(std::string(kReasonOtherStatus));
}

std::map<ReportKey, CandidateKind> select_candidates(const Corpus& corpus) {
  std::map<ReportKey, CandidateKind> out;
  for (const auto& [key, report] : corpus.reports()) {
    out.emplace(key, classify_candidate(report, corpus.window()));
  }
  return out;
}

}  // namespace kbtriage
