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

#include "kbtriage/verdict.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "kbtriage/digest.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {
namespace {

constexpr std::string_view kMarker = "label:";

struct MarkerScan {
  bool genuine = false;
  bool fp = false;
};

// Nullopt when the line is not a marker line.
std::optional<MarkerScan> scan_marker(std::string_view line) {
  auto s = text::trim(line);
  while (!s.empty() && (s.front() == '*' || s.front() == '#' || s.front() == '`' ||
                        s.front() == '_' || s.front() == '>')) {
    s.remove_prefix(1);
    s = text::trim(s);
  }
  if (s.size() < kMarker.size() || text::to_lower(s.substr(0, kMarker.size())) != kMarker) {
    return std::nullopt;
  }
  const std::string rest = text::normalize_label(s.substr(kMarker.size()));
  MarkerScan scan{rest.find("genuine bug") != std::string::npos,
                  rest.find("false positive") != std::string::npos};
  if (!scan.genuine && !scan.fp) return std::nullopt;
  return scan;
}

[[noreturn]] void parse_fail(ParseFailureKind kind, std::string_view what) {
  fail(Errc::kParseFailure, fmt::format("{}: {}", to_string(kind), what));
}

}  // namespace

std::string_view to_string(ParseFailureKind kind) noexcept {
  switch (kind) {
    case ParseFailureKind::kNoLabel: return "NoLabel";
    case ParseFailureKind::kAmbiguous: return "Ambiguous";
    case ParseFailureKind::kEmptyResponse: return "EmptyResponse";
    case ParseFailureKind::kEmptyExplanation: return "EmptyExplanation";
  }
  return "Unknown";
}

std::optional<ParseFailureKind> parse_failure_kind(std::string_view detail) {
  for (auto k : {ParseFailureKind::kNoLabel, ParseFailureKind::kAmbiguous,
                 ParseFailureKind::kEmptyResponse, ParseFailureKind::kEmptyExplanation}) {
    if (detail.starts_with(to_string(k))) return k;
  }
  return std::nullopt;
}

std::string render_marker(Label label) { return fmt::format("LABEL: {}", to_string(label)); }

ParsedVerdict parse_verdict(std::string_view raw) {
  if (text::trim(raw).empty()) parse_fail(ParseFailureKind::kEmptyResponse, "empty response");
  const auto lines = text::split_lines(raw);
  std::optional<std::size_t> marker_line;
  MarkerScan scan;
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (auto s = scan_marker(lines[i])) {
      marker_line = i;
      scan = *s;
      break;
    }
  }
  if (!marker_line) parse_fail(ParseFailureKind::kNoLabel, "no LABEL marker line");
  if (scan.genuine && scan.fp) {
    parse_fail(ParseFailureKind::kAmbiguous, std::string(text::trim(lines[*marker_line])));
  }
  std::string explanation;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == *marker_line) continue;
    explanation.append(lines[i]);
    explanation.push_back('\n');
  }
  ParsedVerdict out{scan.genuine ? Label::kGenuineBug : Label::kFalsePositive,
                    std::string(text::trim(explanation))};
  if (out.explanation.empty()) parse_fail(ParseFailureKind::kEmptyExplanation, "no explanation");
  return out;
}

VerdictRecord to_record(const Verdict& verdict) {
  return {verdict.report.str(), verdict.strategy,         verdict.model_id,  verdict.label,
          verdict.explanation,  sha256_hex(verdict.raw_response), verdict.latency_ms};
}

std::string to_json_line(const VerdictRecord& record) {
  nlohmann::ordered_json j;
  j["report_id"] = record.report_id;
  j["strategy"] = to_string(record.strategy);
  j["model_id"] = record.model_id;
  j["label"] = record.label ? nlohmann::ordered_json(to_string(*record.label)) : nlohmann::ordered_json(nullptr);
  j["explanation"] = record.explanation;
  j["raw_response_digest"] = record.raw_response_digest;
  j["latency_ms"] = record.latency_ms;
  return j.dump();
}

VerdictRecord verdict_record_from_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    VerdictRecord r;
    r.report_id = j.at("report_id").get<std::string>();
    const auto strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (!strategy) fail(Errc::kMalformedRecord, "unknown strategy");
    r.strategy = *strategy;
    r.model_id = j.at("model_id").get<std::string>();
    if (!j.at("label").is_null()) {
      const auto label = parse_label(j.at("label").get<std::string>());
      if (!label) fail(Errc::kMalformedRecord, "unknown label");
      r.label = *label;
    }
    r.explanation = j.at("explanation").get<std::string>();
    r.raw_response_digest = j.at("raw_response_digest").get<std::string>();
    r.latency_ms = j.at("latency_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kMalformedRecord, e.what());
  }
}

void write_verdict_log(std::ostream& out, const std::vector<VerdictRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<VerdictRecord> read_verdict_log(std::istream& in) {
  std::vector<VerdictRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(verdict_record_from_json_line(line));
    } catch (const Error& e) {
      fail(e.code(), fmt::format("line {}: {}", line_no, e.detail()));
    }
  }
  return out;
}

void save_verdict_log(const std::filesystem::path& path, const std::vector<VerdictRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  write_verdict_log(out, records);
  if (!out) fail(Errc::kIo, "write failed for " + path.string());
}

std::vector<VerdictRecord> load_verdict_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  return read_verdict_log(in);
}

}  // namespace kbtriage
