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

#include "kbtriage/annotate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <nlohmann/json.hpp>
#include <set>

#include "kbtriage/error.hpp"
#include "kbtriage/random.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

std::string_view to_string(Consensus c) noexcept {
  switch (c) {
    case Consensus::kFalsePositiveCandidate: return "FALSE_POSITIVE_CANDIDATE";
    case Consensus::kGenuineCandidate: return "GENUINE_CANDIDATE";
    case Consensus::kNeedsManual: return "NEEDS_MANUAL";
  }
  return "UNKNOWN";
}

Consensus consensus_of(std::span<const JudgeLabel> labels) {
  if (labels.size() < 2) fail(Errc::kInvalidArgument, "at least two judges are required");
  const Label first = labels.front().label;
  for (const auto& l : labels) {
    if (l.label != first) return Consensus::kNeedsManual;
  }
  return first == Label::kFalsePositive ? Consensus::kFalsePositiveCandidate
                                        : Consensus::kGenuineCandidate;
}

PreLabel preannotate(const BugReport& report, std::span<const ModelClient* const> judges,
                     const TemplateSet& templates, const RetryPolicy& retry) {
  if (judges.size() < 2) fail(Errc::kInvalidArgument, "at least two judges are required");
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < judges.size(); ++i) {
    if (judges[i] == nullptr) fail(Errc::kInvalidArgument, "null judge");
    std::string id = judges[i]->model_id();
    if (std::count(ids.begin(), ids.end(), id) > 0 ||
        std::count_if(judges.begin(), judges.end(),
                      [&](const ModelClient* j) { return j->model_id() == id; }) > 1) {
      id += fmt::format("#{}", i);
    }
    ids.push_back(std::move(id));
  }
  const auto bundle = build_prompt(PromptStrategy::kBasicZeroShot, report, {}, templates);

  std::vector<std::future<ParsedVerdict>> pending;
  pending.reserve(judges.size());
  for (const auto* judge : judges) {
    pending.push_back(std::async(std::launch::async, [&bundle, &retry, judge] {
      return parse_verdict(send_with_retry(*judge, bundle, retry).text);
    }));
  }
  PreLabel out;
  out.report = report.key();
  std::optional<std::string> failure;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    try {
      auto v = pending[i].get();
      out.judges.push_back({ids[i], v.label, std::move(v.explanation)});
    } catch (const std::exception& e) {
      if (!failure) failure = fmt::format("{}: {}", ids[i], e.what());
    }
  }
  if (failure) fail(Errc::kJudgeFailure, *failure);
  out.consensus = consensus_of(out.judges);
  return out;
}

void validate(const ManualVerdict& verdict) {
  if (verdict.round < 1) fail(Errc::kInvalidArgument, "round must be >= 1");
  if (text::trim(verdict.annotator_id).empty()) fail(Errc::kInvalidArgument, "empty annotator id");
  if (const auto* ex = std::get_if<Excluded>(&verdict.decision);
      ex != nullptr && text::trim(ex->reason).empty()) {
    fail(Errc::kInvalidArgument, "exclusion without a reason");
  }
}

AgreementResult cohen_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) {
    fail(Errc::kLengthMismatch, fmt::format("{} vs {} labels", a.size(), b.size()));
  }
  if (a.empty()) fail(Errc::kEmptyInput, "no labels");
  std::map<std::string_view, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const double n = static_cast<double>(a.size());
  AgreementResult r;
  r.n = a.size();
  r.observed = static_cast<double>(agree) / n;
  for (const auto& [category, counts] : marginals) {
    r.expected += (static_cast<double>(counts.first) / n) * (static_cast<double>(counts.second) / n);
  }
  if (marginals.size() == 1) {
    r.expected = 1.0;
    r.kappa = 1.0;
    r.degenerate = true;
    return r;
  }
  r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  return r;
}

AgreementResult cohen_kappa(std::span<const Decision> a, std::span<const Decision> b) {
  std::vector<std::string> ca;
  std::vector<std::string> cb;
  ca.reserve(a.size());
  cb.reserve(b.size());
  for (const auto& d : a) ca.push_back(decision_category(d));
  for (const auto& d : b) cb.push_back(decision_category(d));
  return cohen_kappa(std::span<const std::string>(ca), std::span<const std::string>(cb));
}

AgreementResult round_agreement(std::span<const ManualVerdict> verdicts, int round,
                                std::string_view annotator_a, std::string_view annotator_b) {
  std::map<ReportKey, std::string> by_a;
  std::map<ReportKey, std::string> by_b;
  for (const auto& v : verdicts) {
    if (v.round != round) continue;
    if (v.annotator_id == annotator_a) by_a[v.report] = decision_category(v.decision);
    if (v.annotator_id == annotator_b) by_b[v.report] = decision_category(v.decision);
  }
  std::vector<std::string> a;
  std::vector<std::string> b;
  for (const auto& [key, label] : by_a) {
    if (auto it = by_b.find(key); it != by_b.end()) {
      a.push_back(label);
      b.push_back(it->second);
    }
  }
  return cohen_kappa(std::span<const std::string>(a), std::span<const std::string>(b));
}

std::map<ReportKey, Decision> merge_verdicts(std::span<const PreLabel> prelabels,
                                             std::span<const ManualVerdict> manual) {
  std::map<ReportKey, std::vector<const ManualVerdict*>> by_report;
  for (const auto& v : manual) {
    validate(v);
    by_report[v.report].push_back(&v);
  }
  for (const auto& p : prelabels) {
    if (!by_report.contains(p.report)) fail(Errc::kMissingManualVerdict, p.report.str());
  }
  std::map<ReportKey, Decision> out;
  for (auto& [key, verdicts] : by_report) {
    const int top = (*std::max_element(verdicts.begin(), verdicts.end(), [](auto* x, auto* y) {
                      return x->round < y->round;
                    }))->round;
    std::vector<const ManualVerdict*> last;
    for (const auto* v : verdicts) {
      if (v->round == top) last.push_back(v);
    }
    std::stable_sort(last.begin(), last.end(),
                     [](auto* x, auto* y) { return x->annotator_id < y->annotator_id; });
    const std::string category = decision_category(last.front()->decision);
    const bool agree = std::all_of(last.begin(), last.end(), [&](const ManualVerdict* v) {
      return decision_category(v->decision) == category;
    });
    out.emplace(key, agree ? last.front()->decision
                           : Decision{Excluded{std::string(kUnresolvedDisagreement)}});
  }
  return out;
}

std::vector<std::vector<ReportKey>> split_batches(std::vector<ReportKey> keys,
                                                  std::span<const double> fractions,
                                                  std::uint64_t seed) {
  double total = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) fail(Errc::kInvalidArgument, "negative batch fraction");
    total += f;
  }
  if (total > 1.0 + 1e-9) fail(Errc::kInvalidArgument, "batch fractions exceed 1");
  std::sort(keys.begin(), keys.end());
  seeded_shuffle(std::span<ReportKey>(keys), seed);
  std::vector<std::vector<ReportKey>> out;
  std::size_t pos = 0;
  for (double f : fractions) {
    const auto take = std::min(keys.size() - pos,
                               static_cast<std::size_t>(std::llround(f * static_cast<double>(keys.size()))));
    out.emplace_back(keys.begin() + static_cast<std::ptrdiff_t>(pos),
                     keys.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  out.emplace_back(keys.begin() + static_cast<std::ptrdiff_t>(pos), keys.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Accepts a category or a subcategory name; subcategories map to their parent.
std::optional<RootCauseCategory> root_cause_field(const nlohmann::json& j) {
  if (!j.contains("root_cause") || j.at("root_cause").is_null()) return std::nullopt;
  const auto value = j.at("root_cause").get<std::string>();
  if (auto c = parse_category(value)) return c;
  if (auto s = parse_subcategory(value)) return parent_category(*s);
  fail(Errc::kMalformedRecord, "unknown root cause '" + value + "'");
}

}  // namespace

std::string to_json_line(const ManualVerdict& verdict) {
  nlohmann::ordered_json j;
  j["report_id"] = verdict.report.str();
  j["annotator_id"] = verdict.annotator_id;
  j["label"] = decision_category(verdict.decision);
  if (const auto* ex = std::get_if<Excluded>(&verdict.decision)) j["exclusion_reason"] = ex->reason;
  j["rationale"] = verdict.rationale;
  j["round"] = verdict.round;
  j["timestamp"] = format_timestamp(verdict.timestamp);
  if (verdict.root_cause) j["root_cause"] = category_id(*verdict.root_cause);
  return j.dump();
}

ManualVerdict manual_verdict_from_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ManualVerdict v;
    const auto key = ReportKey::parse(j.at("report_id").get<std::string>());
    if (!key) fail(Errc::kMalformedRecord, "bad report_id");
    v.report = *key;
    v.annotator_id = j.at("annotator_id").get<std::string>();
    const auto label_text = j.at("label").get<std::string>();
    if (text::normalize_label(label_text) == "excluded") {
      v.decision = Excluded{j.value("exclusion_reason", std::string())};
    } else if (const auto label = parse_label(label_text)) {
      v.decision = *label;
    } else {
      fail(Errc::kMalformedRecord, "bad label '" + label_text + "'");
    }
    v.rationale = j.value("rationale", std::string());
    v.round = j.at("round").get<int>();
    v.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    v.root_cause = root_cause_field(j);
    validate(v);
    return v;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kMalformedRecord, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::kMalformedRecord) throw;
    fail(Errc::kMalformedRecord, e.what());
  }
}

namespace {

template <typename T, typename Parse>
std::vector<T> load_lines(const std::filesystem::path& path, Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(parse(line));
    } catch (const Error& e) {
      fail(e.code(), fmt::format("{}:{}: {}", path.string(), line_no, e.detail()));
    }
  }
  return out;
}

}  // namespace

std::vector<ManualVerdict> load_manual_verdicts(const std::filesystem::path& path) {
  return load_lines<ManualVerdict>(path, manual_verdict_from_json_line);
}

void append_manual_verdict(const std::filesystem::path& path, const ManualVerdict& verdict) {
  validate(verdict);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(Errc::kIo, "cannot append to " + path.string());
  out << to_json_line(verdict) << '\n';
  if (!out) fail(Errc::kIo, "write failed for " + path.string());
}

std::string to_json_line(const PreLabel& prelabel) {
  nlohmann::ordered_json j;
  j["report_id"] = prelabel.report.str();
  j["consensus"] = to_string(prelabel.consensus);
  auto judges = nlohmann::ordered_json::array();
  for (const auto& jl : prelabel.judges) {
    nlohmann::ordered_json o;
    o["judge_id"] = jl.judge_id;
    o["label"] = to_string(jl.label);
    o["justification"] = jl.justification;
    judges.push_back(std::move(o));
  }
  j["judges"] = std::move(judges);
  return j.dump();
}

PreLabel prelabel_from_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    PreLabel p;
    const auto key = ReportKey::parse(j.at("report_id").get<std::string>());
    if (!key) fail(Errc::kMalformedRecord, "bad report_id");
    p.report = *key;
    for (const auto& o : j.at("judges")) {
      const auto label = parse_label(o.at("label").get<std::string>());
      if (!label) fail(Errc::kMalformedRecord, "bad judge label");
      p.judges.push_back({o.at("judge_id").get<std::string>(), *label,
                          o.at("justification").get<std::string>()});
    }
    p.consensus = consensus_of(p.judges);
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kMalformedRecord, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::kMalformedRecord) throw;
    fail(Errc::kMalformedRecord, e.what());
  }
}

std::vector<PreLabel> load_prelabels(const std::filesystem::path& path) {
  return load_lines<PreLabel>(path, prelabel_from_json_line);
}

std::vector<LabelRecord> label_records(const std::map<ReportKey, Decision>& merged,
                                       std::span<const ManualVerdict> manual) {
  std::map<ReportKey, std::vector<const ManualVerdict*>> by_report;
  for (const auto& v : manual) by_report[v.report].push_back(&v);
  std::vector<LabelRecord> out;
  for (const auto& [key, decision] : merged) {
    LabelRecord r{key, decision, std::nullopt};
    const auto* label = std::get_if<Label>(&decision);
    if (label != nullptr && *label == Label::kFalsePositive) {
      if (auto it = by_report.find(key); it != by_report.end()) {
        auto verdicts = it->second;
        std::stable_sort(verdicts.begin(), verdicts.end(), [](auto* x, auto* y) {
          if (x->round != y->round) return x->round > y->round;
          return x->annotator_id < y->annotator_id;
        });
        const int top = verdicts.front()->round;
        for (const auto* v : verdicts) {
          if (v->round != top) break;
          if (v->root_cause) {
            r.root_cause = v->root_cause;
            break;
          }
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json_line(const LabelRecord& record) {
  nlohmann::ordered_json j;
  j["report_id"] = record.report.str();
  j["label"] = decision_category(record.decision);
  if (const auto* ex = std::get_if<Excluded>(&record.decision)) j["exclusion_reason"] = ex->reason;
  j["root_cause"] = record.root_cause ? nlohmann::ordered_json(category_id(*record.root_cause))
                                      : nlohmann::ordered_json(nullptr);
  return j.dump();
}

LabelRecord label_record_from_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    LabelRecord r;
    const auto key = ReportKey::parse(j.at("report_id").get<std::string>());
    if (!key) fail(Errc::kMalformedRecord, "bad report_id");
    r.report = *key;
    const auto label_text = j.at("label").get<std::string>();
    if (text::normalize_label(label_text) == "excluded") {
      r.decision = Excluded{j.value("exclusion_reason", std::string("excluded"))};
    } else if (const auto label = parse_label(label_text)) {
      r.decision = *label;
    } else {
      fail(Errc::kMalformedRecord, "bad label '" + label_text + "'");
    }
    r.root_cause = root_cause_field(j);
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kMalformedRecord, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::kMalformedRecord) throw;
    fail(Errc::kMalformedRecord, e.what());
  }
}

std::vector<LabelRecord> load_label_records(const std::filesystem::path& path) {
  return load_lines<LabelRecord>(path, label_record_from_json_line);
}

void save_label_records(const std::filesystem::path& path, std::span<const LabelRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  for (const auto& r : records) out << to_json_line(r) << '\n';
  if (!out) fail(Errc::kIo, "write failed for " + path.string());
}

}  // namespace kbtriage
