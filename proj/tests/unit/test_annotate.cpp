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

#include <gtest/gtest.h>

#include <set>

#include "kbtriage/annotate.hpp"
#include "kbtriage/error.hpp"
#include "test_support.hpp"

namespace kbtriage {
namespace {

// κ from a 2x2 contingency table, computed by hand from the definition.
struct Table2 {
  int yy, yn, ny, nn;
};

std::pair<std::vector<std::string>, std::vector<std::string>> expand(Table2 t) {
  std::vector<std::string> a, b;
  auto push = [&](int count, const char* x, const char* y) {
    for (int i = 0; i < count; ++i) {
      a.emplace_back(x);
      b.emplace_back(y);
    }
  };
  push(t.yy, "FP", "FP");
  push(t.yn, "FP", "GB");
  push(t.ny, "GB", "FP");
  push(t.nn, "GB", "GB");
  return {a, b};
}

TEST(Kappa, HandComputedTable) {
  // p_o = 35/50 = 0.7; margins 25/25 and 30/20 give p_e = 0.5*0.6 + 0.5*0.4 = 0.5.
  const auto [a, b] = expand({20, 5, 10, 15});
  const auto r = cohen_kappa(a, b);
  EXPECT_NEAR(r.observed, 0.70, 1e-12);
  EXPECT_NEAR(r.expected, 0.50, 1e-12);
  EXPECT_NEAR(r.kappa, 0.40, 1e-12);
  EXPECT_EQ(r.n, 50u);
  EXPECT_FALSE(r.degenerate);
}

TEST(Kappa, IdenticalSequencesAgreePerfectly) {
  const std::vector<std::string> a{"x", "y", "x", "z"};
  EXPECT_DOUBLE_EQ(cohen_kappa(a, a).kappa, 1.0);
}

TEST(Kappa, ConstantRatersAreDegenerate) {
  const std::vector<std::string> a{"x", "x", "x"};
  const auto r = cohen_kappa(a, a);
  EXPECT_DOUBLE_EQ(r.kappa, 1.0);
  EXPECT_TRUE(r.degenerate);
}

TEST(Kappa, SymmetricAndRelabelInvariant) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> cats{"a", "b", "c"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> a, b, pa, pb;
    for (int i = 0; i < 40; ++i) {
      a.push_back(cats[rng() % 3]);
      b.push_back(rng() % 4 == 0 ? cats[rng() % 3] : a.back());
    }
    auto relabel = [](const std::string& s) { return s == "a" ? "c" : s == "b" ? "a" : "b"; };
    for (auto& s : a) pa.push_back(relabel(s));
    for (auto& s : b) pb.push_back(relabel(s));
    const auto ab = cohen_kappa(a, b);
    EXPECT_NEAR(ab.kappa, cohen_kappa(b, a).kappa, 1e-12);
    EXPECT_NEAR(ab.kappa, cohen_kappa(pa, pb).kappa, 1e-12);
  }
}

TEST(Kappa, LengthMismatchAndEmpty) {
  const std::vector<std::string> a{"x"}, b{"x", "y"}, e;
  EXPECT_THROW(cohen_kappa(a, b), Error);
  EXPECT_THROW(cohen_kappa(e, e), Error);
}

class ScriptedClient final : public ModelClient {
 public:
  ScriptedClient(std::string id, std::string reply, bool fail = false)
      : id_(std::move(id)), reply_(std::move(reply)), fail_(fail) {}
  std::string model_id() const override { return id_; }
  ClientResponse send(const PromptBundle& bundle) const override {
    EXPECT_EQ(bundle.strategy, PromptStrategy::kBasicZeroShot);
    if (fail_) fail(Errc::kClientFailure, "timeout");
    return {reply_, 1.0};
  }

 private:
  std::string id_;
  std::string reply_;
  bool fail_;
};

RetryPolicy no_sleep() {
  RetryPolicy p;
  p.sleep = [](std::chrono::milliseconds) {};
  return p;
}

TEST(Preannotate, ConsensusRules) {
  const auto report = testing::bugzilla_report("1", "t", "d", make_timestamp(2022, 1, 1));
  ScriptedClient fp1("j1", "cause is outside the kernel\nLABEL: FALSE_POSITIVE");
  ScriptedClient fp2("j2", "configuration problem\nLABEL: FALSE_POSITIVE");
  ScriptedClient gb("j3", "null deref in driver\nLABEL: GENUINE_BUG");
  const ModelClient* unanimous[] = {&fp1, &fp2};
  const auto p = preannotate(report, unanimous, TemplateSet::builtin(), no_sleep());
  EXPECT_EQ(p.consensus, Consensus::kFalsePositiveCandidate);
  ASSERT_EQ(p.judges.size(), 2u);
  EXPECT_EQ(p.judges[0].justification, "cause is outside the kernel");
  const ModelClient* split[] = {&fp1, &gb};
  EXPECT_EQ(preannotate(report, split, TemplateSet::builtin(), no_sleep()).consensus,
            Consensus::kNeedsManual);
}

TEST(Preannotate, JudgeTimeoutIsJudgeFailure) {
  const auto report = testing::bugzilla_report("1", "t", "d", make_timestamp(2022, 1, 1));
  ScriptedClient ok("j1", "x\nLABEL: GENUINE_BUG");
  ScriptedClient down("j2", "", true);
  const ModelClient* judges[] = {&ok, &down};
  try {
    preannotate(report, judges, TemplateSet::builtin(), no_sleep());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kJudgeFailure);
  }
}

TEST(Preannotate, ConsensusIsUnanimousOrManual) {
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<JudgeLabel> labels;
    for (int i = 0; i < 4; ++i) {
      labels.push_back({"j", (mask >> i) & 1 ? Label::kFalsePositive : Label::kGenuineBug, "x"});
    }
    const bool all_equal = mask == 0 || mask == 15;
    EXPECT_EQ(consensus_of(labels) != Consensus::kNeedsManual, all_equal);
  }
}

ManualVerdict verdict(const std::string& id, const std::string& who, Decision d, int round) {
  ManualVerdict v;
  v.report = {Source::kBugzilla, id};
  v.annotator_id = who;
  v.decision = std::move(d);
  v.round = round;
  v.timestamp = make_timestamp(2024, 1, 1);
  return v;
}

TEST(Merge, MissingManualVerdictIsAnError) {
  PreLabel p;
  p.report = {Source::kBugzilla, "9"};
  p.consensus = Consensus::kGenuineCandidate;
  const std::vector<PreLabel> pre{p};
  try {
    merge_verdicts(pre, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingManualVerdict);
  }
}

TEST(Merge, LaterRoundWinsAndDisagreementExcludes) {
  const std::vector<ManualVerdict> manual{
      verdict("1", "a", Label::kGenuineBug, 1),
      verdict("1", "b", Label::kFalsePositive, 1),
      verdict("1", "c", Label::kFalsePositive, 2),
      verdict("2", "a", Label::kGenuineBug, 1),
      verdict("2", "b", Label::kFalsePositive, 1),
      verdict("3", "a", Excluded{"insufficient discussion"}, 1),
  };
  const auto merged = merge_verdicts({}, manual);
  EXPECT_EQ(merged.at({Source::kBugzilla, "1"}), Decision{Label::kFalsePositive});
  EXPECT_EQ(merged.at({Source::kBugzilla, "2"}),
            Decision{Excluded{std::string(kUnresolvedDisagreement)}});
  EXPECT_EQ(merged.at({Source::kBugzilla, "3"}), Decision{Excluded{"insufficient discussion"}});
}

TEST(Merge, LabelRecordsCarryRootCause) {
  auto v = verdict("1", "a", Label::kFalsePositive, 1);
  v.root_cause = RootCauseCategory::kIncorrectUsage;
  const std::vector<ManualVerdict> manual{v, verdict("1", "b", Label::kFalsePositive, 1)};
  const auto records = label_records(merge_verdicts({}, manual), manual);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].root_cause, RootCauseCategory::kIncorrectUsage);
  const auto line = to_json_line(records[0]);
  EXPECT_EQ(label_record_from_json_line(line), records[0]);
}

TEST(Validate, RejectsBadVerdicts) {
  EXPECT_THROW(validate(verdict("1", "", Label::kGenuineBug, 1)), Error);
  EXPECT_THROW(validate(verdict("1", "a", Label::kGenuineBug, 0)), Error);
  EXPECT_THROW(validate(verdict("1", "a", Excluded{""}, 1)), Error);
  EXPECT_NO_THROW(validate(verdict("1", "a", Excluded{"spam"}, 1)));
}

TEST(VerdictLog, AppendOnlyRoundTrip) {
  testing::TempDir dir("annotate");
  auto v1 = verdict("1", "a", Label::kFalsePositive, 1);
  v1.rationale = "firmware";
  v1.root_cause = RootCauseCategory::kExternalDependencyIssues;
  const auto v2 = verdict("2", "b", Excluded{"duplicate"}, 2);
  append_manual_verdict(dir / "log.jsonl", v1);
  append_manual_verdict(dir / "log.jsonl", v2);
  const auto back = load_manual_verdicts(dir / "log.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], v1);
  EXPECT_EQ(back[1], v2);
}

TEST(VerdictLog, RootCauseSubcategoryMapsToParent) {
  const auto v = manual_verdict_from_json_line(
      R"({"report_id":"bugzilla:5","annotator_id":"a","label":"FALSE_POSITIVE","rationale":"",)"
      R"("round":1,"timestamp":"2024-01-01T00:00:00Z","root_cause":"FirmwareIssues"})");
  EXPECT_EQ(v.root_cause, RootCauseCategory::kExternalDependencyIssues);
}

TEST(Batches, PartitionIsDeterministicAndExhaustive) {
  std::vector<ReportKey> keys;
  for (int i = 0; i < 100; ++i) keys.push_back({Source::kBugzilla, std::to_string(1000 + i)});
  const std::vector<double> fractions{0.03, 0.15};
  const auto a = split_batches(keys, fractions, 5);
  const auto b = split_batches(keys, fractions, 5);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].size(), 3u);
  EXPECT_EQ(a[1].size(), 15u);
  EXPECT_EQ(a[2].size(), 82u);
  std::set<ReportKey> seen;
  for (const auto& batch : a) seen.insert(batch.begin(), batch.end());
  EXPECT_EQ(seen.size(), 100u);
}

}  // namespace
}  // namespace kbtriage
