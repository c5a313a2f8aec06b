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

#include <atomic>
#include <fstream>
#include <functional>
#include <sstream>

#include "kbtriage/error.hpp"
#include "kbtriage/model_client.hpp"
#include "kbtriage/prompt.hpp"
#include "kbtriage/verdict.hpp"
#include "test_support.hpp"

namespace kbtriage {
namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no kbtriage::Error thrown";
  return Errc::kIo;
}

PromptContext full_context() {
  PromptContext c;
  c.guidelines = "- Security: external dependency issues dominate (75%)";
  c.exemplars = default_exemplars();
  c.retrieved = std::vector<RetrievedExample>{
      {{Source::kBugzilla, "1"}, "genuine neighbour text", Label::kGenuineBug, 0.9},
      {{Source::kBugzilla, "2"}, "false positive neighbour text", Label::kFalsePositive, 0.8},
  };
  return c;
}

TEST(Prompt, EveryStrategyEmbedsReportAndMarkerInstruction) {
  const auto ctx = full_context();
  for (auto s : kPromptStrategies) {
    const auto b = build_prompt(s, "REPORT-BODY-42", ctx);
    EXPECT_EQ(b.strategy, s);
    EXPECT_NE(b.user_text.find("REPORT-BODY-42"), std::string::npos) << to_string(s);
    EXPECT_NE((b.system_text + b.user_text).find("LABEL: GENUINE_BUG"), std::string::npos);
    EXPECT_EQ(b, build_prompt(s, "REPORT-BODY-42", ctx));
  }
}

TEST(Prompt, StrategySpecificContent) {
  const auto ctx = full_context();
  const auto enhanced = build_prompt(PromptStrategy::kEnhancedZeroShot, "r", ctx);
  EXPECT_NE((enhanced.system_text + enhanced.user_text).find(*ctx.guidelines), std::string::npos);

  const auto cot = build_prompt(PromptStrategy::kChainOfThought, "r", ctx);
  std::size_t pos = 0;
  for (auto step : kChainOfThoughtSteps) {
    const auto at = cot.user_text.find(step, pos);
    ASSERT_NE(at, std::string::npos) << step;
    pos = at;
  }

  const auto few = build_prompt(PromptStrategy::kFewShot, "r", ctx);
  ASSERT_EQ(few.exemplars.size(), 2u);
  EXPECT_NE(few.exemplars[0].label, few.exemplars[1].label);
  for (const auto& e : few.exemplars) EXPECT_NE(few.user_text.find(e.report_text), std::string::npos);

  const auto rag = build_prompt(PromptStrategy::kRag, "r", ctx);
  EXPECT_NE(rag.user_text.find("genuine neighbour text"), std::string::npos);
  EXPECT_NE(rag.user_text.find("false positive neighbour text"), std::string::npos);
  EXPECT_EQ(rag.retrieved, *ctx.retrieved);
}

TEST(Prompt, MissingContext) {
  PromptContext empty;
  EXPECT_EQ(code_of([&] { build_prompt(PromptStrategy::kEnhancedZeroShot, "r", empty); }),
            Errc::kMissingContext);
  EXPECT_EQ(code_of([&] { build_prompt(PromptStrategy::kFewShot, "r", empty); }), Errc::kMissingContext);
  EXPECT_EQ(code_of([&] { build_prompt(PromptStrategy::kRag, "r", empty); }), Errc::kMissingContext);
  auto same_class = full_context();
  same_class.exemplars[1].label = same_class.exemplars[0].label;
  EXPECT_EQ(code_of([&] { build_prompt(PromptStrategy::kFewShot, "r", same_class); }),
            Errc::kMissingContext);
  auto unbalanced = full_context();
  unbalanced.retrieved->pop_back();
  EXPECT_EQ(code_of([&] { build_prompt(PromptStrategy::kRag, "r", unbalanced); }), Errc::kMissingContext);
  EXPECT_NO_THROW(build_prompt(PromptStrategy::kBasicZeroShot, "r", empty));
  EXPECT_NO_THROW(build_prompt(PromptStrategy::kChainOfThought, "r", empty));
}

TEST(Prompt, TemplateOverridesFromDirectory) {
  testing::TempDir dir("templates");
  std::ofstream(dir / "few_shot.txt") << "SYS\n%%\nUSER {report}\n{exemplars}\n";
  const auto set = TemplateSet::with_overrides(dir.path());
  const auto b = build_prompt(PromptStrategy::kFewShot, "abc", full_context(), set);
  EXPECT_EQ(b.system_text, "SYS");
  EXPECT_EQ(b.user_text.rfind("USER abc\n", 0), 0u);
  EXPECT_EQ(set.get(PromptStrategy::kRag).system, TemplateSet::builtin().get(PromptStrategy::kRag).system);
  EXPECT_EQ(code_of([] { PromptTemplate::parse("no separator"); }), Errc::kConfig);
}

TEST(Prompt, ReportTextOmitsResolution) {
  auto r = testing::bugzilla_report("1", "Oops in ext4", "trace", make_timestamp(2022, 1, 1),
                                    {{"dev@example.org", 1.0, "looks like bad RAM"}});
  r.resolution = "INVALID";
  const auto t = report_prompt_text(r);
  EXPECT_EQ(t.find("INVALID"), std::string::npos);
  EXPECT_NE(t.find("[dev@example.org] looks like bad RAM"), std::string::npos);
  EXPECT_NE(t.find("Component: File System/ext4"), std::string::npos);
}

TEST(Strategy, NamesRoundTrip) {
  for (auto s : kPromptStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_EQ(parse_strategy("Chain-of-Thought"), PromptStrategy::kChainOfThought);
  EXPECT_FALSE(parse_strategy("tree-of-thought").has_value());
}

ParseFailureKind failure_of(std::string_view raw) {
  try {
    parse_verdict(raw);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParseFailure);
    return *parse_failure_kind(e.detail());
  }
  ADD_FAILURE() << "parsed: " << raw;
  return ParseFailureKind::kNoLabel;
}

TEST(ParseVerdict, Cases) {
  auto v = parse_verdict("Firmware regression.\nLABEL: FALSE_POSITIVE");
  EXPECT_EQ(v.label, Label::kFalsePositive);
  EXPECT_EQ(v.explanation, "Firmware regression.");
  v = parse_verdict("reason\n**Label:** genuine bug\n");
  EXPECT_EQ(v.label, Label::kGenuineBug);
  // The last marker line decides.
  v = parse_verdict("LABEL: GENUINE_BUG\nchanged my mind\nLABEL: FALSE_POSITIVE");
  EXPECT_EQ(v.label, Label::kFalsePositive);
  EXPECT_EQ(v.explanation, "LABEL: GENUINE_BUG\nchanged my mind");
  EXPECT_EQ(failure_of(""), ParseFailureKind::kEmptyResponse);
  EXPECT_EQ(failure_of("  \n "), ParseFailureKind::kEmptyResponse);
  EXPECT_EQ(failure_of("it is a bug"), ParseFailureKind::kNoLabel);
  EXPECT_EQ(failure_of("x\nLABEL: GENUINE_BUG or FALSE_POSITIVE"), ParseFailureKind::kAmbiguous);
  EXPECT_EQ(failure_of("LABEL: FALSE_POSITIVE"), ParseFailureKind::kEmptyExplanation);
}

TEST(ParseVerdict, RenderedMarkerRoundTrips) {
  for (auto label : {Label::kGenuineBug, Label::kFalsePositive}) {
    EXPECT_EQ(parse_verdict("why\n" + render_marker(label)).label, label);
  }
}

TEST(MockClient, CueDecidesLabel) {
  const MockModelClient client;
  auto r = testing::bugzilla_report("1", "t", "Closed as resolved invalid by maintainer",
                                    make_timestamp(2022, 1, 1));
  const auto v = classify(r, PromptStrategy::kBasicZeroShot, client, {});
  EXPECT_EQ(v.label, Label::kFalsePositive);
  EXPECT_NE(v.explanation.find("resolved invalid"), std::string::npos);
  r.description = "NULL pointer dereference in ext4_fill_super";
  EXPECT_EQ(classify(r, PromptStrategy::kBasicZeroShot, client, {}).label, Label::kGenuineBug);
}

class FlakyClient final : public ModelClient {
 public:
  FlakyClient(int failures, Errc code) : failures_(failures), code_(code) {}
  std::string model_id() const override { return "flaky"; }
  ClientResponse send(const PromptBundle&) const override {
    if (calls_.fetch_add(1) < failures_) fail(code_, "boom");
    return {"ok\nLABEL: GENUINE_BUG", 2.0};
  }
  int calls() const { return calls_.load(); }

 private:
  int failures_;
  Errc code_;
  mutable std::atomic<int> calls_{0};
};

TEST(Retry, OnlyClientFailuresAreRetried) {
  std::vector<std::chrono::milliseconds> sleeps;
  RetryPolicy policy;
  policy.max_attempts = 3;
  policy.initial_backoff = std::chrono::milliseconds(10);
  policy.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };

  FlakyClient twice(2, Errc::kClientFailure);
  EXPECT_EQ(send_with_retry(twice, {}, policy).text, "ok\nLABEL: GENUINE_BUG");
  EXPECT_EQ(twice.calls(), 3);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(10),
                                                            std::chrono::milliseconds(20)}));

  FlakyClient always(10, Errc::kClientFailure);
  EXPECT_EQ(code_of([&] { send_with_retry(always, {}, policy); }), Errc::kClientFailure);
  EXPECT_EQ(always.calls(), 3);

  FlakyClient config(1, Errc::kConfig);
  EXPECT_EQ(code_of([&] { send_with_retry(config, {}, policy); }), Errc::kConfig);
  EXPECT_EQ(config.calls(), 1);
}

class EchoClient final : public ModelClient {
 public:
  std::string model_id() const override { return "echo"; }
  ClientResponse send(const PromptBundle& b) const override {
    if (b.report_text.find("garbled") != std::string::npos) return {"no marker here", 0.0};
    return {"saw it\n" + render_marker(b.report_text.find("odd") != std::string::npos
                                           ? Label::kFalsePositive
                                           : Label::kGenuineBug),
            0.0};
  }
};

TEST(Batch, PreservesOrderAndRecordsParseFailures) {
  std::vector<BugReport> rs;
  for (int i = 0; i < 20; ++i) {
    rs.push_back(testing::bugzilla_report(std::to_string(i), "t",
                                          i == 7 ? "garbled" : (i % 2 ? "odd" : "even"),
                                          make_timestamp(2022, 1, 1)));
  }
  std::vector<const BugReport*> ptrs;
  for (const auto& r : rs) ptrs.push_back(&r);
  const EchoClient client;
  BatchOptions opts;
  opts.max_in_flight = 6;
  const auto records = classify_batch(ptrs, PromptStrategy::kBasicZeroShot, client, nullptr,
                                      TemplateSet::builtin(), opts);
  ASSERT_EQ(records.size(), 20u);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(records[i].report_id, "bugzilla:" + std::to_string(i));
    if (i == 7) {
      EXPECT_FALSE(records[i].label.has_value());
      EXPECT_EQ(parse_failure_kind(records[i].explanation), ParseFailureKind::kNoLabel);
    } else {
      EXPECT_EQ(records[i].label, i % 2 ? Label::kFalsePositive : Label::kGenuineBug);
    }
    EXPECT_EQ(records[i].raw_response_digest.size(), 64u);
  }
  opts.max_in_flight = 1;
  EXPECT_EQ(records, classify_batch(ptrs, PromptStrategy::kBasicZeroShot, client, nullptr,
                                    TemplateSet::builtin(), opts));
}

TEST(Batch, MissingContextAbortsBatch) {
  const auto r = testing::bugzilla_report("1", "t", "d", make_timestamp(2022, 1, 1));
  const BugReport* ptrs[] = {&r};
  const MockModelClient client;
  EXPECT_EQ(code_of([&] { classify_batch(ptrs, PromptStrategy::kRag, client, nullptr); }),
            Errc::kMissingContext);
}

TEST(VerdictLog, RoundTrip) {
  std::vector<VerdictRecord> records{
      {"bugzilla:1", PromptStrategy::kRag, "m", Label::kFalsePositive, "why", std::string(64, 'a'), 1.5},
      {"syzkaller:abc", PromptStrategy::kChainOfThought, "m", std::nullopt, "NoLabel: x",
       std::string(64, 'b'), 0.0},
  };
  std::stringstream s;
  write_verdict_log(s, records);
  EXPECT_EQ(read_verdict_log(s), records);
  EXPECT_THROW(verdict_record_from_json_line("{}"), Error);
}

}  // namespace
}  // namespace kbtriage
