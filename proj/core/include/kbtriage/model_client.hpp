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

#include <array>
#include <chrono>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/prompt.hpp"
#include "kbtriage/retrieval.hpp"
#include "kbtriage/verdict.hpp"

namespace kbtriage {

struct ClientResponse {
  std::string text;
  double latency_ms = 0.0;
};

/// Language-model client. Implementations are called concurrently and must
/// throw Error(kClientFailure) on transport problems.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string model_id() const = 0;
  virtual ClientResponse send(const PromptBundle& bundle) const = 0;
};

/// Deterministic offline client. Labels FALSE_POSITIVE iff the bundle's
/// report text contains one of `kFalsePositiveCues` (ASCII case-insensitive),
/// else GENUINE_BUG. The explanation names the first matching cue, or states
/// that none matched. Latency is always reported as 0.
class MockModelClient final : public ModelClient {
 public:
  static constexpr std::array<std::string_view, 12> kFalsePositiveCues{
      "works after replacing", "misconfigured",       "resolved invalid",
      "firmware update",       "bios update",         "not a kernel bug",
      "user error",            "expected behavior",   "expected behaviour",
      "working as intended",   "unsupported configuration", "hardware fault"};

  std::string model_id() const override { return "mock-rules-v1"; }
  ClientResponse send(const PromptBundle& bundle) const override;
};

struct ChatClientConfig {
  HttpEndpointConfig endpoint;  // POST {endpoint}/chat/completions
  double temperature = 0.0;
  /// A non-zero temperature is rejected unless this is set.
  bool allow_nonzero_temperature = false;
};

/// OpenAI-compatible chat-completions client.
class HttpModelClient final : public ModelClient {
 public:
  explicit HttpModelClient(ChatClientConfig config);

  std::string model_id() const override { return config_.endpoint.model; }
  ClientResponse send(const PromptBundle& bundle) const override;

 private:
  ChatClientConfig config_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to sleep_for
};

/// Retries only kClientFailure; the last failure propagates.
ClientResponse send_with_retry(const ModelClient& client, const PromptBundle& bundle,
                               const RetryPolicy& policy = {});

/// build_prompt, send_with_retry, parse_verdict. Parse failures propagate as
/// Error(kParseFailure) and are never retried.
Verdict classify(const BugReport& report, PromptStrategy strategy, const ModelClient& client,
                 const PromptContext& context,
                 const TemplateSet& templates = TemplateSet::builtin(),
                 const RetryPolicy& retry = {});

/// Supplies per-report context, e.g. retrieval results for RAG.
using ContextProvider = std::function<PromptContext(const BugReport&)>;

struct BatchOptions {
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
};

/// Classifies every report; records come back in input order. Parse failures
/// become records without a label. Other errors abort the batch.
std::vector<VerdictRecord> classify_batch(std::span<const BugReport* const> reports,
                                          PromptStrategy strategy, const ModelClient& client,
                                          const ContextProvider& context,
                                          const TemplateSet& templates = TemplateSet::builtin(),
                                          const BatchOptions& options = {});

}  // namespace kbtriage
