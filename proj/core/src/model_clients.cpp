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

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "kbtriage/digest.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/http.hpp"
#include "kbtriage/model_client.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

ClientResponse MockModelClient::send(const PromptBundle& bundle) const {
  for (auto cue : kFalsePositiveCues) {
    if (text::icontains(bundle.report_text, cue)) {
      return {fmt::format("Rule-based mock verdict: the report matches the cue \"{}\".\n{}", cue,
                          render_marker(Label::kFalsePositive)),
              0.0};
    }
  }
  return {fmt::format("Rule-based mock verdict: no false-positive cue matched.\n{}",
                      render_marker(Label::kGenuineBug)),
          0.0};
}

HttpModelClient::HttpModelClient(ChatClientConfig config) : config_(std::move(config)) {
  if (config_.endpoint.endpoint.empty()) fail(Errc::kConfig, "model endpoint is empty");
  if (config_.endpoint.model.empty()) fail(Errc::kConfig, "model name is empty");
  if (config_.temperature != 0.0 && !config_.allow_nonzero_temperature) {
    fail(Errc::kConfig, "temperature must be 0 unless explicitly overridden");
  }
}

ClientResponse HttpModelClient::send(const PromptBundle& bundle) const {
  const nlohmann::json request = {
      {"model", config_.endpoint.model},
      {"temperature", config_.temperature},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", bundle.system_text}},
                              {{"role", "user"}, {"content", bundle.user_text}}})}};
  http::Headers headers;
  if (!config_.endpoint.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.endpoint.api_key);
  }
  std::string url = config_.endpoint.endpoint;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  const auto start = std::chrono::steady_clock::now();
  const auto response =
      http::post_json(url, request.dump(), headers, config_.endpoint.timeout_seconds);
  const double latency =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (response.status < 200 || response.status >= 300) {
    fail(Errc::kClientFailure, fmt::format("HTTP {} from {}", response.status, url));
  }
  try {
    const auto body = nlohmann::json::parse(response.body);
    return {body.at("choices").at(0).at("message").at("content").get<std::string>(), latency};
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kClientFailure, fmt::format("unexpected chat response: {}", e.what()));
  }
}

ClientResponse send_with_retry(const ModelClient& client, const PromptBundle& bundle,
                               const RetryPolicy& policy) {
  const int attempts = std::max(policy.max_attempts, 1);
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return client.send(bundle);
    } catch (const Error& e) {
      if (e.code() != Errc::kClientFailure || attempt >= attempts) throw;
    }
    if (policy.sleep) {
      policy.sleep(backoff);
    } else {
      std::this_thread::sleep_for(backoff);
    }
    backoff = std::chrono::milliseconds(
        static_cast<std::int64_t>(std::llround(static_cast<double>(backoff.count()) * policy.multiplier)));
  }
}

Verdict classify(const BugReport& report, PromptStrategy strategy, const ModelClient& client,
                 const PromptContext& context, const TemplateSet& templates,
                 const RetryPolicy& retry) {
  const auto bundle = build_prompt(strategy, report, context, templates);
  auto response = send_with_retry(client, bundle, retry);
  auto parsed = parse_verdict(response.text);
  return {report.key(),          parsed.label, std::move(parsed.explanation),
          std::move(response.text), strategy,  client.model_id(),
          response.latency_ms};
}

std::vector<VerdictRecord> classify_batch(std::span<const BugReport* const> reports,
                                          PromptStrategy strategy, const ModelClient& client,
                                          const ContextProvider& context,
                                          const TemplateSet& templates,
                                          const BatchOptions& options) {
  std::vector<VerdictRecord> out(reports.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= reports.size()) return;
      const BugReport& report = *reports[i];
      try {
        const auto bundle = build_prompt(strategy, report, context ? context(report) : PromptContext{},
                                         templates);
        const auto response = send_with_retry(client, bundle, options.retry);
        VerdictRecord record{report.key().str(), strategy, client.model_id(), std::nullopt, {},
                             sha256_hex(response.text), response.latency_ms};
        try {
          auto parsed = parse_verdict(response.text);
          record.label = parsed.label;
          record.explanation = std::move(parsed.explanation);
        } catch (const Error& e) {
          if (e.code() != Errc::kParseFailure) throw;
          record.explanation = e.detail();
        }
        out[i] = std::move(record);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(options.max_in_flight, 1, std::max<std::size_t>(reports.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace kbtriage
