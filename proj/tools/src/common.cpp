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

#include "commands.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/stats.hpp"

namespace kbtriage::cli {

std::filesystem::path require_path(const Context& ctx, const OptPath& flag,
                                   std::string_view config_key, std::string_view what) {
  if (auto p = optional_path(ctx, flag, config_key)) return *p;
  throw UsageError(fmt::format("{} is required (flag or config key {})", what, config_key));
}

std::optional<std::filesystem::path> optional_path(const Context& ctx, const OptPath& flag,
                                                   std::string_view config_key) {
  if (flag) return flag;
  return ctx.config.path(config_key);
}

TimeWindow configured_window(const Context& ctx) {
  TimeWindow w = TimeWindow::study_default();
  if (auto s = ctx.config.get("window.start")) w.start = parse_date(*s);
  if (auto e = ctx.config.get("window.end")) w.end = parse_date(*e);
  if (w.end < w.start) fail(Errc::kConfig, "window.end precedes window.start");
  return w;
}

ComponentMap configured_component_map(const Context& ctx) {
  if (auto p = ctx.config.path("component_map.file")) return ComponentMap::load(*p);
  return ComponentMap::builtin();
}

TemplateSet configured_templates(const Context& ctx) {
  if (auto p = ctx.config.path("templates.dir")) return TemplateSet::with_overrides(*p);
  return TemplateSet::builtin();
}

std::vector<Exemplar> configured_exemplars(const Context& ctx) {
  if (auto p = ctx.config.path("exemplars.file")) return load_exemplars(*p);
  return default_exemplars();
}

std::size_t configured_max_in_flight(const Context& ctx) {
  const auto v = ctx.config.get_int("concurrency.max_in_flight", 4);
  if (v < 1) fail(Errc::kConfig, "concurrency.max_in_flight must be positive");
  return static_cast<std::size_t>(v);
}

RetryPolicy configured_retry(const Context& ctx) {
  RetryPolicy policy;
  policy.max_attempts = static_cast<int>(ctx.config.get_int("retry.max_attempts", 3));
  return policy;
}

std::unique_ptr<Embedder> make_embedder(const Context& ctx, bool mock) {
  if (mock) return std::make_unique<MockEmbedder>();
  const auto endpoint = ctx.config.get("embed.endpoint");
  if (!endpoint) throw UsageError("no embedder: pass --mock-embedder or set embed.endpoint");
  HttpEndpointConfig cfg;
  cfg.endpoint = *endpoint;
  cfg.model = ctx.config.get_or("embed.model", "");
  cfg.api_key = ctx.config.get("embed.api_key").value_or(process_env("EMBED_API_KEY").value_or(""));
  cfg.timeout_seconds = static_cast<int>(ctx.config.get_int("embed.timeout_seconds", 60));
  const auto dim = ctx.config.get_int("embed.dim", 0);
  if (dim <= 0) fail(Errc::kConfig, "embed.dim must be set to the model's dimension");
  return std::make_unique<HttpEmbedder>(std::move(cfg), static_cast<std::size_t>(dim));
}

std::unique_ptr<ModelClient> make_client(const Context& ctx, bool mock) {
  if (mock) return std::make_unique<MockModelClient>();
  const auto endpoint = ctx.config.get("model.endpoint");
  if (!endpoint) throw UsageError("no model client: pass --mock-client or set model.endpoint");
  ChatClientConfig cfg;
  cfg.endpoint.endpoint = *endpoint;
  cfg.endpoint.model = ctx.config.get_or("model.name", "");
  cfg.endpoint.api_key =
      ctx.config.get("model.api_key").value_or(process_env("MODEL_API_KEY").value_or(""));
  cfg.endpoint.timeout_seconds = static_cast<int>(ctx.config.get_int("model.timeout_seconds", 120));
  cfg.temperature = ctx.config.get_double("model.temperature", 0.0);
  cfg.allow_nonzero_temperature = ctx.config.get_bool("model.allow_nonzero_temperature", false);
  return std::make_unique<HttpModelClient>(std::move(cfg));
}

LabeledSet load_labeled_set(const Context& ctx, const std::filesystem::path& corpus_path,
                            const std::filesystem::path& labels_path) {
  if (!std::filesystem::exists(labels_path)) {
    throw UsageError("labels file not found: " + labels_path.string());
  }
  LabeledSet set{load_corpus(corpus_path, configured_window(ctx)), load_label_records(labels_path),
                 {}, {}, {}, 0};
  std::map<ReportKey, const LabelRecord*> by_key;
  for (const auto& r : set.labels) by_key[r.report] = &r;
  for (const auto& [key, record] : by_key) {
    const auto* report = set.corpus.find(key);
    if (report == nullptr) {
      ++set.unknown_labels;
      continue;
    }
    const auto* label = std::get_if<Label>(&record->decision);
    if (label == nullptr) continue;
    set.reports.push_back(report);
    set.truth.push_back(*label);
    set.root_causes.push_back(record->root_cause);
  }
  if (set.unknown_labels > 0) {
    ctx.err << fmt::format("warning: {} label(s) name reports absent from the corpus\n",
                           set.unknown_labels);
  }
  return set;
}

std::vector<Observation> observations(const LabeledSet& set, const ComponentMap& map) {
  std::vector<Observation> out;
  out.reserve(set.reports.size());
  for (std::size_t i = 0; i < set.reports.size(); ++i) {
    const auto& r = *set.reports[i];
    out.push_back({r.key(), set.truth[i], map.normalize(r.component_raw, r.source),
                   set.root_causes[i]});
  }
  return out;
}

}  // namespace kbtriage::cli
