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

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "kbtriage/annotate.hpp"
#include "kbtriage/corpus.hpp"
#include "kbtriage/model_client.hpp"
#include "kbtriage/prompt.hpp"
#include "kbtriage/retrieval.hpp"
#include "kbtriage/stats.hpp"
#include "output.hpp"

namespace kbtriage::cli {

/// Reported with exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::optional<std::filesystem::path> config_path;
  Config config;
  std::function<int()> action;  // set by the selected subcommand
};

using OptPath = std::optional<std::filesystem::path>;

/// The flag if given, else the config key, else UsageError naming `what`.
std::filesystem::path require_path(const Context& ctx, const OptPath& flag,
                                   std::string_view config_key, std::string_view what);
std::optional<std::filesystem::path> optional_path(const Context& ctx, const OptPath& flag,
                                                   std::string_view config_key);

TimeWindow configured_window(const Context& ctx);
ComponentMap configured_component_map(const Context& ctx);
TemplateSet configured_templates(const Context& ctx);
std::vector<Exemplar> configured_exemplars(const Context& ctx);
std::size_t configured_max_in_flight(const Context& ctx);
RetryPolicy configured_retry(const Context& ctx);

std::unique_ptr<Embedder> make_embedder(const Context& ctx, bool mock);
std::unique_ptr<ModelClient> make_client(const Context& ctx, bool mock);

/// Corpus reports paired with their final label; excluded and unlabeled
/// reports are left out. Ordered by key.
struct LabeledSet {
  Corpus corpus;
  std::vector<LabelRecord> labels;
  std::vector<const BugReport*> reports;
  std::vector<Label> truth;
  std::vector<std::optional<RootCauseCategory>> root_causes;
  std::size_t unknown_labels = 0;  // labels naming reports absent from the corpus
};

/// Throws UsageError when the labels file is missing.
LabeledSet load_labeled_set(const Context& ctx, const std::filesystem::path& corpus_path,
                            const std::filesystem::path& labels_path);

std::vector<Observation> observations(const LabeledSet& set, const ComponentMap& map);

struct ClassifySetup {
  PromptStrategy strategy = PromptStrategy::kBasicZeroShot;
  const ModelClient* client = nullptr;
  const KnowledgeBase* kb = nullptr;     // RAG only
  const Embedder* embedder = nullptr;    // RAG only
  std::size_t k_per_class = 1;
  std::optional<std::string> guidelines;  // EnhancedZeroShot only
  std::vector<Exemplar> exemplars;        // FewShot only
  TemplateSet templates = TemplateSet::builtin();
  BatchOptions batch;
};

/// Throws kMissingContext when the strategy's inputs are absent.
std::vector<VerdictRecord> classify_reports(std::span<const BugReport* const> reports,
                                            const ClassifySetup& setup);

KnowledgeBase build_kb(std::span<const BugReport* const> reports, std::span<const Label> labels,
                       const Embedder& embedder, const Context& ctx);

/// Guideline sheet derived from labeled false positives; nullopt when some
/// named component has no false positive or a root cause is missing.
std::optional<std::string> derive_guidelines(const LabeledSet& set, const ComponentMap& map);

void register_ingest(CLI::App& app, Context& ctx);
void register_annotate(CLI::App& app, Context& ctx);
void register_stats(CLI::App& app, Context& ctx);
void register_kb_build(CLI::App& app, Context& ctx);
void register_classify(CLI::App& app, Context& ctx);
void register_evaluate(CLI::App& app, Context& ctx);
void register_report(CLI::App& app, Context& ctx);

}  // namespace kbtriage::cli
