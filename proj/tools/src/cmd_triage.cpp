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
#include "kbtriage/taxonomy.hpp"

namespace kbtriage::cli {

std::vector<VerdictRecord> classify_reports(std::span<const BugReport* const> reports,
                                            const ClassifySetup& setup) {
  PromptContext shared;
  switch (setup.strategy) {
    case PromptStrategy::kEnhancedZeroShot:
      if (!setup.guidelines) fail(Errc::kMissingContext, "enhanced-zero-shot: guidelines");
      shared.guidelines = setup.guidelines;
      break;
    case PromptStrategy::kFewShot:
      shared.exemplars = setup.exemplars;
      break;
    case PromptStrategy::kRag:
      if (setup.kb == nullptr || setup.embedder == nullptr) {
        fail(Errc::kMissingContext, "rag: knowledge base (--kb) and embedder");
      }
      if (setup.kb->embedder_id() != setup.embedder->id()) {
        fail(Errc::kConfig, fmt::format("knowledge base was built with '{}', embedder is '{}'",
                                        setup.kb->embedder_id(), setup.embedder->id()));
      }
      break;
    case PromptStrategy::kBasicZeroShot:
    case PromptStrategy::kChainOfThought:
      break;
  }
  ContextProvider provider = [&](const BugReport& report) {
    if (setup.strategy != PromptStrategy::kRag) return shared;
    PromptContext ctx;
    const auto result =
        retrieve_balanced(report, *setup.kb, setup.k_per_class, *setup.embedder);
    ctx.retrieved = retrieved_examples(result, *setup.kb);
    return ctx;
  };
  return classify_batch(reports, setup.strategy, *setup.client, provider, setup.templates,
                        setup.batch);
}

KnowledgeBase build_kb(std::span<const BugReport* const> reports, std::span<const Label> labels,
                       const Embedder& embedder, const Context& ctx) {
  std::vector<LabeledReport> items;
  items.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) items.push_back({reports[i], labels[i]});
  KnowledgeBaseOptions options;
  options.char_budget =
      static_cast<std::size_t>(ctx.config.get_int("embed.char_budget", kDefaultEmbedCharBudget));
  options.max_in_flight = configured_max_in_flight(ctx);
  return build_knowledge_base(items, embedder, options);
}

std::optional<std::string> derive_guidelines(const LabeledSet& set, const ComponentMap& map) {
  const auto obs = observations(set, map);
  try {
    return build_guidelines(component_distribution(obs), stagewise_proportions(obs)).render();
  } catch (const Error& e) {
    if (e.code() == Errc::kMissingRootCause || e.code() == Errc::kIncompleteInput) return std::nullopt;
    throw;
  }
}

namespace {

struct KbOptions {
  OptPath corpus;
  OptPath labels;
  OptPath out;
  bool mock_embedder = false;
};

struct ClassifyOptions {
  OptPath corpus;
  OptPath labels;
  std::string strategy;
  bool mock_client = false;
  bool mock_embedder = false;
  OptPath kb;
  std::size_t k_per_class = 0;
  OptPath guidelines;
  OptPath out;
};

PromptStrategy strategy_from(const std::string& name) {
  auto s = parse_strategy(name);
  if (!s) {
    throw UsageError(fmt::format(
        "unknown strategy '{}' (basic-zero-shot|enhanced-zero-shot|few-shot|cot|rag)", name));
  }
  return *s;
}

int run_kb_build(Context& ctx, const KbOptions& opt) {
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  const auto labels_path = require_path(ctx, opt.labels, "paths.labels", "--labels");
  const auto out = require_path(ctx, opt.out, "paths.vector_store", "--out");
  const auto set = load_labeled_set(ctx, corpus_path, labels_path);
  const auto embedder = make_embedder(ctx, opt.mock_embedder);
  const auto kb = build_kb(set.reports, set.truth, *embedder, ctx);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  save_vector_store(out, kb);
  ctx.out << fmt::format("entries={} genuine={} false_positive={} dim={} embedder={}\n", kb.size(),
                         kb.count(Label::kGenuineBug), kb.count(Label::kFalsePositive), kb.dim(),
                         kb.embedder_id());
  return 0;
}

int run_classify(Context& ctx, const ClassifyOptions& opt) {
  const auto strategy = strategy_from(opt.strategy);
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  const auto out = require_path(ctx, opt.out, "paths.verdict_log", "--out");
  const auto kb_path = optional_path(ctx, opt.kb, "paths.vector_store");
  if (strategy == PromptStrategy::kRag && !kb_path) {
    fail(Errc::kMissingContext, "rag: knowledge base (--kb or paths.vector_store)");
  }

  std::optional<LabeledSet> set;
  const auto labels_path = optional_path(ctx, opt.labels, "paths.labels");
  if (labels_path) set = load_labeled_set(ctx, corpus_path, *labels_path);
  Corpus corpus = set ? Corpus() : load_corpus(corpus_path, configured_window(ctx));
  std::vector<const BugReport*> reports;
  if (set) {
    reports = set->reports;
  } else {
    for (const auto& [key, report] : corpus.reports()) reports.push_back(&report);
  }

  const auto client = make_client(ctx, opt.mock_client);
  ClassifySetup setup;
  setup.strategy = strategy;
  setup.client = client.get();
  setup.templates = configured_templates(ctx);
  setup.batch.max_in_flight = configured_max_in_flight(ctx);
  setup.batch.retry = configured_retry(ctx);
  setup.k_per_class = opt.k_per_class > 0
                          ? opt.k_per_class
                          : static_cast<std::size_t>(ctx.config.get_int("retrieval.k_per_class", 1));
  if (strategy == PromptStrategy::kFewShot) setup.exemplars = configured_exemplars(ctx);
  if (strategy == PromptStrategy::kEnhancedZeroShot) {
    if (opt.guidelines) {
      setup.guidelines = read_file(*opt.guidelines);
    } else if (set) {
      setup.guidelines = derive_guidelines(*set, configured_component_map(ctx));
    }
  }
  std::optional<KnowledgeBase> kb;
  std::unique_ptr<Embedder> embedder;
  if (strategy == PromptStrategy::kRag) {
    kb = load_vector_store(*kb_path);
    embedder = make_embedder(ctx, opt.mock_embedder);
    setup.kb = &*kb;
    setup.embedder = embedder.get();
  }

  const auto records = classify_reports(reports, setup);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  save_verdict_log(out, records);
  std::size_t genuine = 0;
  std::size_t fp = 0;
  std::size_t unparsed = 0;
  for (const auto& r : records) {
    if (!r.label) {
      ++unparsed;
    } else if (*r.label == Label::kGenuineBug) {
      ++genuine;
    } else {
      ++fp;
    }
  }
  ctx.out << fmt::format("classified={} genuine={} false_positive={} unparsed={} strategy={} model={}\n",
                         records.size(), genuine, fp, unparsed, to_string(strategy),
                         client->model_id());
  return 0;
}

}  // namespace

void register_kb_build(CLI::App& app, Context& ctx) {
  auto opt = std::make_shared<KbOptions>();
  auto* cmd = app.add_subcommand("kb-build", "Embed labeled reports into a vector store");
  cmd->add_option("--corpus", opt->corpus, "Corpus file");
  cmd->add_option("--labels", opt->labels, "Final labels JSONL");
  cmd->add_option("--out", opt->out, "Vector store file");
  cmd->add_flag("--mock-embedder", opt->mock_embedder, "Use the offline hashing embedder");
  cmd->callback([&ctx, opt] { ctx.action = [&ctx, opt] { return run_kb_build(ctx, *opt); }; });
}

void register_classify(CLI::App& app, Context& ctx) {
  auto opt = std::make_shared<ClassifyOptions>();
  auto* cmd = app.add_subcommand("classify", "Classify reports with a prompting strategy");
  cmd->add_option("--corpus", opt->corpus, "Corpus file");
  cmd->add_option("--labels", opt->labels, "Restrict to labeled, non-excluded reports");
  cmd->add_option("--strategy", opt->strategy,
                  "basic-zero-shot | enhanced-zero-shot | few-shot | cot | rag")
      ->required();
  cmd->add_flag("--mock-client", opt->mock_client, "Use the rule-based offline client");
  cmd->add_flag("--mock-embedder", opt->mock_embedder, "Use the offline hashing embedder");
  cmd->add_option("--kb", opt->kb, "Vector store for rag");
  cmd->add_option("--k-per-class", opt->k_per_class, "Neighbours per class for rag (default 1)");
  cmd->add_option("--guidelines", opt->guidelines, "Guideline text for enhanced-zero-shot");
  cmd->add_option("--out", opt->out, "Verdict log output");
  cmd->callback([&ctx, opt] { ctx.action = [&ctx, opt] { return run_classify(ctx, *opt); }; });
}

}  // namespace kbtriage::cli
