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
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "kbtriage/baselines.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/eval.hpp"
#include "kbtriage/features.hpp"
#include "kbtriage/stats.hpp"

namespace kbtriage::cli {
namespace {

inline constexpr std::string_view kDefaultTemporalCutoff = "2023-09-01";

struct EvaluateOptions {
  OptPath predictions;
  OptPath corpus;
  OptPath labels;
  OptPath results;
  std::string protocol;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string cutoff;
  std::string strategy = "rag";
  bool mock_client = false;
  bool mock_embedder = false;
  bool baselines = false;
};

// One evaluation unit: classify `test` using `train` as retrieval pool and
// baseline training set. The two lists are disjoint.
struct Unit {
  std::string split_id;
  std::vector<std::size_t> train;  // indices into LabeledSet::reports
  std::vector<std::size_t> test;
};

nlohmann::ordered_json metrics_json(const MetricsReport& m) {
  return {{"strategy", m.strategy},
          {"split_id", m.split_id},
          {"n", m.n},
          {"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"tp", m.confusion.tp},
          {"fp", m.confusion.fp},
          {"fn", m.confusion.fn},
          {"tn", m.confusion.tn},
          {"precision_undefined", m.precision_undefined},
          {"recall_undefined", m.recall_undefined},
          {"f1_undefined", m.f1_undefined}};
}

std::vector<std::string> metric_cells(const MetricsReport& m) {
  return {num(m.accuracy), num(m.precision), num(m.recall), num(m.f1)};
}

std::map<std::string, EffortMetrics> effort_of(const LabeledSet& set) {
  std::map<std::string, EffortMetrics> out;
  for (const auto* r : set.reports) out.emplace(r->key().str(), compute_effort(*r));
  return out;
}

nlohmann::ordered_json savings_json(const SavingsEstimate& s, std::size_t flagged) {
  nlohmann::ordered_json j{{"correctly_flagged_false_positives", flagged},
                           {"mean_close_days", s.mean_close_days},
                           {"total_hours", s.total_hours}};
  j["mean_latency_ms"] = s.mean_latency_ms ? nlohmann::ordered_json(*s.mean_latency_ms)
                                           : nlohmann::ordered_json(nullptr);
  j["max_latency_ms"] = s.max_latency_ms ? nlohmann::ordered_json(*s.max_latency_ms)
                                         : nlohmann::ordered_json(nullptr);
  return j;
}

// Splits a verdict log into predictions and the truth restricted to them.
struct Scored {
  std::map<std::string, Label> predictions;
  std::map<std::string, Label> truth;
  std::vector<double> latencies;
  std::size_t unparsed = 0;
};

Scored score(std::span<const VerdictRecord> records, const std::map<std::string, Label>& truth) {
  Scored s;
  for (const auto& r : records) {
    if (!r.label) {
      ++s.unparsed;
      continue;
    }
    const auto it = truth.find(r.report_id);
    if (it == truth.end()) fail(Errc::kKeyMismatch, r.report_id + ": no final label");
    s.predictions[r.report_id] = *r.label;
    s.truth[r.report_id] = it->second;
    s.latencies.push_back(r.latency_ms);
  }
  return s;
}

std::map<std::string, Label> truth_map(const LabeledSet& set) {
  std::map<std::string, Label> out;
  for (std::size_t i = 0; i < set.reports.size(); ++i) out[set.reports[i]->key().str()] = set.truth[i];
  return out;
}

int run_predictions(Context& ctx, const EvaluateOptions& opt, const std::filesystem::path& results) {
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  const auto labels_path = require_path(ctx, opt.labels, "paths.labels", "--labels");
  const auto set = load_labeled_set(ctx, corpus_path, labels_path);
  const auto records = load_verdict_log(*opt.predictions);
  const auto scored = score(records, truth_map(set));
  const std::string strategy =
      records.empty() ? std::string("predictions") : std::string(to_string(records.front().strategy));
  const auto m = compute_metrics(scored.predictions, scored.truth, strategy, "all");

  CsvTable table({"method", "split_id", "n", "unparsed", "tp", "fp", "fn", "tn", "accuracy",
                  "precision", "recall", "f1"});
  std::vector<std::string> row{m.strategy, m.split_id, std::to_string(m.n),
                               std::to_string(scored.unparsed), std::to_string(m.confusion.tp),
                               std::to_string(m.confusion.fp), std::to_string(m.confusion.fn),
                               std::to_string(m.confusion.tn)};
  for (auto& c : metric_cells(m)) row.push_back(std::move(c));
  table.add(std::move(row));
  write_file(results / "metrics.csv", table.str());

  auto j = metrics_json(m);
  j["unparsed"] = scored.unparsed;
  write_file(results / "metrics.json", j.dump(2) + "\n");

  const auto flagged = correctly_flagged_false_positives(scored.predictions, scored.truth);
  const auto savings = estimate_savings(flagged, effort_of(set), scored.latencies);
  write_file(results / "savings.json", savings_json(savings, flagged.size()).dump(2) + "\n");

  update_manifest(results, {"evaluate", {corpus_path, labels_path, *opt.predictions}, {},
                            {{"mode", "predictions"}}, ctx.config.digest(),
                            {"metrics.csv", "metrics.json", "savings.json"}});
  ctx.out << fmt::format("n={} unparsed={} accuracy={} precision={} recall={} f1={}\n", m.n,
                         scored.unparsed, num(m.accuracy), num(m.precision), num(m.recall), num(m.f1));
  return 0;
}

std::vector<Unit> make_units(const EvaluateOptions& opt, const LabeledSet& set, std::uint64_t seed,
                             std::string& cutoff_used) {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> ids;
  std::vector<TimedItem> timed;
  for (std::size_t i = 0; i < set.reports.size(); ++i) {
    const auto id = set.reports[i]->key().str();
    index[id] = i;
    ids.push_back(id);
    timed.push_back({id, set.reports[i]->open_time});
  }
  auto indices = [&](const std::vector<std::string>& list) {
    std::vector<std::size_t> out;
    for (const auto& id : list) out.push_back(index.at(id));
    return out;
  };
  std::vector<Unit> units;
  if (opt.protocol == "kfold") {
    for (const auto& f : kfold_split(ids, opt.folds, seed)) {
      units.push_back({fmt::format("fold-{}", f.index + 1), indices(f.train), indices(f.test)});
    }
  } else if (opt.protocol == "temporal") {
    cutoff_used = opt.cutoff.empty() ? std::string(kDefaultTemporalCutoff) : opt.cutoff;
    const auto p = temporal_split(timed, parse_date(cutoff_used));
    units.push_back({"temporal", indices(p.before), indices(p.after)});
  } else if (opt.protocol == "leak") {
    cutoff_used = opt.cutoff.empty() ? std::string(kDefaultLeakCutoff) : opt.cutoff;
    const auto p = leak_split(timed, parse_date(cutoff_used));
    units.push_back({"leak_prone", indices(p.no_leak), indices(p.leak_prone)});
    units.push_back({"no_leak", indices(p.leak_prone), indices(p.no_leak)});
  } else {
    throw UsageError("unknown --protocol '" + opt.protocol + "' (kfold|temporal|leak)");
  }
  return units;
}

int run_protocol(Context& ctx, const EvaluateOptions& opt, const std::filesystem::path& results) {
  const auto strategy = parse_strategy(opt.strategy);
  if (!strategy) throw UsageError("unknown strategy '" + opt.strategy + "'");
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  const auto labels_path = require_path(ctx, opt.labels, "paths.labels", "--labels");
  const auto set = load_labeled_set(ctx, corpus_path, labels_path);
  const auto seed = opt.seed_given ? opt.seed : static_cast<std::uint64_t>(ctx.config.get_int("seed", 0));
  std::string cutoff;
  const auto units = make_units(opt, set, seed, cutoff);

  const auto client = make_client(ctx, opt.mock_client);
  std::unique_ptr<Embedder> embedder;
  if (*strategy == PromptStrategy::kRag) embedder = make_embedder(ctx, opt.mock_embedder);
  ClassifySetup setup;
  setup.strategy = *strategy;
  setup.client = client.get();
  setup.embedder = embedder.get();
  setup.templates = configured_templates(ctx);
  setup.batch.max_in_flight = configured_max_in_flight(ctx);
  setup.batch.retry = configured_retry(ctx);
  setup.k_per_class = static_cast<std::size_t>(ctx.config.get_int("retrieval.k_per_class", 1));
  if (*strategy == PromptStrategy::kFewShot) setup.exemplars = configured_exemplars(ctx);
  if (*strategy == PromptStrategy::kEnhancedZeroShot) {
    setup.guidelines = derive_guidelines(set, configured_component_map(ctx));
  }
  LogRegOptions logreg;
  logreg.l2 = ctx.config.get_double("baselines.logreg.l2", logreg.l2);
  logreg.epochs = static_cast<int>(ctx.config.get_int("baselines.logreg.epochs", logreg.epochs));
  const auto knn_k = static_cast<std::size_t>(ctx.config.get_int("baselines.knn.k", kDefaultKnnK));

  const std::string method = std::string(to_string(*strategy));
  std::map<std::string, std::vector<MetricsReport>> per_method;  // method -> metrics per unit
  std::map<std::string, std::vector<std::string>> per_method_units;
  std::vector<std::string> skipped;
  std::vector<std::string> outputs;
  std::map<std::string, Label> all_predictions;
  std::map<std::string, Label> all_truth;
  std::vector<double> all_latencies;
  const auto truth = truth_map(set);

  CsvTable folds({"method", "split_id", "n", "unparsed", "tp", "fp", "fn", "tn", "accuracy",
                  "precision", "recall", "f1"});
  auto add_row = [&](const std::string& name, const MetricsReport& m, std::size_t unparsed) {
    std::vector<std::string> row{name, m.split_id, std::to_string(m.n), std::to_string(unparsed),
                                 std::to_string(m.confusion.tp), std::to_string(m.confusion.fp),
                                 std::to_string(m.confusion.fn), std::to_string(m.confusion.tn)};
    for (auto& c : metric_cells(m)) row.push_back(std::move(c));
    folds.add(std::move(row));
    per_method[name].push_back(m);
    per_method_units[name].push_back(m.split_id);
  };

  for (const auto& unit : units) {
    if (unit.test.empty() || unit.train.empty()) {
      const auto why = fmt::format("{}: {} partition is empty", unit.split_id,
                                   unit.test.empty() ? "test" : "retrieval/training");
      ctx.err << "warning: skipped " << why << '\n';
      skipped.push_back(why);
      continue;
    }
    std::vector<const BugReport*> test_reports;
    std::vector<const BugReport*> train_reports;
    std::vector<Label> train_labels;
    for (auto i : unit.test) test_reports.push_back(set.reports[i]);
    for (auto i : unit.train) {
      train_reports.push_back(set.reports[i]);
      train_labels.push_back(set.truth[i]);
    }

    std::optional<KnowledgeBase> kb;
    if (*strategy == PromptStrategy::kRag) {
      kb = build_kb(train_reports, train_labels, *embedder, ctx);
      setup.kb = &*kb;
    }
    const auto records = classify_reports(test_reports, setup);
    const auto log_name = fmt::format("verdicts_{}_{}.jsonl", method, unit.split_id);
    save_verdict_log(results / log_name, records);
    outputs.push_back(log_name);
    const auto scored = score(records, truth);
    if (scored.predictions.empty()) {
      ctx.err << fmt::format("warning: {}: no parsable verdicts\n", unit.split_id);
    } else {
      add_row(method, compute_metrics(scored.predictions, scored.truth, method, unit.split_id),
              scored.unparsed);
      all_predictions.insert(scored.predictions.begin(), scored.predictions.end());
      all_truth.insert(scored.truth.begin(), scored.truth.end());
      all_latencies.insert(all_latencies.end(), scored.latencies.begin(), scored.latencies.end());
    }

    if (!opt.baselines) continue;
    std::vector<std::string> train_docs;
    for (const auto* r : train_reports) train_docs.push_back(embedding_text(*r));
    const auto vectorizer = TfidfVectorizer::fit(train_docs);
    std::vector<FeatureVector> train_x;
    for (const auto& d : train_docs) train_x.push_back(vectorizer.transform(d));
    std::vector<FeatureVector> test_x;
    std::map<std::string, Label> test_truth;
    for (std::size_t j = 0; j < test_reports.size(); ++j) {
      test_x.push_back(vectorizer.transform(embedding_text(*test_reports[j])));
      test_truth[test_reports[j]->key().str()] = set.truth[unit.test[j]];
    }
    try {
      const auto model = train_logreg(train_x, train_labels, vectorizer.dim(), logreg);
      std::map<std::string, Label> pred;
      for (std::size_t j = 0; j < test_reports.size(); ++j) {
        pred[test_reports[j]->key().str()] = model.predict(test_x[j]);
      }
      add_row("logreg-tfidf", compute_metrics(pred, test_truth, "logreg-tfidf", unit.split_id), 0);
    } catch (const Error& e) {
      if (e.code() != Errc::kSingleClassTraining) throw;
      ctx.err << fmt::format("warning: {}: logistic regression skipped: {}\n", unit.split_id, e.detail());
    }
    std::map<std::string, Label> pred;
    const auto k = std::min(knn_k, train_x.size());
    for (std::size_t j = 0; j < test_reports.size(); ++j) {
      pred[test_reports[j]->key().str()] = knn_predict(train_x, train_labels, test_x[j], k);
    }
    add_row("knn-tfidf", compute_metrics(pred, test_truth, "knn-tfidf", unit.split_id), 0);
  }
  write_file(results / "metrics_folds.csv", folds.str());
  outputs.push_back("metrics_folds.csv");

  nlohmann::ordered_json summary{{"protocol", opt.protocol}, {"strategy", method}};
  if (opt.protocol == "kfold") {
    summary["folds"] = opt.folds;
    summary["seed"] = seed;
  } else {
    summary["cutoff"] = cutoff;
  }
  summary["skipped"] = skipped;
  nlohmann::ordered_json units_json = nlohmann::ordered_json::array();
  for (const auto& [name, list] : per_method) {
    for (const auto& m : list) units_json.push_back(metrics_json(m));
  }
  summary["units"] = units_json;

  // Averaged and pooled metrics across folds.
  if (opt.protocol == "kfold") {
    CsvTable agg({"method", "aggregation", "folds", "n", "accuracy", "precision", "recall", "f1"});
    nlohmann::ordered_json agg_json = nlohmann::ordered_json::object();
    for (const auto& [name, list] : per_method) {
      const auto a = aggregate_folds(list);
      for (const auto& [kind, m] : {std::pair{"averaged", a.averaged}, std::pair{"pooled", a.pooled}}) {
        std::vector<std::string> row{name, kind, std::to_string(a.folds), std::to_string(m.n)};
        for (auto& c : metric_cells(m)) row.push_back(std::move(c));
        agg.add(std::move(row));
      }
      agg_json[name] = {{"folds", a.folds},
                        {"averaged", metrics_json(a.averaged)},
                        {"pooled", metrics_json(a.pooled)}};
    }
    write_file(results / "metrics_aggregate.csv", agg.str());
    outputs.push_back("metrics_aggregate.csv");
    summary["aggregate"] = agg_json;

    // Paired per-fold accuracy, strategy against each baseline.
    CsvTable wil({"comparison", "pairs", "w_plus", "p_value", "method", "note"});
    for (const auto& [name, list] : per_method) {
      if (name == method || !per_method.contains(method)) continue;
      std::map<std::string, double> base;
      for (const auto& m : list) base[m.split_id] = m.accuracy;
      std::vector<double> a;
      std::vector<double> b;
      for (const auto& m : per_method.at(method)) {
        if (const auto it = base.find(m.split_id); it != base.end()) {
          a.push_back(m.accuracy);
          b.push_back(it->second);
        }
      }
      const auto label = fmt::format("{} vs {}", method, name);
      try {
        const auto t = wilcoxon_signed_rank(a, b);
        wil.add({label, std::to_string(a.size()), num(t.statistic), num(t.p_value),
                 std::string(to_string(t.method)), ""});
      } catch (const Error& e) {
        if (e.code() != Errc::kAllZeroDifferences && e.code() != Errc::kEmptySample) throw;
        wil.add({label, std::to_string(a.size()), "", "", "", std::string(errc_name(e.code()))});
      }
    }
    if (!wil.rows().empty()) {
      write_file(results / "wilcoxon.csv", wil.str());
      outputs.push_back("wilcoxon.csv");
    }
  }
  write_file(results / "metrics.json", summary.dump(2) + "\n");
  outputs.push_back("metrics.json");

  if (!all_predictions.empty()) {
    const auto flagged = correctly_flagged_false_positives(all_predictions, all_truth);
    const auto savings = estimate_savings(flagged, effort_of(set), all_latencies);
    write_file(results / "savings.json", savings_json(savings, flagged.size()).dump(2) + "\n");
    outputs.push_back("savings.json");
  }

  std::map<std::string, std::string> params{{"mode", "protocol"},
                                            {"protocol", opt.protocol},
                                            {"strategy", method},
                                            {"model", client->model_id()},
                                            {"baselines", opt.baselines ? "true" : "false"}};
  if (opt.protocol == "kfold") params["folds"] = std::to_string(opt.folds);
  if (!cutoff.empty()) params["cutoff"] = cutoff;
  if (embedder) params["embedder"] = embedder->id();
  std::map<std::string, std::uint64_t> seeds;
  if (opt.protocol == "kfold") seeds["kfold"] = seed;
  update_manifest(results, {"evaluate", {corpus_path, labels_path}, seeds, params,
                            ctx.config.digest(), outputs});

  for (const auto& [name, list] : per_method) {
    for (const auto& m : list) {
      ctx.out << fmt::format("{} {} n={} accuracy={} precision={} recall={} f1={}\n", name,
                             m.split_id, m.n, num(m.accuracy), num(m.precision), num(m.recall),
                             num(m.f1));
    }
  }
  return 0;
}

int run_evaluate(Context& ctx, const EvaluateOptions& opt) {
  if (opt.predictions.has_value() == !opt.protocol.empty()) {
    throw UsageError("give exactly one of --predictions or --protocol");
  }
  const auto results = require_path(ctx, opt.results, "paths.results", "--results");
  std::filesystem::create_directories(results);
  if (opt.predictions) return run_predictions(ctx, opt, results);
  return run_protocol(ctx, opt, results);
}

}  // namespace

void register_evaluate(CLI::App& app, Context& ctx) {
  auto opt = std::make_shared<EvaluateOptions>();
  auto* cmd = app.add_subcommand("evaluate", "Score predictions or run a split protocol");
  cmd->add_option("--predictions", opt->predictions, "Verdict log to score against final labels");
  cmd->add_option("--corpus", opt->corpus, "Corpus file");
  cmd->add_option("--labels", opt->labels, "Final labels JSONL");
  cmd->add_option("--results", opt->results, "Results directory");
  cmd->add_option("--protocol", opt->protocol, "kfold | temporal | leak");
  cmd->add_option("--folds", opt->folds, "Number of folds for kfold (default 5)");
  cmd->add_option("--seed", opt->seed, "Shuffle seed for kfold (default: config seed)")
      ->each([opt](const std::string&) { opt->seed_given = true; });
  cmd->add_option("--cutoff", opt->cutoff,
                  "Cutoff date YYYY-MM-DD (temporal default 2023-09-01, leak default 2024-07-01)");
  cmd->add_option("--strategy", opt->strategy, "Prompting strategy (default rag)");
  cmd->add_flag("--mock-client", opt->mock_client, "Use the rule-based offline client");
  cmd->add_flag("--mock-embedder", opt->mock_embedder, "Use the offline hashing embedder");
  cmd->add_flag("--baselines", opt->baselines, "Also run TF-IDF logistic regression and kNN");
  cmd->callback([&ctx, opt] { ctx.action = [&ctx, opt] { return run_evaluate(ctx, *opt); }; });
}

}  // namespace kbtriage::cli
