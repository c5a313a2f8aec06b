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

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/stats.hpp"
#include "kbtriage/taxonomy.hpp"

namespace kbtriage::cli {
namespace {

struct StatsOptions {
  OptPath corpus;
  OptPath labels;
  OptPath results;
};

std::string_view kind_name(CandidateKind::Kind k) {
  switch (k) {
    case CandidateKind::Kind::kPotentialGenuine: return "POTENTIAL_GENUINE";
    case CandidateKind::Kind::kPotentialFalsePositive: return "POTENTIAL_FALSE_POSITIVE";
    case CandidateKind::Kind::kExcluded: return "EXCLUDED";
  }
  return "UNKNOWN";
}

int run_stats(Context& ctx, const StatsOptions& opt) {
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  const auto labels_path = require_path(ctx, opt.labels, "paths.labels", "--labels");
  const auto results = require_path(ctx, opt.results, "paths.results", "--results");
  const auto set = load_labeled_set(ctx, corpus_path, labels_path);
  const auto map = configured_component_map(ctx);
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& contents) {
    write_file(results / name, contents);
    outputs.push_back(name);
  };

  // Candidate selection over the whole corpus.
  CsvTable candidates({"report_id", "source", "candidate", "reason"});
  std::map<std::pair<Source, CandidateKind::Kind>, std::size_t> selection;
  for (const auto& [key, kind] : select_candidates(set.corpus)) {
    candidates.add({key.str(), std::string(to_string(key.source)), std::string(kind_name(kind.kind)),
                    kind.reason});
    ++selection[{key.source, kind.kind}];
  }
  emit("candidates.csv", candidates.str());
  CsvTable dataset({"source", "potential_genuine", "potential_false_positive", "excluded"});
  for (auto src : {Source::kBugzilla, Source::kSyzkaller}) {
    dataset.add({std::string(to_string(src)),
                 std::to_string(selection[{src, CandidateKind::Kind::kPotentialGenuine}]),
                 std::to_string(selection[{src, CandidateKind::Kind::kPotentialFalsePositive}]),
                 std::to_string(selection[{src, CandidateKind::Kind::kExcluded}])});
  }
  emit("dataset_summary.csv", dataset.str());

  // Effort per labeled report, long-format boxplot data, and the test battery.
  CsvTable effort({"report_id", "source", "label", "participants", "comments", "time_to_close_hours"});
  CsvTable boxplot({"source", "label", "metric", "value"});
  std::vector<EffortSample> samples;
  for (std::size_t i = 0; i < set.reports.size(); ++i) {
    const auto& r = *set.reports[i];
    const auto e = compute_effort(r);
    samples.push_back({r.source, set.truth[i], e});
    effort.add({r.key().str(), std::string(to_string(r.source)), std::string(to_string(set.truth[i])),
                std::to_string(e.participants), std::to_string(e.comments), num(e.time_to_close_hours)});
    for (auto m : {EffortMetric::kParticipants, EffortMetric::kComments, EffortMetric::kTimeToClose}) {
      boxplot.add({std::string(to_string(r.source)), std::string(to_string(set.truth[i])),
                   std::string(to_string(m)), num(metric_value(e, m))});
    }
  }
  emit("effort.csv", effort.str());
  emit("effort_boxplot.csv", boxplot.str());

  CsvTable tests({"metric", "source", "n_false_positive", "n_genuine", "mean_false_positive",
                  "mean_genuine", "median_false_positive", "median_genuine", "u_statistic",
                  "p_value", "method", "cliffs_delta", "magnitude"});
  for (const auto& c : compare_effort(samples)) {
    tests.add({std::string(to_string(c.metric)), std::string(to_string(c.source)),
               std::to_string(c.mann_whitney.n_a), std::to_string(c.mann_whitney.n_b),
               num(c.mean_fp), num(c.mean_genuine), num(c.median_fp), num(c.median_genuine),
               num(c.mann_whitney.statistic), num(c.mann_whitney.p_value),
               std::string(to_string(c.mann_whitney.method)), num(c.cliffs.statistic),
               c.cliffs.magnitude ? std::string(to_string(*c.cliffs.magnitude)) : std::string()});
  }
  emit("effort_tests.csv", tests.str());

  // Components and root causes.
  const auto obs = observations(set, map);
  const auto dist = component_distribution(obs);
  CsvTable components({"component", "bugzilla", "syzkaller", "total", "share_bugzilla",
                       "share_syzkaller", "share_total"});
  for (const auto& row : dist.rows) {
    components.add({row.component.display_name(), std::to_string(row.bugzilla),
                    std::to_string(row.syzkaller), std::to_string(row.total), num(row.share_bugzilla),
                    num(row.share_syzkaller), num(row.share_total)});
  }
  emit("component_distribution.csv", components.str());

  try {
    const auto matrix = stagewise_proportions(obs);
    std::vector<std::string> header{"component"};
    for (auto c : kRootCauseCategories) header.emplace_back(category_id(c));
    for (auto c : kRootCauseCategories) header.push_back(fmt::format("{}_count", category_id(c)));
    CsvTable stage(header);
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
      std::vector<std::string> row{std::string(component_kind_display(matrix.rows[i]))};
      for (double v : matrix.cells[i]) row.push_back(num(v));
      for (auto v : matrix.counts[i]) row.push_back(std::to_string(v));
      stage.add(std::move(row));
    }
    emit("stagewise.csv", stage.str());
    try {
      const auto chi = chi_square_independence(matrix.count_table());
      nlohmann::ordered_json j{{"statistic", chi.statistic},
                               {"dof", chi.dof.value_or(0)},
                               {"p_value", chi.p_value.value_or(1.0)},
                               {"rows", matrix.rows.size()}};
      emit("chi_square.json", j.dump(2) + "\n");
    } catch (const Error& e) {
      if (e.code() != Errc::kDegenerateTable) throw;
      ctx.err << "warning: chi-square skipped: " << e.detail() << '\n';
    }
    try {
      emit("guidelines.txt", build_guidelines(dist, matrix).render());
    } catch (const Error& e) {
      if (e.code() != Errc::kIncompleteInput) throw;
      ctx.err << "warning: guidelines skipped: " << e.detail() << '\n';
    }
  } catch (const Error& e) {
    if (e.code() != Errc::kMissingRootCause) throw;
    ctx.err << "warning: root-cause analyses skipped, false positive without root cause: "
            << e.detail() << '\n';
  }

  update_manifest(results, {"stats", {corpus_path, labels_path}, {}, {}, ctx.config.digest(), outputs});
  ctx.out << fmt::format("labeled={} outputs={} results={}\n", set.reports.size(), outputs.size(),
                         results.string());
  return 0;
}

}  // namespace

void register_stats(CLI::App& app, Context& ctx) {
  auto opt = std::make_shared<StatsOptions>();
  auto* cmd = app.add_subcommand("stats", "Effort tests, component distribution, root-cause matrix");
  cmd->add_option("--corpus", opt->corpus, "Corpus file");
  cmd->add_option("--labels", opt->labels, "Final labels JSONL");
  cmd->add_option("--results", opt->results, "Results directory");
  cmd->callback([&ctx, opt] { ctx.action = [&ctx, opt] { return run_stats(ctx, *opt); }; });
}

}  // namespace kbtriage::cli
