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

namespace kbtriage::cli {
namespace {

struct ReportOptions {
  OptPath results;
  OptPath out;
};

// Sections in output order; absent files are skipped.
struct Section {
  std::string_view file;
  std::string_view title;
};

constexpr Section kSections[] = {
    {"dataset_summary.csv", "Candidate selection"},
    {"effort_tests.csv", "Effort: false positives vs genuine bugs"},
    {"component_distribution.csv", "False positives by component"},
    {"stagewise.csv", "Root causes by component"},
    {"metrics.csv", "Classification metrics"},
    {"metrics_folds.csv", "Metrics per split"},
    {"metrics_aggregate.csv", "Cross-validation aggregate"},
    {"wilcoxon.csv", "Paired Wilcoxon signed-rank on per-fold accuracy"},
};

std::string escape_cell(const std::string& cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string markdown_table(const CsvTable& table) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s = "|";
    for (const auto& c : cells) s += " " + escape_cell(c) + " |";
    return s + "\n";
  };
  std::string md = line(table.header());
  md += "|";
  for (std::size_t i = 0; i < table.header().size(); ++i) md += " --- |";
  md += "\n";
  for (const auto& row : table.rows()) md += line(row);
  return md;
}

int run_report(Context& ctx, const ReportOptions& opt) {
  const auto results = require_path(ctx, opt.results, "paths.results", "--results");
  if (!std::filesystem::is_directory(results)) {
    throw UsageError("results directory not found: " + results.string());
  }
  std::string md = "# kbtriage results\n";
  std::vector<std::string> used;
  for (const auto& s : kSections) {
    const auto path = results / s.file;
    if (!std::filesystem::exists(path)) continue;
    md += fmt::format("\n## {}\n\n", s.title);
    md += markdown_table(read_csv(path));
    used.emplace_back(s.file);
  }
  if (const auto chi = results / "chi_square.json"; std::filesystem::exists(chi)) {
    const auto j = nlohmann::json::parse(read_file(chi));
    md += fmt::format("\nChi-square independence (root cause x component): statistic={} dof={} p={}\n",
                      num(j.at("statistic").get<double>()), j.at("dof").get<int>(),
                      num(j.at("p_value").get<double>()));
    used.emplace_back("chi_square.json");
  }
  if (const auto sav = results / "savings.json"; std::filesystem::exists(sav)) {
    const auto j = nlohmann::json::parse(read_file(sav));
    md += fmt::format(
        "\n## Effort savings\n\nCorrectly flagged false positives: {}; mean time to close {} days; "
        "total {} hours.\n",
        j.at("correctly_flagged_false_positives").get<std::size_t>(),
        num(j.at("mean_close_days").get<double>()), num(j.at("total_hours").get<double>()));
    used.emplace_back("savings.json");
  }
  if (used.empty()) throw UsageError("no result files in " + results.string());
  const auto out = opt.out.value_or(results / "report.md");
  write_file(out, md);
  ctx.out << md;
  return 0;
}

}  // namespace

void register_report(CLI::App& app, Context& ctx) {
  auto opt = std::make_shared<ReportOptions>();
  auto* cmd = app.add_subcommand("report", "Render result tables as markdown");
  cmd->add_option("--results", opt->results, "Results directory");
  cmd->add_option("--out", opt->out, "Markdown output (default <results>/report.md)");
  cmd->callback([&ctx, opt] { ctx.action = [&ctx, opt] { return run_report(ctx, *opt); }; });
}

}  // namespace kbtriage::cli
