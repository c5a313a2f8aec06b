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

#include <chrono>

#include "commands.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage::cli {
namespace {

struct PreOptions {
  OptPath corpus;
  OptPath out;
  std::vector<std::string> judges{"mock", "mock"};
};

struct RecordOptions {
  OptPath log;
  std::string report;
  std::string annotator;
  std::string label;
  std::string reason;
  std::string rationale;
  int round = 1;
  std::string root_cause;
  std::string timestamp;
};

struct KappaOptions {
  OptPath log;
  int round = 1;
  std::string a;
  std::string b;
};

struct MergeOptions {
  OptPath prelabels;
  OptPath log;
  OptPath out;
};

struct BatchSplitOptions {
  OptPath corpus;
  std::vector<double> fractions{0.03, 0.15};
  std::uint64_t seed = 0;
  OptPath out;
};

// "mock" builds a rule-based client; "model" the configured endpoint.
std::unique_ptr<ModelClient> make_judge(const Context& ctx, const std::string& spec) {
  if (spec == "mock") return make_client(ctx, true);
  if (spec == "model") return make_client(ctx, false);
  throw UsageError("unknown judge '" + spec + "' (mock|model)");
}

int run_pre(Context& ctx, const PreOptions& opt) {
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  if (!opt.out) throw UsageError("--out is required");
  if (opt.judges.size() < 2) throw UsageError("at least two --judges are required");
  const auto corpus = load_corpus(corpus_path, configured_window(ctx));
  std::vector<std::unique_ptr<ModelClient>> owned;
  std::vector<const ModelClient*> judges;
  for (const auto& spec : opt.judges) {
    owned.push_back(make_judge(ctx, spec));
    judges.push_back(owned.back().get());
  }
  const auto templates = configured_templates(ctx);
  const auto retry = configured_retry(ctx);
  std::string lines;
  std::map<Consensus, std::size_t> tally;
  for (const auto& [key, kind] : select_candidates(corpus)) {
    if (kind.kind == CandidateKind::Kind::kExcluded) continue;
    const auto prelabel = preannotate(*corpus.find(key), judges, templates, retry);
    ++tally[prelabel.consensus];
    lines += to_json_line(prelabel);
    lines += '\n';
  }
  write_file(*opt.out, lines);
  ctx.out << fmt::format("fp_candidates={} genuine_candidates={} needs_manual={}\n",
                         tally[Consensus::kFalsePositiveCandidate],
                         tally[Consensus::kGenuineCandidate], tally[Consensus::kNeedsManual]);
  return 0;
}

int run_record(Context& ctx, const RecordOptions& opt) {
  if (!opt.log) throw UsageError("--log is required");
  ManualVerdict v;
  const auto key = ReportKey::parse(opt.report);
  if (!key) throw UsageError("--report must look like bugzilla:<id> or syzkaller:<id>");
  v.report = *key;
  v.annotator_id = opt.annotator;
  if (text::normalize_label(opt.label) == "excluded") {
    if (text::trim(opt.reason).empty()) throw UsageError("EXCLUDED needs --reason");
    v.decision = Excluded{opt.reason};
  } else if (auto label = parse_label(opt.label)) {
    v.decision = *label;
  } else {
    throw UsageError("--label must be GENUINE_BUG, FALSE_POSITIVE or EXCLUDED");
  }
  v.rationale = opt.rationale;
  v.round = opt.round;
  if (!opt.root_cause.empty()) {
    if (auto c = parse_category(opt.root_cause)) {
      v.root_cause = c;
    } else if (auto s = parse_subcategory(opt.root_cause)) {
      v.root_cause = parent_category(*s);
    } else {
      throw UsageError("unknown --root-cause '" + opt.root_cause + "'");
    }
  }
  v.timestamp = opt.timestamp.empty()
                    ? std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now())
                    : parse_timestamp(opt.timestamp);
  try {
    append_manual_verdict(*opt.log, v);
  } catch (const Error& e) {
    if (e.code() == Errc::kInvalidArgument) throw UsageError(e.detail());
    throw;
  }
  ctx.out << to_json_line(v) << '\n';
  return 0;
}

int run_kappa(Context& ctx, const KappaOptions& opt) {
  if (!opt.log) throw UsageError("--log is required");
  const auto verdicts = load_manual_verdicts(*opt.log);
  const auto r = round_agreement(verdicts, opt.round, opt.a, opt.b);
  ctx.out << fmt::format("round={} n={} p_o={} p_e={} kappa={}{}\n", opt.round, r.n, num(r.observed),
                         num(r.expected), num(r.kappa), r.degenerate ? " degenerate=true" : "");
  return 0;
}

int run_merge(Context& ctx, const MergeOptions& opt) {
  if (!opt.log) throw UsageError("--log is required");
  const auto out = require_path(ctx, opt.out, "paths.labels", "--out");
  std::vector<PreLabel> prelabels;
  if (opt.prelabels) prelabels = load_prelabels(*opt.prelabels);
  const auto manual = load_manual_verdicts(*opt.log);
  const auto merged = merge_verdicts(prelabels, manual);
  const auto records = label_records(merged, manual);
  save_label_records(out, records);
  std::map<std::string, std::size_t> tally;
  for (const auto& r : records) ++tally[decision_category(r.decision)];
  ctx.out << fmt::format("genuine={} false_positive={} excluded={}\n", tally["GENUINE_BUG"],
                         tally["FALSE_POSITIVE"], tally["EXCLUDED"]);
  return 0;
}

int run_batches(Context& ctx, const BatchSplitOptions& opt) {
  const auto corpus_path = require_path(ctx, opt.corpus, "paths.corpus", "--corpus");
  if (!opt.out) throw UsageError("--out is required");
  const auto corpus = load_corpus(corpus_path, configured_window(ctx));
  std::vector<ReportKey> keys;
  for (const auto& [key, kind] : select_candidates(corpus)) {
    if (kind.kind != CandidateKind::Kind::kExcluded) keys.push_back(key);
  }
  const auto batches = split_batches(std::move(keys), opt.fractions, opt.seed);
  std::filesystem::create_directories(*opt.out);
  for (std::size_t i = 0; i < batches.size(); ++i) {
    std::string lines;
    for (const auto& k : batches[i]) lines += k.str() + "\n";
    write_file(*opt.out / fmt::format("batch-{}.txt", i + 1), lines);
    ctx.out << fmt::format("batch-{} size={}\n", i + 1, batches[i].size());
  }
  return 0;
}

}  // namespace

void register_annotate(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("annotate", "Two-stage labeling: pre-annotation, verdicts, kappa");
  cmd->require_subcommand(1);

  auto pre = std::make_shared<PreOptions>();
  auto* p = cmd->add_subcommand("pre", "Pre-annotate candidates with two or more judges");
  p->add_option("--corpus", pre->corpus, "Corpus file");
  p->add_option("--out", pre->out, "Pre-label JSONL output");
  p->add_option("--judges", pre->judges, "Judge specs: mock or model")->delimiter(',');
  p->callback([&ctx, pre] { ctx.action = [&ctx, pre] { return run_pre(ctx, *pre); }; });

  auto rec = std::make_shared<RecordOptions>();
  auto* r = cmd->add_subcommand("record", "Append a manual verdict to a verdict log");
  r->add_option("--log", rec->log, "Verdict log (append-only JSONL)");
  r->add_option("--report", rec->report, "Report key, e.g. bugzilla:12345")->required();
  r->add_option("--annotator", rec->annotator, "Annotator id")->required();
  r->add_option("--label", rec->label, "GENUINE_BUG, FALSE_POSITIVE or EXCLUDED")->required();
  r->add_option("--reason", rec->reason, "Exclusion reason");
  r->add_option("--rationale", rec->rationale, "Free-text rationale");
  r->add_option("--round", rec->round, "Annotation round (>= 1)");
  r->add_option("--root-cause", rec->root_cause, "Root-cause category or subcategory");
  r->add_option("--timestamp", rec->timestamp, "ISO-8601 time (default: now)");
  r->callback([&ctx, rec] { ctx.action = [&ctx, rec] { return run_record(ctx, *rec); }; });

  auto kap = std::make_shared<KappaOptions>();
  auto* k = cmd->add_subcommand("kappa", "Cohen's kappa between two annotators in one round");
  k->add_option("--log", kap->log, "Verdict log");
  k->add_option("--round", kap->round, "Round");
  k->add_option("--a", kap->a, "First annotator")->required();
  k->add_option("--b", kap->b, "Second annotator")->required();
  k->callback([&ctx, kap] { ctx.action = [&ctx, kap] { return run_kappa(ctx, *kap); }; });

  auto mer = std::make_shared<MergeOptions>();
  auto* m = cmd->add_subcommand("merge", "Merge pre-labels and manual verdicts into final labels");
  m->add_option("--prelabels", mer->prelabels, "Pre-label JSONL");
  m->add_option("--log", mer->log, "Verdict log");
  m->add_option("--out", mer->out, "Labels JSONL output");
  m->callback([&ctx, mer] { ctx.action = [&ctx, mer] { return run_merge(ctx, *mer); }; });

  auto bat = std::make_shared<BatchSplitOptions>();
  auto* b = cmd->add_subcommand("batches", "Split candidates into annotation batches");
  b->add_option("--corpus", bat->corpus, "Corpus file");
  b->add_option("--fractions", bat->fractions, "Batch fractions; the rest forms a final batch")
      ->delimiter(',');
  b->add_option("--seed", bat->seed, "Shuffle seed");
  b->add_option("--out", bat->out, "Output directory");
  b->callback([&ctx, bat] { ctx.action = [&ctx, bat] { return run_batches(ctx, *bat); }; });
}

}  // namespace kbtriage::cli
