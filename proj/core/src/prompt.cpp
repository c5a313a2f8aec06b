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

#include "kbtriage/prompt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kbtriage/embedded/fewshot_exemplars.inc"
#include "kbtriage/embedded/template_basic_zero_shot.inc"
#include "kbtriage/embedded/template_chain_of_thought.inc"
#include "kbtriage/embedded/template_enhanced_zero_shot.inc"
#include "kbtriage/embedded/template_few_shot.inc"
#include "kbtriage/embedded/template_rag.inc"
#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {
namespace {

std::size_t index_of(PromptStrategy s) { return static_cast<std::size_t>(s); }

std::string_view embedded_template(PromptStrategy s) {
  switch (s) {
    case PromptStrategy::kBasicZeroShot: return embedded::template_basic_zero_shot;
    case PromptStrategy::kEnhancedZeroShot: return embedded::template_enhanced_zero_shot;
    case PromptStrategy::kFewShot: return embedded::template_few_shot;
    case PromptStrategy::kChainOfThought: return embedded::template_chain_of_thought;
    case PromptStrategy::kRag: return embedded::template_rag;
  }
  return {};
}

std::string render_exemplars(const std::vector<Exemplar>& exemplars) {
  std::string out;
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    const auto& e = exemplars[i];
    if (i > 0) out += "\n\n";
    out += fmt::format("Example {} (LABEL: {})\nReport:\n{}\nRationale: {}", i + 1,
                       to_string(e.label), e.report_text, e.rationale);
  }
  return out;
}

std::string render_retrieved(const std::vector<RetrievedExample>& retrieved) {
  std::string out;
  for (std::size_t i = 0; i < retrieved.size(); ++i) {
    const auto& r = retrieved[i];
    if (i > 0) out += "\n\n";
    out += fmt::format("Similar report {} (LABEL: {})\n{}", i + 1, to_string(r.label),
                       r.report_text);
  }
  return out;
}

[[noreturn]] void missing(PromptStrategy s, std::string_view what) {
  fail(Errc::kMissingContext, fmt::format("{}: {}", to_string(s), what));
}

}  // namespace

std::string_view to_string(PromptStrategy strategy) noexcept {
  switch (strategy) {
    case PromptStrategy::kBasicZeroShot: return "basic-zero-shot";
    case PromptStrategy::kEnhancedZeroShot: return "enhanced-zero-shot";
    case PromptStrategy::kFewShot: return "few-shot";
    case PromptStrategy::kChainOfThought: return "cot";
    case PromptStrategy::kRag: return "rag";
  }
  return "unknown";
}

std::optional<PromptStrategy> parse_strategy(std::string_view text) {
  const std::string norm = text::normalize_label(text);
  for (auto s : kPromptStrategies) {
    if (norm == text::normalize_label(to_string(s))) return s;
  }
  if (norm == "chain of thought") return PromptStrategy::kChainOfThought;
  return std::nullopt;
}

std::string_view template_file_stem(PromptStrategy strategy) noexcept {
  switch (strategy) {
    case PromptStrategy::kBasicZeroShot: return "basic_zero_shot";
    case PromptStrategy::kEnhancedZeroShot: return "enhanced_zero_shot";
    case PromptStrategy::kFewShot: return "few_shot";
    case PromptStrategy::kChainOfThought: return "chain_of_thought";
    case PromptStrategy::kRag: return "rag";
  }
  return "unknown";
}

PromptTemplate PromptTemplate::parse(std::string_view text) {
  PromptTemplate out;
  bool in_user = false;
  bool seen_separator = false;
  for (auto line : text::split_lines(text)) {
    if (!seen_separator && text::trim(line) == "%%") {
      seen_separator = true;
      in_user = true;
      continue;
    }
    std::string& target = in_user ? out.user : out.system;
    target.append(line);
    target.push_back('\n');
  }
  if (!seen_separator) fail(Errc::kConfig, "prompt template lacks the '%%' separator line");
  out.system = std::string(text::trim(out.system));
  out.user = std::string(text::trim(out.user));
  return out;
}

TemplateSet TemplateSet::builtin() {
  static const TemplateSet cached = [] {
    TemplateSet set;
    for (auto s : kPromptStrategies) set.templates_[index_of(s)] = PromptTemplate::parse(embedded_template(s));
    return set;
  }();
  return cached;
}

TemplateSet TemplateSet::with_overrides(const std::filesystem::path& dir) {
  TemplateSet set = builtin();
  for (auto s : kPromptStrategies) {
    const auto path = dir / (std::string(template_file_stem(s)) + ".txt");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::kIo, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    set.set(s, PromptTemplate::parse(buf.str()));
  }
  return set;
}

const PromptTemplate& TemplateSet::get(PromptStrategy strategy) const {
  return templates_[index_of(strategy)];
}

void TemplateSet::set(PromptStrategy strategy, PromptTemplate tmpl) {
  templates_[index_of(strategy)] = std::move(tmpl);
}

std::string report_prompt_text(const BugReport& report, std::size_t char_budget) {
  std::string out = fmt::format("Title: {}\nComponent: {}\nDescription:\n{}", report.title,
                                report.component_raw.empty() ? "unspecified" : report.component_raw,
                                report.description);
  if (report.comment_count() > 0) {
    out += "\nDiscussion:";
    for (const auto& thread : report.discussions) {
      for (const auto& c : thread.comments) out += fmt::format("\n[{}] {}", c.author, c.body);
    }
  }
  return std::string(text::truncate_utf8(out, char_budget));
}

PromptBundle build_prompt(PromptStrategy strategy, std::string_view report_text,
                          const PromptContext& context, const TemplateSet& templates) {
  PromptBundle bundle;
  bundle.strategy = strategy;
  bundle.report_text = std::string(report_text);
  std::map<std::string, std::string, std::less<>> values{{"report", bundle.report_text},
                                                         {"guidelines", ""},
                                                         {"exemplars", ""},
                                                         {"retrieved", ""}};
  switch (strategy) {
    case PromptStrategy::kEnhancedZeroShot:
      if (!context.guidelines || text::trim(*context.guidelines).empty()) {
        missing(strategy, "guidelines");
      }
      values["guidelines"] = *context.guidelines;
      break;
    case PromptStrategy::kFewShot: {
      const auto& ex = context.exemplars;
      if (ex.size() != 2 || ex[0].label == ex[1].label) {
        missing(strategy, "exactly two exemplars, one per class");
      }
      bundle.exemplars = ex;
      values["exemplars"] = render_exemplars(ex);
      break;
    }
    case PromptStrategy::kRag: {
      if (!context.retrieved || context.retrieved->empty()) missing(strategy, "retrieval result");
      const auto& r = *context.retrieved;
      const auto genuine = std::count_if(r.begin(), r.end(), [](const RetrievedExample& e) {
        return e.label == Label::kGenuineBug;
      });
      if (2 * static_cast<std::size_t>(genuine) != r.size()) {
        missing(strategy, "class-balanced retrieval result");
      }
      bundle.retrieved = r;
      values["retrieved"] = render_retrieved(r);
      break;
    }
    case PromptStrategy::kBasicZeroShot:
    case PromptStrategy::kChainOfThought:
      break;
  }
  const auto& tmpl = templates.get(strategy);
  bundle.system_text = text::substitute(tmpl.system, values);
  bundle.user_text = text::substitute(tmpl.user, values);
  return bundle;
}

PromptBundle build_prompt(PromptStrategy strategy, const BugReport& report,
                          const PromptContext& context, const TemplateSet& templates) {
  return build_prompt(strategy, report_prompt_text(report), context, templates);
}

std::vector<Exemplar> parse_exemplars(std::string_view jsonl) {
  std::vector<Exemplar> out;
  std::size_t line_no = 0;
  for (auto line : text::split_lines(jsonl)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Exemplar e;
      e.report_text = j.at("report_text").get<std::string>();
      const auto label = parse_label(j.at("label").get<std::string>());
      if (!label) fail(Errc::kMalformedRecord, fmt::format("line {}: bad label", line_no));
      e.label = *label;
      e.rationale = j.at("rationale").get<std::string>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::kMalformedRecord, fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::vector<Exemplar> default_exemplars() { return parse_exemplars(embedded::fewshot_exemplars); }

std::vector<Exemplar> load_exemplars(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_exemplars(buf.str());
}

std::vector<RetrievedExample> retrieved_examples(const RetrievalResult& result,
                                                 const KnowledgeBase& kb) {
  std::vector<RetrievedExample> out;
  auto append = [&](const std::vector<Neighbor>& neighbors) {
    for (const auto& n : neighbors) {
      const auto* entry = kb.find(n.key);
      if (entry == nullptr) fail(Errc::kInvalidArgument, "neighbour not in knowledge base: " + n.key.str());
      out.push_back({n.key, entry->text, entry->label, n.similarity});
    }
  };
  append(result.genuine_neighbors);
  append(result.fp_neighbors);
  return out;
}

}  // namespace kbtriage
