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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/label.hpp"
#include "kbtriage/retrieval.hpp"

namespace kbtriage {

enum class PromptStrategy { kBasicZeroShot, kEnhancedZeroShot, kFewShot, kChainOfThought, kRag };

inline constexpr std::array<PromptStrategy, 5> kPromptStrategies{
    PromptStrategy::kBasicZeroShot, PromptStrategy::kEnhancedZeroShot, PromptStrategy::kFewShot,
    PromptStrategy::kChainOfThought, PromptStrategy::kRag};

/// CLI spelling: basic-zero-shot, enhanced-zero-shot, few-shot, cot, rag.
std::string_view to_string(PromptStrategy strategy) noexcept;
std::optional<PromptStrategy> parse_strategy(std::string_view text);

/// Step headers every chain-of-thought prompt carries, in order.
inline constexpr std::array<std::string_view, 4> kChainOfThoughtSteps{
    "Component analysis", "Dependency check", "Feature interpretation", "Integrative decision"};

struct Exemplar {
  std::string report_text;
  Label label = Label::kGenuineBug;
  std::string rationale;

  bool operator==(const Exemplar&) const = default;
};

struct RetrievedExample {
  ReportKey key;
  std::string report_text;
  Label label = Label::kGenuineBug;
  double similarity = 0.0;

  bool operator==(const RetrievedExample&) const = default;
};

/// What a strategy may consume. Fields a strategy does not use are ignored.
struct PromptContext {
  std::optional<std::string> guidelines;        // EnhancedZeroShot
  std::vector<Exemplar> exemplars;              // FewShot: one per class
  std::optional<std::vector<RetrievedExample>> retrieved;  // RAG: class-balanced
};

struct PromptBundle {
  PromptStrategy strategy = PromptStrategy::kBasicZeroShot;
  std::string system_text;
  std::string user_text;
  std::vector<Exemplar> exemplars;
  std::vector<RetrievedExample> retrieved;
  std::string report_text;  // the query report as rendered into user_text

  bool operator==(const PromptBundle&) const = default;
};

/// A template file holds the system part, a line containing only `%%`, then
/// the user part. Placeholders: {report} {guidelines} {exemplars} {retrieved}.
struct PromptTemplate {
  std::string system;
  std::string user;

  static PromptTemplate parse(std::string_view text);
};

class TemplateSet {
 public:
  /// The templates compiled into the library.
  static TemplateSet builtin();
  /// Files named `<strategy>.txt` (basic_zero_shot, enhanced_zero_shot,
  /// few_shot, chain_of_thought, rag) in `dir` replace the builtin ones;
  /// absent files keep the builtin template.
  static TemplateSet with_overrides(const std::filesystem::path& dir);

  const PromptTemplate& get(PromptStrategy strategy) const;
  void set(PromptStrategy strategy, PromptTemplate tmpl);

 private:
  std::array<PromptTemplate, kPromptStrategies.size()> templates_;
};

std::string_view template_file_stem(PromptStrategy strategy) noexcept;

/// Title, component and description, then the discussion (authors and bodies
/// only), cut to `char_budget` bytes. Status and resolution are omitted since
/// they encode the ground truth.
std::string report_prompt_text(const BugReport& report,
                               std::size_t char_budget = kDefaultEmbedCharBudget);

/// Deterministic. Throws kMissingContext when the context lacks what the
/// strategy needs: guidelines for EnhancedZeroShot, exactly two exemplars of
/// distinct classes for FewShot, a non-empty class-balanced retrieval for RAG.
PromptBundle build_prompt(PromptStrategy strategy, std::string_view report_text,
                          const PromptContext& context,
                          const TemplateSet& templates = TemplateSet::builtin());

PromptBundle build_prompt(PromptStrategy strategy, const BugReport& report,
                          const PromptContext& context,
                          const TemplateSet& templates = TemplateSet::builtin());

/// Shipped default exemplar pair.
std::vector<Exemplar> default_exemplars();
/// JSONL records {"report_text", "label", "rationale"}.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& path);
std::vector<Exemplar> parse_exemplars(std::string_view jsonl);

/// Neighbours in rank order, genuine first then false positive, with text
/// taken from the knowledge base.
std::vector<RetrievedExample> retrieved_examples(const RetrievalResult& result,
                                                 const KnowledgeBase& kb);

}  // namespace kbtriage
