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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/label.hpp"

namespace kbtriage {

struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

/// Embedding client contract. Implementations must be deterministic for a
/// fixed text and safe to call from several threads.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// Offline embedder used by tests and fixture runs.
///
/// Algorithm: tokens are maximal runs of ASCII letters/digits, lowercased
/// (`text::tokenize`). Each token increments bucket `fnv1a64(token) % 64`
/// of a double-precision count vector (FNV-1a 64, offset basis
/// 0xcbf29ce484222325, prime 0x100000001b3, over the token's bytes). The
/// vector is divided by its Euclidean norm and each component rounded to
/// binary32. Text without tokens yields the zero vector.
class MockEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDim = 64;

  std::string id() const override { return "mock-hash-64"; }
  std::size_t dim() const override { return kDim; }
  EmbeddingVector embed(std::string_view text) const override;
};

struct HttpEndpointConfig {
  std::string endpoint;  // base URL, e.g. https://api.example.com/v1
  std::string model;
  std::string api_key;
  int timeout_seconds = 60;
};

/// OpenAI-compatible `POST {endpoint}/embeddings` client.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(HttpEndpointConfig config, std::size_t dim);

  std::string id() const override { return config_.model; }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(std::string_view text) const override;

 private:
  HttpEndpointConfig config_;
  std::size_t dim_;
};

inline constexpr std::size_t kDefaultEmbedCharBudget = 8000;

/// Title, a blank line, then the description, cut to `char_budget` bytes on
/// a UTF-8 boundary.
std::string embedding_text(const BugReport& report,
                           std::size_t char_budget = kDefaultEmbedCharBudget);

/// Validates the text and the client's output. Throws kInvalidArgument for
/// empty text, kEmbedderFailure when the client throws or returns non-finite
/// values, kDimensionMismatch when the output length differs from dim().
EmbeddingVector embed(std::string_view text, const Embedder& embedder);

/// dot(u, v) / (|u| |v|), accumulated in double. Throws kDimensionMismatch,
/// kZeroVector.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// ---------------------------------------------------------------------------

struct KnowledgeBaseEntry {
  ReportKey key;
  Label label = Label::kGenuineBug;
  std::string text;  // title + description as embedded
  EmbeddingVector vector;
};

/// Labeled, embedded reports; entries ordered by key. Immutable once built.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(std::size_t dim, std::string embedder_id, std::vector<KnowledgeBaseEntry> entries);

  std::size_t dim() const { return dim_; }
  const std::string& embedder_id() const { return embedder_id_; }
  const std::vector<KnowledgeBaseEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t count(Label label) const;
  const KnowledgeBaseEntry* find(const ReportKey& key) const;

 private:
  std::size_t dim_ = 0;
  std::string embedder_id_;
  std::vector<KnowledgeBaseEntry> entries_;
};

struct LabeledReport {
  const BugReport* report = nullptr;
  Label label = Label::kGenuineBug;
};

struct KnowledgeBaseOptions {
  std::size_t char_budget = kDefaultEmbedCharBudget;
  std::size_t max_in_flight = 4;
};

/// Embeds every report. All-or-nothing: any embedding failure propagates and
/// no partial knowledge base is returned.
KnowledgeBase build_knowledge_base(std::span<const LabeledReport> reports, const Embedder& embedder,
                                   const KnowledgeBaseOptions& options = {});

struct Neighbor {
  ReportKey key;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

struct RetrievalResult {
  std::vector<Neighbor> genuine_neighbors;  // descending similarity, then id
  std::vector<Neighbor> fp_neighbors;
  std::size_t k_per_class = 1;
};

/// Exact top-k per class by cosine similarity, never returning `exclude`.
/// Ties are broken by ascending key. Throws kInsufficientClass(label) when a
/// class has fewer than k eligible entries, kDimensionMismatch, kZeroVector.
RetrievalResult retrieve_balanced(const EmbeddingVector& query, const KnowledgeBase& kb,
                                  std::size_t k_per_class, const ReportKey* exclude = nullptr);

/// Embeds the query report and excludes it from the results.
RetrievalResult retrieve_balanced(const BugReport& query, const KnowledgeBase& kb,
                                  std::size_t k_per_class, const Embedder& embedder,
                                  std::size_t char_budget = kDefaultEmbedCharBudget);

// ---------------------------------------------------------------------------
// Vector store file (little-endian throughout):
//
//   char[4]  magic "KBVS"
//   u32      format version (1)
//   u32      dim
//   u32      entry count
//   u32      embedder id length, then that many UTF-8 bytes
//   entries, ordered by (source, id), each:
//     u8     source (0 = bugzilla, 1 = syzkaller)
//     u8     label (0 = GENUINE_BUG, 1 = FALSE_POSITIVE)
//     u32    id length, then id bytes
//     u32    text length, then text bytes
//     f32    x dim  IEEE-754 binary32 components

inline constexpr std::uint32_t kVectorStoreVersion = 1;

void write_vector_store(std::ostream& out, const KnowledgeBase& kb);
KnowledgeBase read_vector_store(std::istream& in);
/// Writes to a sibling temporary file, then renames over `path`.
void save_vector_store(const std::filesystem::path& path, const KnowledgeBase& kb);
KnowledgeBase load_vector_store(const std::filesystem::path& path);

}  // namespace kbtriage
