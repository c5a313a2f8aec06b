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

#include "kbtriage/retrieval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

std::string embedding_text(const BugReport& report, std::size_t char_budget) {
  std::string full = report.title;
  full += "\n\n";
  full += report.description;
  return std::string(text::truncate_utf8(full, char_budget));
}

EmbeddingVector embed(std::string_view input, const Embedder& embedder) {
  if (text::trim(input).empty()) fail(Errc::kInvalidArgument, "empty text");
  EmbeddingVector out;
  try {
    out = embedder.embed(input);
  } catch (const Error& e) {
    if (e.code() == Errc::kEmbedderFailure) throw;
    fail(Errc::kEmbedderFailure, e.what());
  } catch (const std::exception& e) {
    fail(Errc::kEmbedderFailure, e.what());
  }
  if (out.dim() != embedder.dim()) {
    fail(Errc::kDimensionMismatch,
         fmt::format("embedder {} returned {} values, expected {}", embedder.id(), out.dim(),
                     embedder.dim()));
  }
  for (float v : out.values) {
    if (!std::isfinite(v)) fail(Errc::kEmbedderFailure, "non-finite embedding component");
  }
  return out;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dim() != v.dim()) {
    fail(Errc::kDimensionMismatch, fmt::format("{} vs {}", u.dim(), v.dim()));
  }
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    const double a = u.values[i];
    const double b = v.values[i];
    dot += a * b;
    nu += a * a;
    nv += b * b;
  }
  if (nu == 0.0 || nv == 0.0) fail(Errc::kZeroVector, "cosine of a zero vector");
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

// ---------------------------------------------------------------------------

KnowledgeBase::KnowledgeBase(std::size_t dim, std::string embedder_id,
                             std::vector<KnowledgeBaseEntry> entries)
    : dim_(dim), embedder_id_(std::move(embedder_id)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].vector.dim() != dim_) {
      fail(Errc::kDimensionMismatch, fmt::format("entry {} has dim {}, expected {}",
                                                 entries_[i].key.str(), entries_[i].vector.dim(),
                                                 dim_));
    }
    if (i > 0 && entries_[i - 1].key == entries_[i].key) {
      fail(Errc::kDuplicateReport, entries_[i].key.str());
    }
  }
}

std::size_t KnowledgeBase::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const auto& e) { return e.label == label; }));
}

const KnowledgeBaseEntry* KnowledgeBase::find(const ReportKey& key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const auto& e, const ReportKey& k) { return e.key < k; });
  return it != entries_.end() && it->key == key ? &*it : nullptr;
}

KnowledgeBase build_knowledge_base(std::span<const LabeledReport> reports, const Embedder& embedder,
                                   const KnowledgeBaseOptions& options) {
  std::vector<KnowledgeBaseEntry> entries(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].report == nullptr) fail(Errc::kInvalidArgument, "null report");
    entries[i].key = reports[i].report->key();
    entries[i].label = reports[i].label;
    entries[i].text = embedding_text(*reports[i].report, options.char_budget);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      try {
        entries[i].vector = embed(entries[i].text, embedder);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(options.max_in_flight, 1, std::max<std::size_t>(entries.size(), 1));
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
  return KnowledgeBase(embedder.dim(), embedder.id(), std::move(entries));
}

RetrievalResult retrieve_balanced(const EmbeddingVector& query, const KnowledgeBase& kb,
                                  std::size_t k_per_class, const ReportKey* exclude) {
  if (k_per_class == 0) fail(Errc::kInvalidArgument, "k_per_class must be positive");
  if (query.dim() != kb.dim()) {
    fail(Errc::kDimensionMismatch, fmt::format("query dim {} vs store dim {}", query.dim(), kb.dim()));
  }
  std::vector<Neighbor> genuine;
  std::vector<Neighbor> fp;
  for (const auto& entry : kb.entries()) {
    if (exclude != nullptr && entry.key == *exclude) continue;
    Neighbor n{entry.key, cosine_similarity(query, entry.vector)};
    (entry.label == Label::kGenuineBug ? genuine : fp).push_back(std::move(n));
  }
  auto select = [&](std::vector<Neighbor>& pool, Label label) {
    if (pool.size() < k_per_class) {
      fail(Errc::kInsufficientClass,
           fmt::format("{}: {} eligible, {} requested", to_string(label), pool.size(), k_per_class));
    }
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k_per_class),
                      pool.end(), [](const Neighbor& a, const Neighbor& b) {
                        if (a.similarity != b.similarity) return a.similarity > b.similarity;
                        return a.key < b.key;
                      });
    pool.resize(k_per_class);
  };
  select(genuine, Label::kGenuineBug);
  select(fp, Label::kFalsePositive);
  return {std::move(genuine), std::move(fp), k_per_class};
}

RetrievalResult retrieve_balanced(const BugReport& query, const KnowledgeBase& kb,
                                  std::size_t k_per_class, const Embedder& embedder,
                                  std::size_t char_budget) {
  const auto vec = embed(embedding_text(query, char_budget), embedder);
  const auto key = query.key();
  return retrieve_balanced(vec, kb, k_per_class, &key);
}

}  // namespace kbtriage
