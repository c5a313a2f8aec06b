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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "kbtriage/error.hpp"
#include "kbtriage/retrieval.hpp"
#include "test_support.hpp"

namespace kbtriage {
namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no kbtriage::Error thrown";
  return Errc::kIo;
}

EmbeddingVector vec(std::vector<float> v) { return {std::move(v)}; }

TEST(MockEmbedder, GoldenVector) {
  // FNV-1a 64 of "kernel" and "panic" land in buckets 24 and 20.
  const auto v = MockEmbedder().embed("Kernel panic!");
  ASSERT_EQ(v.dim(), 64u);
  const float half = static_cast<float>(1.0 / std::sqrt(2.0));
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(v.values[i], (i == 20 || i == 24) ? half : 0.0f) << i;
  }
  EXPECT_EQ(MockEmbedder().embed("--").values, std::vector<float>(64, 0.0f));
}

TEST(MockEmbedder, DeterministicAndUnitNorm) {
  const MockEmbedder e;
  const auto a = e.embed("ext4 journal abort on remount after usb disconnect");
  EXPECT_EQ(a, e.embed("ext4 journal abort on remount after usb disconnect"));
  double norm = 0.0;
  for (float x : a.values) norm += static_cast<double>(x) * x;
  EXPECT_NEAR(norm, 1.0, 1e-6);
}

TEST(Embed, ValidatesInputAndOutput) {
  const MockEmbedder e;
  EXPECT_EQ(code_of([&] { embed("", e); }), Errc::kInvalidArgument);
  struct Short final : Embedder {
    std::string id() const override { return "short"; }
    std::size_t dim() const override { return 4; }
    EmbeddingVector embed(std::string_view) const override { return {{1.0f, 0.0f}}; }
  } short_embedder;
  EXPECT_EQ(code_of([&] { kbtriage::embed("x", short_embedder); }), Errc::kDimensionMismatch);
  struct Broken final : Embedder {
    std::string id() const override { return "broken"; }
    std::size_t dim() const override { return 1; }
    EmbeddingVector embed(std::string_view) const override { return {{NAN}}; }
  } broken;
  EXPECT_EQ(code_of([&] { kbtriage::embed("x", broken); }), Errc::kEmbedderFailure);
}

TEST(Cosine, HandValues) {
  EXPECT_NEAR(cosine_similarity(vec({1, 2, 2}), vec({2, 1, 2})), 8.0 / 9.0, 1e-12);
  EXPECT_NEAR(cosine_similarity(vec({1, 0}), vec({0, 3})), 0.0, 1e-12);
  EXPECT_NEAR(cosine_similarity(vec({1, 1}), vec({-2, -2})), -1.0, 1e-12);
  EXPECT_EQ(code_of([] { cosine_similarity(vec({1, 2}), vec({1, 2, 3})); }), Errc::kDimensionMismatch);
  EXPECT_EQ(code_of([] { cosine_similarity(vec({0, 0}), vec({1, 2})); }), Errc::kZeroVector);
}

TEST(Cosine, SymmetricAndScaleInvariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<float> a(8), b(8), a2(8);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    for (std::size_t i = 0; i < 8; ++i) a2[i] = a[i] * 4.0f;
    const double ab = cosine_similarity(vec(a), vec(b));
    EXPECT_NEAR(ab, cosine_similarity(vec(b), vec(a)), 1e-12);
    EXPECT_NEAR(ab, cosine_similarity(vec(a2), vec(b)), 1e-6);
    EXPECT_LE(std::fabs(ab), 1.0 + 1e-12);
  }
}

KnowledgeBase random_kb(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<float> g;
  std::vector<KnowledgeBaseEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    KnowledgeBaseEntry e;
    e.key = {Source::kBugzilla, std::to_string(1000 + i)};
    e.label = i % 3 == 0 ? Label::kFalsePositive : Label::kGenuineBug;
    e.text = "report " + std::to_string(i);
    e.vector.values.resize(dim);
    for (auto& x : e.vector.values) x = g(rng);
    entries.push_back(std::move(e));
  }
  return KnowledgeBase(dim, "test", std::move(entries));
}

std::vector<Neighbor> brute_force(const EmbeddingVector& q, const KnowledgeBase& kb, Label label,
                                  std::size_t k, const ReportKey* exclude) {
  std::vector<Neighbor> all;
  for (const auto& e : kb.entries()) {
    if (e.label != label || (exclude && e.key == *exclude)) continue;
    all.push_back({e.key, cosine_similarity(q, e.vector)});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.key < b.key;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

TEST(Retrieve, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  const auto kb = random_kb(rng, 50, 16);
  std::normal_distribution<float> g;
  for (int q = 0; q < 100; ++q) {
    EmbeddingVector query;
    query.values.resize(16);
    for (auto& x : query.values) x = g(rng);
    for (std::size_t k : {1u, 3u}) {
      const auto r = retrieve_balanced(query, kb, k);
      EXPECT_EQ(r.genuine_neighbors, brute_force(query, kb, Label::kGenuineBug, k, nullptr));
      EXPECT_EQ(r.fp_neighbors, brute_force(query, kb, Label::kFalsePositive, k, nullptr));
    }
  }
}

TEST(Retrieve, NeverReturnsExcludedKey) {
  std::mt19937_64 rng(23);
  const auto kb = random_kb(rng, 30, 8);
  for (const auto& e : kb.entries()) {
    const auto r = retrieve_balanced(e.vector, kb, 2, &e.key);
    for (const auto& n : r.genuine_neighbors) EXPECT_NE(n.key, e.key);
    for (const auto& n : r.fp_neighbors) EXPECT_NE(n.key, e.key);
    EXPECT_EQ(r.genuine_neighbors.size(), 2u);
    EXPECT_EQ(r.fp_neighbors.size(), 2u);
  }
}

TEST(Retrieve, TiesBreakByKey) {
  std::vector<KnowledgeBaseEntry> entries{
      {{Source::kBugzilla, "b"}, Label::kGenuineBug, "b", vec({1, 0})},
      {{Source::kBugzilla, "a"}, Label::kGenuineBug, "a", vec({2, 0})},
      {{Source::kBugzilla, "c"}, Label::kFalsePositive, "c", vec({0, 1})},
  };
  const KnowledgeBase kb(2, "t", entries);
  const auto r = retrieve_balanced(vec({1, 0}), kb, 1);
  EXPECT_EQ(r.genuine_neighbors.at(0).key.id, "a");
}

TEST(Retrieve, InsufficientClass) {
  std::vector<KnowledgeBaseEntry> entries{
      {{Source::kBugzilla, "1"}, Label::kGenuineBug, "x", vec({1, 0})},
      {{Source::kBugzilla, "2"}, Label::kFalsePositive, "y", vec({0, 1})},
  };
  const KnowledgeBase kb(2, "t", entries);
  EXPECT_EQ(code_of([&] { retrieve_balanced(vec({1, 1}), kb, 2); }), Errc::kInsufficientClass);
  const ReportKey self{Source::kBugzilla, "2"};
  EXPECT_EQ(code_of([&] { retrieve_balanced(vec({1, 1}), kb, 1, &self); }), Errc::kInsufficientClass);
  EXPECT_EQ(code_of([&] { retrieve_balanced(vec({1, 1, 1}), kb, 1); }), Errc::kDimensionMismatch);
}

std::vector<BugReport> reports(std::size_t n) {
  std::vector<BugReport> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testing::bugzilla_report(std::to_string(500 + i), "title " + std::to_string(i),
                                           i % 2 ? "usb disconnect firmware" : "ext4 journal abort",
                                           make_timestamp(2022, 1, 1)));
  }
  return out;
}

TEST(KnowledgeBase, BuildIsDeterministicAndSorted) {
  const auto rs = reports(12);
  std::vector<LabeledReport> labeled;
  for (std::size_t i = rs.size(); i-- > 0;) {
    labeled.push_back({&rs[i], i % 2 ? Label::kFalsePositive : Label::kGenuineBug});
  }
  const MockEmbedder e;
  const auto a = build_knowledge_base(labeled, e);
  KnowledgeBaseOptions serial;
  serial.max_in_flight = 1;
  const auto b = build_knowledge_base(labeled, e, serial);
  std::ostringstream sa, sb;
  write_vector_store(sa, a);
  write_vector_store(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_TRUE(std::is_sorted(a.entries().begin(), a.entries().end(),
                             [](const auto& x, const auto& y) { return x.key < y.key; }));
  EXPECT_EQ(a.count(Label::kFalsePositive), 6u);
  EXPECT_EQ(a.entries().front().text, embedding_text(rs[0]));
}

TEST(KnowledgeBase, EmbedFailureAbortsBuild) {
  struct Failing final : Embedder {
    std::string id() const override { return "f"; }
    std::size_t dim() const override { return 2; }
    EmbeddingVector embed(std::string_view text) const override {
      if (text.find("title 3") != std::string_view::npos) fail(Errc::kClientFailure, "down");
      return {{1.0f, 0.0f}};
    }
  } failing;
  const auto rs = reports(5);
  std::vector<LabeledReport> labeled;
  for (const auto& r : rs) labeled.push_back({&r, Label::kGenuineBug});
  EXPECT_EQ(code_of([&] { build_knowledge_base(labeled, failing); }), Errc::kEmbedderFailure);
}

TEST(VectorStore, RoundTripAndFileSave) {
  std::mt19937_64 rng(1);
  const auto kb = random_kb(rng, 10, 5);
  std::stringstream s;
  write_vector_store(s, kb);
  const auto back = read_vector_store(s);
  EXPECT_EQ(back.dim(), 5u);
  EXPECT_EQ(back.embedder_id(), "test");
  ASSERT_EQ(back.size(), kb.size());
  for (std::size_t i = 0; i < kb.size(); ++i) {
    EXPECT_EQ(back.entries()[i].key, kb.entries()[i].key);
    EXPECT_EQ(back.entries()[i].vector, kb.entries()[i].vector);
    EXPECT_EQ(back.entries()[i].text, kb.entries()[i].text);
  }
  testing::TempDir dir("store");
  save_vector_store(dir / "kb.bin", kb);
  std::ostringstream again;
  write_vector_store(again, load_vector_store(dir / "kb.bin"));
  EXPECT_EQ(again.str(), testing::slurp(dir / "kb.bin"));
}

TEST(VectorStore, MalformedInputs) {
  std::mt19937_64 rng(1);
  std::ostringstream s;
  write_vector_store(s, random_kb(rng, 3, 4));
  const auto bytes = s.str();
  EXPECT_EQ(bytes.substr(0, 4), "KBVS");
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  EXPECT_THROW(read_vector_store(in1), Error);
  std::istringstream in2(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_vector_store(in2), Error);
  EXPECT_THROW(load_vector_store("/nonexistent/kb.bin"), Error);
}

TEST(EmbeddingText, TitleBlankLineDescriptionWithinBudget) {
  const auto r = testing::bugzilla_report("1", "T", "desc", make_timestamp(2022, 1, 1));
  EXPECT_EQ(embedding_text(r), "T\n\ndesc");
  EXPECT_EQ(embedding_text(r, 4), "T\n\nd");
}

}  // namespace
}  // namespace kbtriage
