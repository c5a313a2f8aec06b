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

#include <benchmark/benchmark.h>

#include <random>

#include "kbtriage/retrieval.hpp"

namespace {

kbtriage::KnowledgeBase synthetic_kb(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  std::vector<kbtriage::KnowledgeBaseEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    kbtriage::KnowledgeBaseEntry e;
    e.key = {kbtriage::Source::kBugzilla, std::to_string(i)};
    e.label = i % 4 == 0 ? kbtriage::Label::kFalsePositive : kbtriage::Label::kGenuineBug;
    e.vector.values.resize(dim);
    for (auto& x : e.vector.values) x = g(rng);
    entries.push_back(std::move(e));
  }
  return kbtriage::KnowledgeBase(dim, "bench", std::move(entries));
}

void BM_RetrieveBalanced(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kb = synthetic_kb(n, 1536);
  const auto query = kb.entries().front().vector;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kbtriage::retrieve_balanced(query, kb, 1, &kb.entries().front().key));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RetrieveBalanced)->Arg(1375)->Arg(10000);

void BM_MockEmbed(benchmark::State& state) {
  const kbtriage::MockEmbedder embedder;
  std::string words;
  for (int i = 0; i < 500; ++i) words += "kernel panic ext4 journal ";
  for (auto _ : state) benchmark::DoNotOptimize(embedder.embed(words));
}
BENCHMARK(BM_MockEmbed);

}  // namespace
