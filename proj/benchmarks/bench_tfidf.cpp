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

#include "kbtriage/baselines.hpp"
#include "kbtriage/features.hpp"

namespace {

std::vector<std::string> documents(std::size_t n) {
  static const std::vector<std::string> vocab{"ext4", "usb", "firmware", "panic", "oops", "null",
                                              "kasan", "slab", "nvme", "timeout", "config", "user"};
  std::mt19937_64 rng(4);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string doc;
    for (int w = 0; w < 80; ++w) doc += vocab[rng() % vocab.size()] + std::to_string(rng() % 50) + " ";
    out.push_back(std::move(doc));
  }
  return out;
}

void BM_TfidfFitTransform(benchmark::State& state) {
  const auto docs = documents(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto v = kbtriage::TfidfVectorizer::fit(docs);
    for (const auto& d : docs) benchmark::DoNotOptimize(v.transform(d));
  }
}
BENCHMARK(BM_TfidfFitTransform)->Arg(1375);

void BM_LogRegTrain(benchmark::State& state) {
  const auto docs = documents(1000);
  const auto v = kbtriage::TfidfVectorizer::fit(docs);
  std::vector<kbtriage::FeatureVector> xs;
  std::vector<kbtriage::Label> ys;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    xs.push_back(v.transform(docs[i]));
    ys.push_back(i % 4 == 0 ? kbtriage::Label::kFalsePositive : kbtriage::Label::kGenuineBug);
  }
  kbtriage::LogRegOptions opt;
  opt.epochs = 100;
  for (auto _ : state) benchmark::DoNotOptimize(kbtriage::train_logreg(xs, ys, v.dim(), opt));
}
BENCHMARK(BM_LogRegTrain)->Unit(benchmark::kMillisecond);

}  // namespace
