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

#include "kbtriage/stats.hpp"

namespace {

std::vector<double> sample(std::mt19937_64& rng, std::size_t n, double shift) {
  std::lognormal_distribution<double> d(shift, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

void BM_MannWhitneyNormal(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto a = sample(rng, 303, 0.0);
  const auto b = sample(rng, 1072, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(kbtriage::mann_whitney_u(a, b));
}
BENCHMARK(BM_MannWhitneyNormal);

void BM_MannWhitneyExact(benchmark::State& state) {
  std::vector<double> a{1, 4, 5, 8, 10, 11}, b{2, 3, 6, 7, 9, 12};
  for (auto _ : state) benchmark::DoNotOptimize(kbtriage::mann_whitney_u(a, b));
}
BENCHMARK(BM_MannWhitneyExact);

void BM_CliffsDelta(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = sample(rng, 303, 0.0);
  const auto b = sample(rng, 1072, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(kbtriage::cliffs_delta(a, b));
}
BENCHMARK(BM_CliffsDelta);

}  // namespace

BENCHMARK_MAIN();
