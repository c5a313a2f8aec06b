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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/label.hpp"
#include "kbtriage/stats.hpp"
#include "kbtriage/time.hpp"

namespace kbtriage {

/// Positive class is GenuineBug.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t n() const { return tp + fp + fn + tn; }
  void add(Label predicted, Label truth);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;  // 0 when nothing was predicted positive
  double recall = 0.0;     // 0 when no positives exist
  double f1 = 0.0;         // 0 when precision + recall == 0
  std::size_t n = 0;
  ConfusionMatrix confusion;
  std::string strategy;
  std::string split_id;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

MetricsReport metrics_from_confusion(const ConfusionMatrix& cm);

/// Throws kKeyMismatch when key sets differ, kEmptyInput when empty.
MetricsReport compute_metrics(const std::map<std::string, Label>& predictions,
                              const std::map<std::string, Label>& truth,
                              std::string strategy = {}, std::string split_id = {});

/// Mean of each per-fold metric alongside metrics of the summed confusion
/// matrix.
struct AggregatedMetrics {
  MetricsReport averaged;
  MetricsReport pooled;
  std::size_t folds = 0;
};

/// Throws kEmptyInput for no folds.
AggregatedMetrics aggregate_folds(std::span<const MetricsReport> folds);

// ---------------------------------------------------------------------------
// Splits

struct Fold {
  std::size_t index = 0;
  std::vector<std::string> test;
  std::vector<std::string> train;  // retrieval / training partition
};

/// Sorts the ids, shuffles them with `seeded_shuffle(seed)` and deals
/// consecutive folds; the first n % k folds hold one extra id. Each fold's
/// lists are sorted. Throws kTooFewItems (n < k), kInvalidArgument (k < 2 or
/// duplicate ids).
std::vector<Fold> kfold_split(std::vector<std::string> ids, std::size_t k, std::uint64_t seed);

struct TimedItem {
  std::string id;
  Timestamp time{};
};

/// `before` holds items strictly earlier than the cutoff; items at or after it
/// go to `after`. Input order is kept.
struct TimePartition {
  std::vector<std::string> before;
  std::vector<std::string> after;
  bool before_empty() const { return before.empty(); }
  bool after_empty() const { return after.empty(); }
};

TimePartition temporal_split(std::span<const TimedItem> items, Timestamp cutoff);
/// Partitions by open_time, in key order.
TimePartition temporal_split(const Corpus& corpus, Timestamp cutoff);

inline constexpr std::string_view kDefaultLeakCutoff = "2024-07-01";

/// leak-prone = before the cutoff, no-leak = at or after it.
struct LeakPartition {
  std::vector<std::string> leak_prone;
  std::vector<std::string> no_leak;
};

LeakPartition leak_split(std::span<const TimedItem> items,
                         Timestamp cutoff = parse_date(kDefaultLeakCutoff));
LeakPartition leak_split(const Corpus& corpus, Timestamp cutoff = parse_date(kDefaultLeakCutoff));

// ---------------------------------------------------------------------------
// Savings

struct SavingsEstimate {
  std::size_t reports = 0;
  double mean_close_days = 0.0;
  double total_hours = 0.0;
  std::optional<double> mean_latency_ms;  // absent without recorded latencies
  std::optional<double> max_latency_ms;
};

/// Ids predicted FalsePositive whose truth is FalsePositive, sorted.
std::vector<std::string> correctly_flagged_false_positives(
    const std::map<std::string, Label>& predictions, const std::map<std::string, Label>& truth);

/// Throws kMissingEffort(id) when an id lacks effort metrics.
SavingsEstimate estimate_savings(std::span<const std::string> flagged,
                                 const std::map<std::string, EffortMetrics>& effort,
                                 std::span<const double> latencies_ms = {});

}  // namespace kbtriage
