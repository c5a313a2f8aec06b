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

#include "kbtriage/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

#include "kbtriage/error.hpp"
#include "kbtriage/random.hpp"

namespace kbtriage {

void ConfusionMatrix::add(Label predicted, Label truth) {
  const bool p = predicted == Label::kGenuineBug;
  const bool t = truth == Label::kGenuineBug;
  if (p && t) {
    ++tp;
  } else if (p) {
    ++fp;
  } else if (t) {
    ++fn;
  } else {
    ++tn;
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

MetricsReport metrics_from_confusion(const ConfusionMatrix& cm) {
  if (cm.n() == 0) fail(Errc::kEmptyInput, "empty confusion matrix");
  MetricsReport r;
  r.confusion = cm;
  r.n = cm.n();
  const auto d = [](std::size_t x) { return static_cast<double>(x); };
  r.accuracy = d(cm.tp + cm.tn) / d(r.n);
  r.precision_undefined = cm.tp + cm.fp == 0;
  r.precision = r.precision_undefined ? 0.0 : d(cm.tp) / d(cm.tp + cm.fp);
  r.recall_undefined = cm.tp + cm.fn == 0;
  r.recall = r.recall_undefined ? 0.0 : d(cm.tp) / d(cm.tp + cm.fn);
  r.f1_undefined = r.precision + r.recall == 0.0;
  r.f1 = r.f1_undefined ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

MetricsReport compute_metrics(const std::map<std::string, Label>& predictions,
                              const std::map<std::string, Label>& truth, std::string strategy,
                              std::string split_id) {
  if (predictions.empty() && truth.empty()) fail(Errc::kEmptyInput, "no predictions");
  if (predictions.size() != truth.size()) {
    fail(Errc::kKeyMismatch,
         fmt::format("{} predictions vs {} truth labels", predictions.size(), truth.size()));
  }
  ConfusionMatrix cm;
  auto t = truth.begin();
  for (const auto& [id, label] : predictions) {
    if (t->first != id) fail(Errc::kKeyMismatch, fmt::format("'{}' vs '{}'", id, t->first));
    cm.add(label, t->second);
    ++t;
  }
  auto r = metrics_from_confusion(cm);
  r.strategy = std::move(strategy);
  r.split_id = std::move(split_id);
  return r;
}

AggregatedMetrics aggregate_folds(std::span<const MetricsReport> folds) {
  if (folds.empty()) fail(Errc::kEmptyInput, "no folds");
  AggregatedMetrics out;
  out.folds = folds.size();
  ConfusionMatrix pooled;
  for (const auto& f : folds) {
    out.averaged.accuracy += f.accuracy;
    out.averaged.precision += f.precision;
    out.averaged.recall += f.recall;
    out.averaged.f1 += f.f1;
    out.averaged.precision_undefined |= f.precision_undefined;
    out.averaged.recall_undefined |= f.recall_undefined;
    out.averaged.f1_undefined |= f.f1_undefined;
    pooled += f.confusion;
  }
  const double k = static_cast<double>(folds.size());
  out.averaged.accuracy /= k;
  out.averaged.precision /= k;
  out.averaged.recall /= k;
  out.averaged.f1 /= k;
  out.averaged.confusion = pooled;
  out.averaged.n = pooled.n();
  out.averaged.strategy = folds.front().strategy;
  out.averaged.split_id = "averaged";
  out.pooled = metrics_from_confusion(pooled);
  out.pooled.strategy = folds.front().strategy;
  out.pooled.split_id = "pooled";
  return out;
}

std::vector<Fold> kfold_split(std::vector<std::string> ids, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(Errc::kInvalidArgument, "k must be at least 2");
  if (ids.size() < k) fail(Errc::kTooFewItems, fmt::format("{} items for {} folds", ids.size(), k));
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    fail(Errc::kInvalidArgument, "duplicate ids");
  }
  seeded_shuffle(std::span<std::string>(ids), seed);
  const std::size_t base = ids.size() / k;
  const std::size_t extra = ids.size() % k;
  std::vector<std::size_t> bounds{0};
  for (std::size_t i = 0; i < k; ++i) bounds.push_back(bounds.back() + base + (i < extra ? 1 : 0));

  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < k; ++i) {
    folds[i].index = i;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      auto& target = (j >= bounds[i] && j < bounds[i + 1]) ? folds[i].test : folds[i].train;
      target.push_back(ids[j]);
    }
    std::sort(folds[i].test.begin(), folds[i].test.end());
    std::sort(folds[i].train.begin(), folds[i].train.end());
  }
  return folds;
}

TimePartition temporal_split(std::span<const TimedItem> items, Timestamp cutoff) {
  TimePartition out;
  for (const auto& item : items) (item.time < cutoff ? out.before : out.after).push_back(item.id);
  return out;
}

namespace {

std::vector<TimedItem> timed_items(const Corpus& corpus) {
  std::vector<TimedItem> items;
  items.reserve(corpus.size());
  for (const auto& [key, report] : corpus.reports()) items.push_back({key.str(), report.open_time});
  return items;
}

}  // namespace

TimePartition temporal_split(const Corpus& corpus, Timestamp cutoff) {
  const auto items = timed_items(corpus);
  return temporal_split(std::span<const TimedItem>(items), cutoff);
}

LeakPartition leak_split(std::span<const TimedItem> items, Timestamp cutoff) {
  auto p = temporal_split(items, cutoff);
  return {std::move(p.before), std::move(p.after)};
}

LeakPartition leak_split(const Corpus& corpus, Timestamp cutoff) {
  const auto items = timed_items(corpus);
  return leak_split(std::span<const TimedItem>(items), cutoff);
}

std::vector<std::string> correctly_flagged_false_positives(
    const std::map<std::string, Label>& predictions, const std::map<std::string, Label>& truth) {
  std::vector<std::string> out;
  for (const auto& [id, label] : predictions) {
    if (label != Label::kFalsePositive) continue;
    if (auto it = truth.find(id); it != truth.end() && it->second == Label::kFalsePositive) {
      out.push_back(id);
    }
  }
  return out;
}

SavingsEstimate estimate_savings(std::span<const std::string> flagged,
                                 const std::map<std::string, EffortMetrics>& effort,
                                 std::span<const double> latencies_ms) {
  SavingsEstimate out;
  out.reports = flagged.size();
  for (const auto& id : flagged) {
    auto it = effort.find(id);
    if (it == effort.end()) fail(Errc::kMissingEffort, id);
    out.total_hours += it->second.time_to_close_hours;
  }
  if (!flagged.empty()) {
    out.mean_close_days = out.total_hours / 24.0 / static_cast<double>(flagged.size());
  }
  if (!latencies_ms.empty()) {
    out.mean_latency_ms = std::accumulate(latencies_ms.begin(), latencies_ms.end(), 0.0) /
                          static_cast<double>(latencies_ms.size());
    out.max_latency_ms = *std::max_element(latencies_ms.begin(), latencies_ms.end());
  }
  return out;
}

}  // namespace kbtriage
