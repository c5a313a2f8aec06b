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

#include "kbtriage/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {
namespace {

struct Ranking {
  std::vector<double> ranks;  // midranks, aligned with the input order
  double tie_term = 0.0;      // sum over tie groups of t^3 - t
  bool has_ties = false;
};

Ranking midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  Ranking r;
  r.ranks.assign(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r.ranks[order[k]] = rank;
    const double t = static_cast<double>(j - i + 1);
    if (j > i) {
      r.has_ties = true;
      r.tie_term += t * t * t - t;
    }
    i = j + 1;
  }
  return r;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(Errc::kInvalidArgument, fmt::format("{} has a non-finite value", what));
  }
}

double two_sided_from_counts(std::uint64_t le, std::uint64_t ge, std::uint64_t total) {
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

// Number of ways each U value arises when m items of one sample and n of the
// other are ranked without ties: f(m, n, u) = f(m-1, n, u-n) + f(m, n-1, u).
std::vector<std::uint64_t> mann_whitney_null_counts(std::size_t m, std::size_t n) {
  // table[j][u] holds f(i, j, u) for the current i.
  std::vector<std::vector<std::uint64_t>> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = {1};  // f(0, j, 0) = 1
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = {1};  // f(i, 0, 0) = 1
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<std::uint64_t> row(i * j + 1, 0);
      for (std::size_t u = 0; u < cur[j - 1].size(); ++u) row[u] += cur[j - 1][u];
      for (std::size_t u = 0; u < prev[j].size(); ++u) row[u + j] += prev[j][u];
      cur[j] = std::move(row);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace

// ---------------------------------------------------------------------------

EffortMetrics compute_effort(const BugReport& report) {
  EffortMetrics out;
  std::set<std::string, std::less<>> authors;
  for (const auto& thread : report.discussions) {
    for (const auto& c : thread.comments) {
      if (c.timestamp < report.open_time) {
        fail(Errc::kNegativeDuration,
             fmt::format("{}: comment at {} predates open_time {}", report.key().str(),
                         format_timestamp(c.timestamp), format_timestamp(report.open_time)));
      }
      authors.emplace(text::trim(c.author));
      ++out.comments;
    }
  }
  out.participants = authors.size();

  if (report.source == Source::kBugzilla) {
    std::optional<Timestamp> last;
    for (const auto& thread : report.discussions) {
      for (const auto& c : thread.comments) {
        if (!last || c.timestamp > *last) last = c.timestamp;
      }
    }
    out.time_to_close_hours = last ? hours_between(report.open_time, *last) : 0.0;
  } else {
    for (const auto& thread : report.discussions) {
      if (thread.comments.empty()) continue;
      auto [first, last] = std::minmax_element(
          thread.comments.begin(), thread.comments.end(),
          [](const Comment& a, const Comment& b) { return a.timestamp < b.timestamp; });
      out.time_to_close_hours += hours_between(first->timestamp, last->timestamp);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Magnitude m) noexcept {
  switch (m) {
    case Magnitude::kNegligible: return "Negligible";
    case Magnitude::kSmall: return "Small";
    case Magnitude::kMedium: return "Medium";
    case Magnitude::kLarge: return "Large";
  }
  return "Negligible";
}

Magnitude magnitude_of(double delta) noexcept {
  const double a = std::fabs(delta);
  if (a < 0.147) return Magnitude::kNegligible;
  if (a < 0.33) return Magnitude::kSmall;
  if (a < 0.474) return Magnitude::kMedium;
  return Magnitude::kLarge;
}

std::string_view to_string(TestMethod m) noexcept {
  switch (m) {
    case TestMethod::kExact: return "exact";
    case TestMethod::kNormalApproximation: return "normal";
    case TestMethod::kAsymptotic: return "asymptotic";
    case TestMethod::kNone: return "none";
  }
  return "none";
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          MethodChoice method) {
  if (a.empty() || b.empty()) fail(Errc::kEmptySample, "mann_whitney_u needs two non-empty samples");
  require_finite(a, "sample a");
  require_finite(b, "sample b");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const Ranking ranking = midranks(pooled);
  const double rank_sum_a = std::accumulate(ranking.ranks.begin(), ranking.ranks.begin() + na, 0.0);
  const double u_a = rank_sum_a - static_cast<double>(na * (na + 1)) / 2.0;

  TestResult result;
  result.statistic = u_a;
  result.n_a = na;
  result.n_b = nb;

  bool exact = method == MethodChoice::kExact ||
               (method == MethodChoice::kAuto && n <= 12 && !ranking.has_ties);
  if (exact) {
    if (ranking.has_ties) fail(Errc::kInvalidArgument, "exact Mann-Whitney requires tie-free samples");
    if (n > 60) fail(Errc::kInvalidArgument, "exact Mann-Whitney limited to 60 observations");
    const auto counts = mann_whitney_null_counts(na, nb);
    const auto u = static_cast<std::size_t>(std::llround(u_a));
    std::uint64_t le = 0, ge = 0, total = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      total += counts[k];
      if (k <= u) le += counts[k];
      if (k >= u) ge += counts[k];
    }
    result.p_value = two_sided_from_counts(le, ge, total);
    result.method = TestMethod::kExact;
    return result;
  }

  const double nn = static_cast<double>(n);
  const double mu = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
  const double variance = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                          ((nn + 1.0) - ranking.tie_term / (nn * (nn - 1.0)));
  result.method = TestMethod::kNormalApproximation;
  if (!(variance > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::fabs(u_a - mu) - 0.5) / std::sqrt(variance);
  result.p_value = normal_two_sided_p(z);
  return result;
}

TestResult cliffs_delta(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(Errc::kEmptySample, "cliffs_delta needs two non-empty samples");
  require_finite(a, "sample a");
  require_finite(b, "sample b");
  std::vector<double> sorted_b(b.begin(), b.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  std::int64_t dominance = 0;
  for (double x : a) {
    const auto below = std::lower_bound(sorted_b.begin(), sorted_b.end(), x) - sorted_b.begin();
    const auto above = sorted_b.end() - std::upper_bound(sorted_b.begin(), sorted_b.end(), x);
    dominance += below - above;
  }
  const double delta = static_cast<double>(dominance) /
                       (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  TestResult result;
  result.statistic = delta;
  result.effect = delta;
  result.magnitude = magnitude_of(delta);
  result.n_a = a.size();
  result.n_b = b.size();
  return result;
}

TestResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) fail(Errc::kDegenerateTable, "need at least two rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) fail(Errc::kDegenerateTable, "need at least two columns");
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) fail(Errc::kDegenerateTable, "ragged table");
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = table[i][j];
      if (!std::isfinite(v) || v < 0.0) fail(Errc::kDegenerateTable, "cells must be finite counts");
      row_sum[i] += v;
      col_sum[j] += v;
      total += v;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_sum[i] <= 0.0) fail(Errc::kDegenerateTable, fmt::format("row {} sums to zero", i));
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_sum[j] <= 0.0) fail(Errc::kDegenerateTable, fmt::format("column {} sums to zero", j));
  }
  double statistic = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = table[i][j] - expected;
      statistic += diff * diff / expected;
    }
  }
  TestResult result;
  result.statistic = statistic;
  result.dof = static_cast<int>((rows - 1) * (cols - 1));
  result.p_value = chi_square_sf(statistic, *result.dof);
  result.n_a = rows;
  result.n_b = cols;
  result.method = TestMethod::kAsymptotic;
  return result;
}

TestResult wilcoxon_signed_rank(std::span<const double> paired_a, std::span<const double> paired_b,
                                MethodChoice method) {
  if (paired_a.empty() || paired_b.empty()) fail(Errc::kEmptySample, "wilcoxon needs paired samples");
  if (paired_a.size() != paired_b.size()) {
    fail(Errc::kLengthMismatch,
         fmt::format("{} vs {} observations", paired_a.size(), paired_b.size()));
  }
  require_finite(paired_a, "sample a");
  require_finite(paired_b, "sample b");

  std::vector<double> abs_diff;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < paired_a.size(); ++i) {
    const double d = paired_a[i] - paired_b[i];
    if (d == 0.0) continue;
    abs_diff.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  if (abs_diff.empty()) fail(Errc::kAllZeroDifferences, "every paired difference is zero");

  const std::size_t n = abs_diff.size();
  const Ranking ranking = midranks(abs_diff);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positive[i]) w_plus += ranking.ranks[i];
  }

  TestResult result;
  result.statistic = w_plus;
  result.n_a = paired_a.size();
  result.n_b = n;

  const bool exact = method == MethodChoice::kExact || (method == MethodChoice::kAuto && n <= 12);
  if (exact) {
    if (n > 40) fail(Errc::kInvalidArgument, "exact Wilcoxon limited to 40 non-zero pairs");
    // Midranks are multiples of 1/2, so doubled ranks are integers.
    std::size_t max_sum = 0;
    std::vector<std::size_t> doubled(n);
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<std::size_t>(std::llround(ranking.ranks[i] * 2.0));
      max_sum += doubled[i];
    }
    std::vector<std::uint64_t> counts(max_sum + 1, 0);
    counts[0] = 1;
    std::size_t reach = 0;
    for (std::size_t r : doubled) {
      for (std::size_t s = reach + 1; s-- > 0;) {
        if (counts[s] != 0) counts[s + r] += counts[s];
      }
      reach += r;
    }
    const auto w2 = static_cast<std::size_t>(std::llround(w_plus * 2.0));
    std::uint64_t le = 0, ge = 0, total = 0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
      total += counts[s];
      if (s <= w2) le += counts[s];
      if (s >= w2) ge += counts[s];
    }
    result.p_value = two_sided_from_counts(le, ge, total);
    result.method = TestMethod::kExact;
    return result;
  }

  const double nn = static_cast<double>(n);
  const double mu = nn * (nn + 1.0) / 4.0;
  const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - ranking.tie_term / 48.0;
  result.method = TestMethod::kNormalApproximation;
  if (!(variance > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::fabs(w_plus - mu) - 0.5) / std::sqrt(variance);
  result.p_value = normal_two_sided_p(z);
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) fail(Errc::kEmptySample, "median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

double mean(std::span<const double> values) {
  if (values.empty()) fail(Errc::kEmptySample, "mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------

const ComponentDistribution::Row* ComponentDistribution::find(ComponentKind kind) const {
  for (const auto& row : rows) {
    if (row.component.kind == kind && kind != ComponentKind::kOther) return &row;
  }
  return nullptr;
}

ComponentDistribution component_distribution(std::span<const Observation> observations) {
  std::map<Component, ComponentDistribution::Row> by_component;
  ComponentDistribution out;
  for (const auto& obs : observations) {
    if (obs.label != Label::kFalsePositive) continue;
    auto& row = by_component[obs.component];
    row.component = obs.component;
    if (obs.key.source == Source::kBugzilla) {
      ++row.bugzilla;
      ++out.total_bugzilla;
    } else {
      ++row.syzkaller;
      ++out.total_syzkaller;
    }
    ++row.total;
    ++out.total;
  }
  auto share = [](std::size_t count, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
  };
  for (auto& [component, row] : by_component) {
    row.share_bugzilla = share(row.bugzilla, out.total_bugzilla);
    row.share_syzkaller = share(row.syzkaller, out.total_syzkaller);
    row.share_total = share(row.total, out.total);
    out.rows.push_back(row);
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const auto& x, const auto& y) { return x.total > y.total; });
  return out;
}

std::optional<std::size_t> ProportionMatrix::row_index(ComponentKind kind) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] == kind) return i;
  }
  return std::nullopt;
}

std::vector<std::vector<double>> ProportionMatrix::count_table() const {
  std::vector<std::vector<double>> table;
  for (const auto& row : counts) table.emplace_back(row.begin(), row.end());
  return table;
}

ProportionMatrix stagewise_proportions(std::span<const Observation> observations) {
  std::map<ComponentKind, std::array<std::size_t, 4>> counts;
  for (const auto& obs : observations) {
    if (obs.label != Label::kFalsePositive) continue;
    if (!obs.root_cause) fail(Errc::kMissingRootCause, obs.key.str());
    if (!obs.component.is_named()) continue;
    counts[obs.component.kind][static_cast<std::size_t>(*obs.root_cause)] += 1;
  }
  ProportionMatrix m;
  for (ComponentKind kind : kNamedComponents) {
    auto it = counts.find(kind);
    if (it == counts.end()) continue;
    const auto& row = it->second;
    const double total = static_cast<double>(std::accumulate(row.begin(), row.end(), std::size_t{0}));
    std::array<double, 4> cells{};
    for (std::size_t j = 0; j < 4; ++j) cells[j] = static_cast<double>(row[j]) / total;
    m.rows.push_back(kind);
    m.counts.push_back(row);
    m.cells.push_back(cells);
  }
  return m;
}

// ---------------------------------------------------------------------------

std::string_view to_string(EffortMetric m) noexcept {
  switch (m) {
    case EffortMetric::kParticipants: return "Number of Participants";
    case EffortMetric::kComments: return "Number of Comments";
    case EffortMetric::kTimeToClose: return "Time to Close (hours)";
  }
  return "";
}

double metric_value(const EffortMetrics& e, EffortMetric m) noexcept {
  switch (m) {
    case EffortMetric::kParticipants: return static_cast<double>(e.participants);
    case EffortMetric::kComments: return static_cast<double>(e.comments);
    case EffortMetric::kTimeToClose: return e.time_to_close_hours;
  }
  return 0.0;
}

std::vector<EffortComparison> compare_effort(std::span<const EffortSample> samples) {
  std::vector<EffortComparison> out;
  for (auto metric : {EffortMetric::kParticipants, EffortMetric::kComments,
                      EffortMetric::kTimeToClose}) {
    for (auto source : {Source::kBugzilla, Source::kSyzkaller}) {
      std::vector<double> fp, genuine;
      for (const auto& s : samples) {
        if (s.source != source) continue;
        (s.label == Label::kFalsePositive ? fp : genuine).push_back(metric_value(s.effort, metric));
      }
      if (fp.empty() || genuine.empty()) continue;
      EffortComparison cmp{metric, source, mann_whitney_u(fp, genuine), cliffs_delta(fp, genuine)};
      cmp.mean_fp = mean(fp);
      cmp.mean_genuine = mean(genuine);
      cmp.median_fp = median(fp);
      cmp.median_genuine = median(genuine);
      out.push_back(std::move(cmp));
    }
  }
  return out;
}

}  // namespace kbtriage
