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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/taxonomy.hpp"

namespace kbtriage {

// ---------------------------------------------------------------------------
// Effort

struct EffortMetrics {
  std::size_t participants = 0;  // unique comment authors across threads
  std::size_t comments = 0;      // total comments across threads
  double time_to_close_hours = 0.0;

  bool operator==(const EffortMetrics&) const = default;
};

/// Bugzilla: hours from open_time to the last comment (0 without comments).
/// Syzkaller: sum over threads of hours from the thread's first to its last
/// comment. Reporter comments count towards participants.
/// Throws kNegativeDuration when a comment predates open_time.
EffortMetrics compute_effort(const BugReport& report);

// ---------------------------------------------------------------------------
// Hypothesis tests

enum class Magnitude { kNegligible, kSmall, kMedium, kLarge };

std::string_view to_string(Magnitude m) noexcept;

/// |delta| < 0.147 Negligible, < 0.33 Small, < 0.474 Medium, else Large.
Magnitude magnitude_of(double delta) noexcept;

enum class TestMethod { kExact, kNormalApproximation, kAsymptotic, kNone };

std::string_view to_string(TestMethod m) noexcept;

struct TestResult {
  double statistic = 0.0;         // U, chi-square, W+ or delta
  std::optional<double> p_value;  // two-sided; absent for pure effect sizes
  std::optional<double> effect;
  std::optional<Magnitude> magnitude;  // present iff effect present
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::optional<int> dof;
  TestMethod method = TestMethod::kNone;
};

enum class MethodChoice { kAuto, kExact, kNormal };

/// Two-sided Mann-Whitney U test; `statistic` is U for sample `a`
/// (count of pairs a>b plus half the ties). Auto uses the exact null
/// distribution when n_a + n_b <= 12 and there are no ties, else the normal
/// approximation with tie-corrected variance and continuity correction.
/// Two-sided p = min(1, 2 * min(P(U <= u), P(U >= u))).
/// Throws kEmptySample; kInvalidArgument when kExact is forced with ties.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          MethodChoice method = MethodChoice::kAuto);

/// Cliff's delta with magnitude band; p_value is not set. Throws kEmptySample.
TestResult cliffs_delta(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square test of independence, no continuity correction.
/// Throws kDegenerateTable for tables smaller than 2x2, ragged rows,
/// negative cells, or a zero row/column margin.
TestResult chi_square_independence(const std::vector<std::vector<double>>& table);

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; |d| ranked with midranks; `statistic` is W+. Exact
/// enumeration of sign patterns for up to 12 non-zero pairs, else the normal
/// approximation with tie correction and continuity correction.
/// Throws kEmptySample, kLengthMismatch, kAllZeroDifferences.
TestResult wilcoxon_signed_rank(std::span<const double> paired_a,
                                std::span<const double> paired_b,
                                MethodChoice method = MethodChoice::kAuto);

// Distribution helpers (exposed for tests and reports).
double normal_two_sided_p(double z);
/// Upper regularized incomplete gamma Q(s, x).
double regularized_gamma_q(double s, double x);
/// Upper tail P(X >= x) for a chi-square variable with `dof` degrees.
double chi_square_sf(double x, double dof);

double median(std::vector<double> values);
double mean(std::span<const double> values);

// ---------------------------------------------------------------------------
// Distribution analytics

/// One labeled report as seen by the component/root-cause analytics.
struct Observation {
  ReportKey key;
  Label label = Label::kGenuineBug;
  Component component;
  std::optional<RootCauseCategory> root_cause;  // expected for false positives
};

struct ComponentDistribution {
  struct Row {
    Component component;
    std::size_t bugzilla = 0;
    std::size_t syzkaller = 0;
    std::size_t total = 0;
    double share_bugzilla = 0.0;  // of all Bugzilla false positives
    double share_syzkaller = 0.0;
    double share_total = 0.0;
  };

  std::vector<Row> rows;  // descending by total, then component order
  std::size_t total_bugzilla = 0;
  std::size_t total_syzkaller = 0;
  std::size_t total = 0;

  const Row* find(ComponentKind kind) const;
};

/// Histogram of false-positive reports per component, split by source.
ComponentDistribution component_distribution(std::span<const Observation> observations);

struct ProportionMatrix {
  std::vector<ComponentKind> rows;  // named components with >= 1 false positive
  std::vector<std::array<std::size_t, 4>> counts;
  std::vector<std::array<double, 4>> cells;  // each row sums to 1

  std::optional<std::size_t> row_index(ComponentKind kind) const;
  /// Counts as a chi-square input table.
  std::vector<std::vector<double>> count_table() const;
};

/// Row-stochastic component x root-cause matrix over false positives in the
/// seven named components. Throws kMissingRootCause(report key).
ProportionMatrix stagewise_proportions(std::span<const Observation> observations);

// ---------------------------------------------------------------------------
// Effort comparison battery

enum class EffortMetric { kParticipants, kComments, kTimeToClose };

std::string_view to_string(EffortMetric m) noexcept;
double metric_value(const EffortMetrics& e, EffortMetric m) noexcept;

struct EffortComparison {
  EffortMetric metric;
  Source source;
  TestResult mann_whitney;
  TestResult cliffs;  // delta of false positives vs genuine bugs
  double mean_fp = 0.0;
  double mean_genuine = 0.0;
  double median_fp = 0.0;
  double median_genuine = 0.0;
};

struct EffortSample {
  Source source;
  Label label;
  EffortMetrics effort;
};

/// Mann-Whitney and Cliff's delta for each metric and source with both
/// classes present, in (metric, source) order.
std::vector<EffortComparison> compare_effort(std::span<const EffortSample> samples);

}  // namespace kbtriage
