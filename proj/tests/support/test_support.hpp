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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kbtriage/corpus.hpp"
#include "kbtriage/time.hpp"

namespace kbtriage::testing {

inline std::filesystem::path fixture_dir() { return KBTRIAGE_FIXTURE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return fixture_dir() / name; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("kbtriage-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CommentSpec {
  std::string author;
  double hours_after_open = 0.0;
  std::string body = "comment";
};

inline BugReport bugzilla_report(const std::string& id, const std::string& title,
                                 const std::string& description, Timestamp open,
                                 std::vector<CommentSpec> comments = {},
                                 std::string reporter = "reporter@example.org") {
  BugReport r;
  r.id = id;
  r.source = Source::kBugzilla;
  r.title = title;
  r.description = description;
  r.status = "RESOLVED";
  r.resolution = "CODE_FIX";
  r.component_raw = "File System/ext4";
  r.open_time = open;
  DiscussionThread t;
  t.thread_id = id;
  for (const auto& c : comments) {
    t.comments.push_back({c.author, open + std::chrono::seconds(static_cast<long>(c.hours_after_open * 3600)),
                          c.body, c.author == reporter});
  }
  r.discussions.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------------------
// Brute-force oracles. Each enumerates the full null distribution directly
// instead of using a recurrence.

/// Two-sided p from full enumeration counts, in the same arithmetic form the
/// library uses so equality can be exact.
inline double two_sided(std::uint64_t le, std::uint64_t ge, std::uint64_t total) {
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

inline double pairwise_u(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) u += 1.0;
      if (x == y) u += 0.5;
    }
  }
  return u;
}

/// Exact Mann-Whitney p for tie-free samples: every way of choosing which
/// n_a of the pooled ranks belong to sample a.
inline double mann_whitney_enumerated_p(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size() + b.size();
  const double observed = pairwise_u(a, b);
  std::uint64_t le = 0, ge = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
    // Ranks 1..n; U = sum of a-ranks - n_a(n_a+1)/2.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) rank_sum += static_cast<double>(i + 1);
    }
    const double na = static_cast<double>(a.size());
    const double u = rank_sum - na * (na + 1.0) / 2.0;
    ++total;
    if (u <= observed) ++le;
    if (u >= observed) ++ge;
  }
  return two_sided(le, ge, total);
}

inline double cliffs_delta_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
  long greater = 0, less = 0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) ++greater;
      if (x < y) ++less;
    }
  }
  return static_cast<double>(greater - less) / static_cast<double>(a.size() * b.size());
}

/// Exact Wilcoxon signed-rank p for non-zero differences with distinct
/// magnitudes: every assignment of signs to the ranks 1..m.
inline double wilcoxon_enumerated_p(const std::vector<double>& diffs) {
  const std::size_t m = diffs.size();
  std::vector<double> mags;
  for (double d : diffs) mags.push_back(std::fabs(d));
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return mags[x] < mags[y]; });
  std::vector<double> rank(m);
  for (std::size_t r = 0; r < m; ++r) rank[order[r]] = static_cast<double>(r + 1);
  double observed = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (diffs[i] > 0) observed += rank[i];
  }
  std::uint64_t le = 0, ge = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) w += rank[i];
    }
    ++total;
    if (w <= observed) ++le;
    if (w >= observed) ++ge;
  }
  return two_sided(le, ge, total);
}

}  // namespace kbtriage::testing
