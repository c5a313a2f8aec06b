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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kbtriage {

/// Sparse vector; entries sorted by strictly increasing index.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  static FeatureVector dense(std::span<const double> values);
  double norm() const;
  bool operator==(const FeatureVector&) const = default;
};

double dot(const FeatureVector& a, const FeatureVector& b);
/// 0 when either vector is zero, so nearest-neighbour search stays total.
double cosine(const FeatureVector& a, const FeatureVector& b);

struct TfidfOptions {
  bool l2_normalize = true;
};

/// Term frequency (raw count) times smoothed idf = ln((1 + N) / (1 + df)) + 1
/// over `text::tokenize` tokens. The vocabulary is sorted and frozen at fit
/// time; unseen tokens are dropped by transform.
class TfidfVectorizer {
 public:
  /// Throws kEmptyCorpus for an empty training set.
  static TfidfVectorizer fit(std::span<const std::string> documents, TfidfOptions options = {});

  FeatureVector transform(std::string_view document) const;
  std::size_t dim() const { return vocabulary_.size(); }
  const std::map<std::string, std::uint32_t, std::less<>>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t document_count() const { return n_documents_; }

 private:
  std::map<std::string, std::uint32_t, std::less<>> vocabulary_;
  std::vector<double> idf_;
  std::size_t n_documents_ = 0;
  TfidfOptions options_;
};

}  // namespace kbtriage
