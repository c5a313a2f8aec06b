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

#include "kbtriage/features.hpp"

#include <cmath>
#include <set>

#include "kbtriage/error.hpp"
#include "kbtriage/text.hpp"

namespace kbtriage {

FeatureVector FeatureVector::dense(std::span<const double> values) {
  FeatureVector out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) out.entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  }
  return out;
}

double FeatureVector::norm() const { return std::sqrt(dot(*this, *this)); }

double dot(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine(const FeatureVector& a, const FeatureVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

TfidfVectorizer TfidfVectorizer::fit(std::span<const std::string> documents, TfidfOptions options) {
  if (documents.empty()) fail(Errc::kEmptyCorpus, "no training documents");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& doc : documents) {
    const auto tokens = text::tokenize(doc);
    for (const auto& t : std::set<std::string>(tokens.begin(), tokens.end())) ++df[t];
  }
  TfidfVectorizer out;
  out.options_ = options;
  out.n_documents_ = documents.size();
  const double n = static_cast<double>(documents.size());
  for (const auto& [term, count] : df) {
    out.vocabulary_.emplace(term, static_cast<std::uint32_t>(out.idf_.size()));
    out.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return out;
}

FeatureVector TfidfVectorizer::transform(std::string_view document) const {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : text::tokenize(document)) {
    if (auto it = vocabulary_.find(t); it != vocabulary_.end()) tf[it->second] += 1.0;
  }
  FeatureVector out;
  out.entries.reserve(tf.size());
  for (const auto& [index, count] : tf) out.entries.emplace_back(index, count * idf_[index]);
  if (options_.l2_normalize) {
    const double norm = out.norm();
    if (norm > 0.0) {
      for (auto& e : out.entries) e.second /= norm;
    }
  }
  return out;
}

}  // namespace kbtriage
