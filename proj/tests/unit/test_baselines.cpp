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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kbtriage/baselines.hpp"
#include "kbtriage/error.hpp"
#include "kbtriage/features.hpp"

namespace kbtriage {
namespace {

TEST(Tfidf, SmoothedIdfByHand) {
  const std::vector<std::string> docs{"a b", "a c"};
  TfidfOptions raw;
  raw.l2_normalize = false;
  const auto v = TfidfVectorizer::fit(docs, raw);
  ASSERT_EQ(v.dim(), 3u);
  EXPECT_EQ(v.vocabulary().at("a"), 0u);
  EXPECT_EQ(v.vocabulary().at("c"), 2u);
  const double idf_b = std::log(3.0 / 2.0) + 1.0;
  EXPECT_NEAR(v.idf()[0], 1.0, 1e-12);
  EXPECT_NEAR(v.idf()[1], idf_b, 1e-12);
  const auto x = v.transform("A b b zzz");
  ASSERT_EQ(x.entries.size(), 2u);
  EXPECT_EQ(x.entries[0].first, 0u);
  EXPECT_NEAR(x.entries[0].second, 1.0, 1e-12);
  EXPECT_NEAR(x.entries[1].second, 2.0 * idf_b, 1e-12);
  EXPECT_TRUE(v.transform("unknown words").entries.empty());
}

TEST(Tfidf, NormalizedRowsAndEmptyCorpus) {
  const std::vector<std::string> docs{"usb disconnect firmware", "ext4 journal abort ext4"};
  const auto v = TfidfVectorizer::fit(docs);
  EXPECT_NEAR(v.transform(docs[1]).norm(), 1.0, 1e-12);
  const std::vector<std::string> none;
  EXPECT_THROW(TfidfVectorizer::fit(none), Error);
}

TEST(Features, DotAndCosine) {
  const std::vector<double> a{1, 0, 2}, b{0, 3, 4};
  const auto fa = FeatureVector::dense(a), fb = FeatureVector::dense(b);
  EXPECT_EQ(fa.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(dot(fa, fb), 8.0);
  EXPECT_NEAR(cosine(fa, fb), 8.0 / (std::sqrt(5.0) * 5.0), 1e-12);
  EXPECT_DOUBLE_EQ(cosine(fa, FeatureVector{}), 0.0);
}

// Two Gaussian blobs split by the line x + y = 0.
void separable(std::mt19937_64& rng, std::size_t n, std::vector<FeatureVector>& xs, std::vector<Label>& ys) {
  std::normal_distribution<double> g(0.0, 0.3);
  for (std::size_t i = 0; i < n; ++i) {
    const bool genuine = i % 2 == 0;
    const double c = genuine ? 2.0 : -2.0;
    const std::vector<double> p{c + g(rng), c + g(rng)};
    xs.push_back(FeatureVector::dense(p));
    ys.push_back(genuine ? Label::kGenuineBug : Label::kFalsePositive);
  }
}

TEST(LogReg, SeparableDataReachesFullAccuracy) {
  std::mt19937_64 rng(4);
  std::vector<FeatureVector> xs;
  std::vector<Label> ys;
  separable(rng, 100, xs, ys);
  LogRegOptions opt;
  opt.l2 = 0.01;
  opt.epochs = 500;
  const auto m = train_logreg(xs, ys, 2, opt);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) correct += m.predict(xs[i]) == ys[i];
  EXPECT_EQ(correct, xs.size());
  EXPECT_TRUE(m.loss_monotone);
  EXPECT_EQ(m.loss_history.size(), 501u);
  EXPECT_GT(m.loss_history.front(), m.loss_history.back());
}

TEST(LogReg, Errors) {
  const std::vector<FeatureVector> xs{FeatureVector::dense(std::vector<double>{1.0})};
  const std::vector<Label> one{Label::kGenuineBug}, two{Label::kGenuineBug, Label::kGenuineBug};
  EXPECT_THROW(train_logreg(xs, one, 1), Error);
  EXPECT_THROW(train_logreg(xs, two, 1), Error);
  EXPECT_THROW(train_logreg({}, {}, 1), Error);
}

Label knn_oracle(const std::vector<FeatureVector>& train, const std::vector<Label>& labels,
                 const FeatureVector& q, std::size_t k) {
  std::vector<std::size_t> idx(train.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto a, auto b) { return cosine(q, train[a]) > cosine(q, train[b]); });
  std::size_t genuine = 0;
  for (std::size_t i = 0; i < k; ++i) genuine += labels[idx[i]] == Label::kGenuineBug;
  return 2 * genuine > k ? Label::kGenuineBug : Label::kFalsePositive;
}

TEST(Knn, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::vector<FeatureVector> train;
  std::vector<Label> labels;
  for (int i = 0; i < 40; ++i) {
    const std::vector<double> p{g(rng), g(rng), g(rng)};
    train.push_back(FeatureVector::dense(p));
    labels.push_back(rng() % 2 ? Label::kGenuineBug : Label::kFalsePositive);
  }
  for (int q = 0; q < 100; ++q) {
    const std::vector<double> p{g(rng), g(rng), g(rng)};
    const auto fq = FeatureVector::dense(p);
    for (std::size_t k : {1u, 3u, 4u}) {
      EXPECT_EQ(knn_predict(train, labels, fq, k), knn_oracle(train, labels, fq, k));
    }
  }
}

TEST(Knn, MemorizesWithKOneAndVotesMajorityWithKN) {
  std::mt19937_64 rng(9);
  std::vector<FeatureVector> xs;
  std::vector<Label> ys;
  separable(rng, 30, xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(knn_predict(xs, ys, xs[i], 1), ys[i]);
  std::vector<Label> skewed(xs.size(), Label::kGenuineBug);
  skewed[0] = Label::kFalsePositive;
  EXPECT_EQ(knn_predict(xs, skewed, xs[0], xs.size()), Label::kGenuineBug);
  EXPECT_THROW(knn_predict(xs, ys, xs[0], 0), Error);
  EXPECT_THROW(knn_predict(xs, ys, xs[0], xs.size() + 1), Error);
}

}  // namespace
}  // namespace kbtriage
