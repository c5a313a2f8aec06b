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

#include <span>
#include <vector>

#include "kbtriage/features.hpp"
#include "kbtriage/label.hpp"

namespace kbtriage {

struct LogRegOptions {
  double l2 = 1.0;  // lambda
  /// Gradient step. Non-positive selects 1/L for an upper bound L on the
  /// gradient's Lipschitz constant, which makes the loss non-increasing.
  double learning_rate = 0.0;
  int epochs = 500;
};

/// Binary logistic regression with GenuineBug as class 1. Minimizes
///   (1/n) sum_i logloss(y_i, w.x_i + b) + (lambda / 2n) |w|^2
/// by full-batch gradient descent; the bias is not penalized.
struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> loss_history;  // objective before each epoch, then final
  bool loss_monotone = true;         // false if any epoch increased the objective
  double learning_rate = 0.0;        // step actually used

  double probability(const FeatureVector& x) const;
  /// GenuineBug iff probability >= 0.5.
  Label predict(const FeatureVector& x) const;
};

/// Throws kEmptyTrainingSet, kLengthMismatch, kSingleClassTraining.
LogRegModel train_logreg(std::span<const FeatureVector> features, std::span<const Label> labels,
                         std::size_t dim, const LogRegOptions& options = {});

inline constexpr std::size_t kDefaultKnnK = 5;

/// Majority label among the k most cosine-similar training points (ties in
/// similarity resolved by training order). A tied vote yields FalsePositive.
/// Throws kEmptyTrainingSet, kLengthMismatch, kInvalidArgument (k out of range).
Label knn_predict(std::span<const FeatureVector> train, std::span<const Label> labels,
                  const FeatureVector& query, std::size_t k = kDefaultKnnK);

}  // namespace kbtriage
