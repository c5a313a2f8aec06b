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

#include "kbtriage/baselines.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kbtriage/error.hpp"

namespace kbtriage {
namespace {

double linear(const std::vector<double>& w, double b, const FeatureVector& x) {
  double z = b;
  for (const auto& [i, v] : x.entries) {
    if (i < w.size()) z += w[i] * v;
  }
  return z;
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double target(Label l) { return l == Label::kGenuineBug ? 1.0 : 0.0; }

double objective(const std::vector<double>& w, double b, std::span<const FeatureVector> xs,
                 std::span<const Label> ys, double l2) {
  const double n = static_cast<double>(xs.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double z = linear(w, b, xs[i]);
    loss += softplus(z) - target(ys[i]) * z;
  }
  double w2 = 0.0;
  for (double v : w) w2 += v * v;
  return loss / n + l2 / (2.0 * n) * w2;
}

}  // namespace

double LogRegModel::probability(const FeatureVector& x) const {
  return sigmoid(linear(weights, bias, x));
}

Label LogRegModel::predict(const FeatureVector& x) const {
  return probability(x) >= 0.5 ? Label::kGenuineBug : Label::kFalsePositive;
}

LogRegModel train_logreg(std::span<const FeatureVector> features, std::span<const Label> labels,
                         std::size_t dim, const LogRegOptions& options) {
  if (features.empty()) fail(Errc::kEmptyTrainingSet, "no training examples");
  if (features.size() != labels.size()) {
    fail(Errc::kLengthMismatch, fmt::format("{} features vs {} labels", features.size(), labels.size()));
  }
  const bool has_pos = std::find(labels.begin(), labels.end(), Label::kGenuineBug) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), Label::kFalsePositive) != labels.end();
  if (!has_pos || !has_neg) fail(Errc::kSingleClassTraining, "training data has a single class");
  if (options.l2 < 0.0) fail(Errc::kInvalidArgument, "negative L2 strength");

  const double n = static_cast<double>(features.size());
  double step = options.learning_rate;
  if (step <= 0.0) {
    // The logistic Hessian is bounded by X'X / 4n (bias as a constant
    // feature) plus lambda/n; trace bounds the largest eigenvalue.
    double sq = 0.0;
    for (const auto& x : features) sq += x.norm() * x.norm() + 1.0;
    step = 1.0 / (sq / (4.0 * n) + options.l2 / n);
  }

  LogRegModel model;
  model.weights.assign(dim, 0.0);
  model.learning_rate = step;
  std::vector<double> grad(dim);
  double current = objective(model.weights, model.bias, features, labels, options.l2);
  model.loss_history.push_back(current);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      const double r = sigmoid(linear(model.weights, model.bias, features[i])) - target(labels[i]);
      for (const auto& [j, v] : features[i].entries) {
        if (j < dim) grad[j] += r * v;
      }
      grad_b += r;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      model.weights[j] -= step * (grad[j] / n + options.l2 / n * model.weights[j]);
    }
    model.bias -= step * grad_b / n;
    const double next = objective(model.weights, model.bias, features, labels, options.l2);
    // Tolerates rounding noise once the optimum is reached.
    if (next > current + 1e-12 * std::max(1.0, std::abs(current))) model.loss_monotone = false;
    model.loss_history.push_back(next);
    current = next;
  }
  return model;
}

Label knn_predict(std::span<const FeatureVector> train, std::span<const Label> labels,
                  const FeatureVector& query, std::size_t k) {
  if (train.empty()) fail(Errc::kEmptyTrainingSet, "no training examples");
  if (train.size() != labels.size()) {
    fail(Errc::kLengthMismatch, fmt::format("{} features vs {} labels", train.size(), labels.size()));
  }
  if (k == 0 || k > train.size()) {
    fail(Errc::kInvalidArgument, fmt::format("k={} with {} training points", k, train.size()));
  }
  std::vector<std::pair<double, std::size_t>> sims(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) sims[i] = {cosine(query, train[i]), i};
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::size_t genuine = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (labels[sims[i].second] == Label::kGenuineBug) ++genuine;
  }
  return 2 * genuine > k ? Label::kGenuineBug : Label::kFalsePositive;
}

}  // namespace kbtriage
