// Copyright 2026 The stgfn Authors
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

#include "stgfn/evaluation/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "stgfn/error.hpp"

namespace stgfn::evaluation {

namespace {

void check_labels(std::span<const int> labels) {
  for (int y : labels)
    if (y != 0 && y != 1) throw ContractError("label " + std::to_string(y) + " is not 0 or 1");
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw ContractError(std::string(what) + ": length mismatch " + std::to_string(a) + " vs " + std::to_string(b));
  if (a == 0) throw ContractError(std::string(what) + ": empty input");
}

}  // namespace

ClassificationMetrics classification_metrics(std::span<const double> probabilities, std::span<const int> labels,
                                             double threshold) {
  check_lengths(probabilities.size(), labels.size(), "classification_metrics");
  check_labels(labels);
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred = probabilities[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (pred && actual) ++tp;
    if (pred && !actual) ++fp;
    if (!pred && actual) ++fn;
    if (pred == actual) ++correct;
  }
  ClassificationMetrics m;
  m.n = labels.size();
  m.positives = tp + fn;
  m.predicted_positives = tp + fp;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.n);
  if (m.predicted_positives == 0)
    m.f1 = m.positives == 0 ? 1.0 : 0.0;
  else
    m.f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
  return m;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size(), "auc_roc");
  check_labels(labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Average 1-based ranks over ties, summed over positives.
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] == 1) {
        rank_sum += avg;
        ++positives;
      }
    }
    i = j + 1;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw UndefinedMetricError("AUC needs both classes");
  const double p = static_cast<double>(positives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

double inequality_discrepancy(std::span<const data::UtilityPair> predicted, std::span<const data::UtilityPair> truth) {
  check_lengths(predicted.size(), truth.size(), "inequality_discrepancy");
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    total += std::fabs(std::fabs(predicted[i].a - predicted[i].b) - std::fabs(truth[i].a - truth[i].b));
  return total / static_cast<double>(predicted.size());
}

RegressionMetrics regression_metrics(std::span<const data::UtilityPair> predicted,
                                     std::span<const data::UtilityPair> truth) {
  check_lengths(predicted.size(), truth.size(), "regression_metrics");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double da = predicted[i].a - truth[i].a;
    const double db = predicted[i].b - truth[i].b;
    abs_sum += std::fabs(da) + std::fabs(db);
    sq_sum += da * da + db * db;
  }
  const double count = 2.0 * static_cast<double>(predicted.size());
  return {abs_sum / count, sq_sum / count};
}

MetricsReport evaluate(std::span<const model::Prediction> predictions, std::span<const model::EncodedInstance> truth) {
  check_lengths(predictions.size(), truth.size(), "evaluate");
  std::vector<double> probs;
  std::vector<int> labels;
  std::vector<data::UtilityPair> pred_u, true_u;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    probs.push_back(predictions[i].probability);
    labels.push_back(truth[i].outcome);
    pred_u.push_back(predictions[i].utilities);
    true_u.push_back(truth[i].utilities);
  }
  MetricsReport r;
  const auto cls = classification_metrics(probs, labels);
  r.accuracy = cls.accuracy;
  r.f1 = cls.f1;
  r.n = cls.n;
  r.positives = cls.positives;
  if (cls.positives > 0 && cls.positives < cls.n) r.auc = auc_roc(probs, labels);
  const auto reg = regression_metrics(pred_u, true_u);
  r.mae = reg.mae;
  r.mse = reg.mse;
  r.id = inequality_discrepancy(pred_u, true_u);
  return r;
}

}  // namespace stgfn::evaluation
