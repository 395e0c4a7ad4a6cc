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

#pragma once

#include <optional>
#include <span>

#include "stgfn/data/types.hpp"
#include "stgfn/model/stgfn.hpp"

namespace stgfn::evaluation {

struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::size_t n = 0;
  std::size_t positives = 0;
  std::size_t predicted_positives = 0;
};

/// Predicted positive iff probability >= threshold. F1 is 1 when there are
/// no predicted and no actual positives, 0 when only actual positives exist.
/// Throws ContractError on empty or mismatched input or non-0/1 labels.
ClassificationMetrics classification_metrics(std::span<const double> probabilities, std::span<const int> labels,
                                             double threshold = 0.5);

/// Rank form of P(score_pos > score_neg) + P(tie)/2. Throws
/// UndefinedMetricError when only one class is present.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

/// Mean over instances of | |pred_A - pred_B| - |true_A - true_B| |.
double inequality_discrepancy(std::span<const data::UtilityPair> predicted, std::span<const data::UtilityPair> truth);

struct RegressionMetrics {
  double mae = 0.0;
  double mse = 0.0;
};

/// Over all 2N agent utilities.
RegressionMetrics regression_metrics(std::span<const data::UtilityPair> predicted,
                                     std::span<const data::UtilityPair> truth);

struct MetricsReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  /// Absent when the evaluated set has a single class.
  std::optional<double> auc;
  double mae = 0.0;
  double mse = 0.0;
  double id = 0.0;
  std::size_t n = 0;
  std::size_t positives = 0;
};

MetricsReport evaluate(std::span<const model::Prediction> predictions, std::span<const model::EncodedInstance> truth);

}  // namespace stgfn::evaluation
