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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "stgfn/evaluation/gates.hpp"
#include "stgfn/evaluation/metrics.hpp"

namespace stgfn::evaluation {

struct MetricSummary {
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single value.
  double std = 0.0;
  std::size_t count = 0;
};

MetricSummary summarize(std::span<const double> values);

/// Per-seed results of one experiment arm.
struct ArmResults {
  std::string name;
  /// Absent for the baseline.
  std::optional<double> lambda;
  std::vector<MetricsReport> per_seed;
  std::optional<GateAnalysis> gates;
};

struct ArmSummary {
  std::string name;
  std::optional<double> lambda;
  std::size_t seeds = 0;
  /// accuracy, f1, auc, mae, mse, id in that order.
  std::vector<std::pair<std::string, MetricSummary>> metrics;
  std::optional<GateAnalysis> gates;

  const MetricSummary& metric(const std::string& name) const;
};

struct ExperimentReport {
  std::vector<ArmSummary> arms;
  /// 100 * (ID_0 - ID_reg) / ID_0 between the lambda = 0 arm and the first
  /// arm with lambda > 0; absent when either is missing or ID_0 is 0.
  std::optional<double> reduction_in_id_pct;
};

/// Absent when reference is 0.
std::optional<double> id_reduction_pct(double reference, double regularized);

ExperimentReport build_report(std::span<const ArmResults> arms);

nlohmann::ordered_json to_json(const MetricsReport& report);
nlohmann::ordered_json to_json(const GateAnalysis& analysis);
nlohmann::ordered_json to_json(const ExperimentReport& report);

/// Aligned text table, one row per arm, followed by the ID reduction line.
std::string format_table(const ExperimentReport& report);

/// "+43.8%" style, or "N/A".
std::string format_reduction(const std::optional<double>& pct);

}  // namespace stgfn::evaluation
