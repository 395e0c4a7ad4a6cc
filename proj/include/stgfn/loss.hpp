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

#include <span>
#include <vector>

#include "stgfn/tape.hpp"

namespace stgfn::loss {

inline constexpr double kBceEpsilon = 1e-12;

/// Per-term weights on the outcome and utility losses. Both default to 1.
struct TermWeights {
  double outcome = 1.0;
  double utility = 1.0;
};

struct LossBreakdown {
  double outcome = 0.0;
  double utility = 0.0;
  double fairness = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

struct CompositeLoss {
  Var outcome;
  Var utility;
  Var fairness;
  Var total;
  double lambda = 0.0;

  LossBreakdown breakdown() const;
};

/// Mean binary cross-entropy; probs is [batch x 1].
Var outcome_loss(Var probs, std::span<const int> labels);

/// Mean squared error over both agents and the batch; [batch x 2] each.
Var utility_loss(Var predicted, Var target);

/// Mean over the batch of (|pred_A - pred_B| - |true_A - true_B|)^2.
Var fairness_loss(Var predicted, Var target);

/// total = w_o * outcome + w_u * utility + lambda * fairness.
/// Throws ContractError when lambda or a weight is negative.
CompositeLoss composite_loss(Var probs, std::span<const int> labels, Var predicted, Var target, double lambda,
                             TermWeights weights = {});

struct FairnessCurve {
  std::vector<double> grid;
  /// (gap - true_gap)^2
  std::vector<double> anchored;
  /// (gap - mean_gap)^2
  std::vector<double> to_mean;
};

/// Throws ContractError on an empty grid.
FairnessCurve fairness_curve(double true_gap, std::span<const double> grid, double mean_gap);

/// Evenly spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace stgfn::loss
