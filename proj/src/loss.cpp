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

#include "stgfn/loss.hpp"

#include <cmath>
#include <string>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::loss {

LossBreakdown CompositeLoss::breakdown() const {
  return {outcome.value().item(), utility.value().item(), fairness.value().item(), lambda, total.value().item()};
}

Var outcome_loss(Var probs, std::span<const int> labels) {
  if (probs.cols() != 1) throw ShapeError("outcome_loss expects [batch x 1] probabilities");
  return binary_cross_entropy(probs, labels, kBceEpsilon);
}

Var utility_loss(Var predicted, Var target) {
  if (predicted.cols() != 2 || target.value().shape() != predicted.value().shape())
    throw ShapeError("utility_loss expects matching [batch x 2] inputs");
  return mean(square(predicted - target));
}

Var fairness_loss(Var predicted, Var target) {
  if (predicted.cols() != 2 || target.value().shape() != predicted.value().shape())
    throw ShapeError("fairness_loss expects matching [batch x 2] inputs");
  const Var pred_gap = abs(slice_cols(predicted, 0, 1) - slice_cols(predicted, 1, 1));
  const Var true_gap = abs(slice_cols(target, 0, 1) - slice_cols(target, 1, 1));
  return mean(square(pred_gap - true_gap));
}

CompositeLoss composite_loss(Var probs, std::span<const int> labels, Var predicted, Var target, double lambda,
                             TermWeights weights) {
  if (!(lambda >= 0.0)) throw ContractError("lambda must be non-negative, got " + std::to_string(lambda));
  if (!(weights.outcome >= 0.0) || !(weights.utility >= 0.0)) throw ContractError("loss weights must be non-negative");
  CompositeLoss out;
  out.lambda = lambda;
  out.outcome = outcome_loss(probs, labels);
  out.utility = utility_loss(predicted, target);
  out.fairness = fairness_loss(predicted, target);
  out.total = affine(out.outcome, weights.outcome) + affine(out.utility, weights.utility) +
              affine(out.fairness, lambda);
  return out;
}

FairnessCurve fairness_curve(double true_gap, std::span<const double> grid, double mean_gap) {
  if (grid.empty()) throw ContractError("fairness_curve needs a non-empty grid");
  FairnessCurve out;
  out.grid.assign(grid.begin(), grid.end());
  for (double g : grid) {
    out.anchored.push_back((g - true_gap) * (g - true_gap));
    out.to_mean.push_back((g - mean_gap) * (g - mean_gap));
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw ContractError("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return out;
}

}  // namespace stgfn::loss
