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

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "stgfn/tensor.hpp"

namespace stgfn {

/// AdamW with decoupled weight decay and bias-corrected moments.
struct AdamWState {
  double lr = 1e-4;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

/// One optimizer update of every tensor in params, in order. Moment buffers
/// are created on the first call and must keep matching params afterwards.
/// Throws ContractError if a parameter has no gradient buffer.
void adamw_step(std::span<Tensor* const> params, AdamWState& state);

/// Reduce-on-plateau learning-rate schedule (minimising a monitored value).
struct PlateauScheduler {
  double best = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;
  int patience = 5;
  double factor = 0.1;
  /// A value counts as an improvement only if it is below best - min_delta.
  double min_delta = 0.0;
  double min_lr = 0.0;
};

/// Feeds one epoch's monitored value. Once patience consecutive epochs fail
/// to improve, lr is multiplied by factor and the counter restarts.
/// Returns true when the rate was reduced.
bool scheduler_step(PlateauScheduler& sched, double monitored, double& lr);

}  // namespace stgfn
