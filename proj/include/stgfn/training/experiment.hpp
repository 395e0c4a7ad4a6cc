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

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgfn/data/features.hpp"
#include "stgfn/evaluation/report.hpp"
#include "stgfn/training/trainer.hpp"

namespace stgfn::training {

struct ArmSpec {
  std::string name;
  model::ModelKind kind = model::ModelKind::kStGfn;
  double lambda = 0.0;
};

/// baseline: logistic, lambda 0. nofair: ST-GFN, lambda 0. fair: ST-GFN,
/// lambda from the config.
ArmSpec arm_by_name(std::string_view name, const TrainConfig& config);
std::vector<ArmSpec> default_arms(const TrainConfig& config);

struct ExperimentResult {
  std::vector<ArmSpec> arms;
  /// runs[arm][seed index]
  std::vector<std::vector<RunResult>> runs;
  evaluation::ExperimentReport report;
};

using RunCallback = std::function<void(const ArmSpec&, const RunResult&)>;

/// Trains every arm for every configured seed. Data are prepared once per
/// seed and shared by the arms.
ExperimentResult run_experiment(const data::CorpusSplit& split, const TrainConfig& config,
                                std::span<const ArmSpec> arms, const RunCallback& on_run = {});

/// Summary over seeds, with gate analysis pooled over the test traces of
/// each ST-GFN arm.
evaluation::ExperimentReport summarize_runs(std::span<const ArmSpec> arms,
                                            const std::vector<std::vector<RunResult>>& runs);

}  // namespace stgfn::training
