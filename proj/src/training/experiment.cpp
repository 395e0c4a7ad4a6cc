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

#include "stgfn/training/experiment.hpp"

#include "stgfn/error.hpp"

namespace stgfn::training {

ArmSpec arm_by_name(std::string_view name, const TrainConfig& config) {
  if (name == "baseline") return {"baseline", model::ModelKind::kLogistic, 0.0};
  if (name == "nofair") return {"nofair", model::ModelKind::kStGfn, 0.0};
  if (name == "fair") return {"fair", model::ModelKind::kStGfn, config.lambda};
  throw ContractError("unknown arm '" + std::string(name) + "' (expected baseline|nofair|fair)");
}

std::vector<ArmSpec> default_arms(const TrainConfig& config) {
  return {arm_by_name("baseline", config), arm_by_name("nofair", config), arm_by_name("fair", config)};
}

evaluation::ExperimentReport summarize_runs(std::span<const ArmSpec> arms,
                                            const std::vector<std::vector<RunResult>>& runs) {
  if (runs.size() != arms.size()) throw ContractError("one run list per arm is required");
  std::vector<evaluation::ArmResults> results;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    evaluation::ArmResults r;
    r.name = arms[a].name;
    if (arms[a].kind == model::ModelKind::kStGfn) r.lambda = arms[a].lambda;
    std::vector<model::GateTrace> traces;
    for (const auto& run : runs[a]) {
      r.per_seed.push_back(run.test);
      traces.insert(traces.end(), run.traces.begin(), run.traces.end());
    }
    bool any_gate = false;
    for (const auto& t : traces) any_gate = any_gate || !t.gates.empty();
    if (any_gate) r.gates = evaluation::gate_analysis(traces);
    results.push_back(std::move(r));
  }
  return evaluation::build_report(results);
}

ExperimentResult run_experiment(const data::CorpusSplit& split, const TrainConfig& config,
                                std::span<const ArmSpec> arms, const RunCallback& on_run) {
  validate(config);
  if (arms.empty()) throw ContractError("no experiment arms selected");
  if (split.test.empty()) throw ContractError("test split is empty");
  ExperimentResult out;
  out.arms.assign(arms.begin(), arms.end());
  out.runs.resize(arms.size());
  for (std::uint64_t seed : config.seeds) {
    const PreparedData data = prepare_data(split, config, seed);
    for (std::size_t a = 0; a < arms.size(); ++a) {
      RunResult run = train(data, config, arms[a].kind, arms[a].lambda, seed);
      if (on_run) on_run(arms[a], run);
      out.runs[a].push_back(std::move(run));
    }
  }
  out.report = summarize_runs(out.arms, out.runs);
  return out;
}

}  // namespace stgfn::training
