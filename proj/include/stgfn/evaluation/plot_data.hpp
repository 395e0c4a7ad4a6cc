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
#include <string>
#include <vector>

#include "json.hpp"
#include "stgfn/loss.hpp"
#include "stgfn/model/stgfn.hpp"

namespace stgfn::evaluation {

/// [{"session", "outcome", "gates": [...]}, ...]
nlohmann::ordered_json traces_to_json(std::span<const model::GateTrace> traces);
/// Throws ParseError on a malformed document.
std::vector<model::GateTrace> traces_from_json(const nlohmann::json& doc);

// CSV text with a one-line header. Numbers use 17 significant digits.

/// gap,anchored,to_mean
std::string fairness_curve_csv(const loss::FairnessCurve& curve);
/// turn,count,mean_z,std_z
std::string gate_evolution_csv(std::span<const model::GateTrace> traces);
/// session,turn_1..turn_K; absent turns are empty cells.
std::string gate_heatmap_csv(std::span<const model::GateTrace> traces);
/// band,count,fraction for linguistic, mixed, strategic.
std::string dominance_hist_csv(std::span<const model::GateTrace> traces);

}  // namespace stgfn::evaluation
