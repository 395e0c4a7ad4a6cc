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
#include <string_view>
#include <vector>

#include "stgfn/model/stgfn.hpp"

namespace stgfn::evaluation {

inline constexpr double kLinguisticAbove = 0.6;
inline constexpr double kStrategicBelow = 0.4;

/// z > 0.6 linguistic, z < 0.4 strategic, otherwise mixed (bounds included).
enum class Dominance { kLinguistic, kMixed, kStrategic };

Dominance classify_gate(double z);
std::string_view dominance_name(Dominance d);

struct DominanceFractions {
  double linguistic = 0.0;
  double mixed = 0.0;
  double strategic = 0.0;
};

struct SessionGateSummary {
  std::string session_id;
  int outcome = 0;
  std::size_t turns = 0;
  double mean = 0.0;
  /// Population standard deviation over the session's turns.
  double std = 0.0;
};

/// Mean per-session gate std, split by outcome. A group without sessions
/// has no value.
struct VolatilityComparison {
  std::optional<double> deal;
  std::optional<double> no_deal;
  std::size_t deal_sessions = 0;
  std::size_t no_deal_sessions = 0;
};

struct GateAnalysis {
  std::size_t points = 0;
  double mean = 0.0;
  /// Population standard deviation over all pooled gate values.
  double std = 0.0;
  /// Least-squares slope of z against the 1-based turn index, pooled over
  /// sessions; 0 when every point has the same turn index.
  double slope = 0.0;
  DominanceFractions dominance;
  std::vector<SessionGateSummary> sessions;
  VolatilityComparison volatility;
};

/// Throws ContractError when there are no gate values or a value lies
/// outside (0, 1).
GateAnalysis gate_analysis(std::span<const model::GateTrace> traces);

/// Per 1-based turn index across sessions.
struct TurnGateStats {
  std::size_t turn = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
};

std::vector<TurnGateStats> gate_evolution(std::span<const model::GateTrace> traces);

/// Sessions x turns; cells past a session's length are absent.
struct GateHeatmap {
  std::vector<std::string> sessions;
  std::size_t turns = 0;
  std::vector<std::vector<std::optional<double>>> cells;
};

GateHeatmap gate_heatmap(std::span<const model::GateTrace> traces);

}  // namespace stgfn::evaluation
