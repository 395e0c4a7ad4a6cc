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

#include "stgfn/evaluation/gates.hpp"

#include <algorithm>
#include <cmath>

#include "stgfn/error.hpp"

namespace stgfn::evaluation {

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return m;
}

}  // namespace

Dominance classify_gate(double z) {
  if (z > kLinguisticAbove) return Dominance::kLinguistic;
  if (z < kStrategicBelow) return Dominance::kStrategic;
  return Dominance::kMixed;
}

std::string_view dominance_name(Dominance d) {
  switch (d) {
    case Dominance::kLinguistic:
      return "linguistic";
    case Dominance::kMixed:
      return "mixed";
    case Dominance::kStrategic:
      return "strategic";
  }
  return "mixed";
}

GateAnalysis gate_analysis(std::span<const model::GateTrace> traces) {
  std::vector<double> zs;
  std::vector<double> turns;
  GateAnalysis out;
  std::size_t counts[3] = {0, 0, 0};
  std::vector<double> deal_std, no_deal_std;
  for (const auto& trace : traces) {
    if (trace.gates.empty()) continue;
    for (std::size_t k = 0; k < trace.gates.size(); ++k) {
      const double z = trace.gates[k];
      if (!(z > 0.0 && z < 1.0)) throw ContractError("session " + trace.session_id + ": gate value outside (0, 1)");
      zs.push_back(z);
      turns.push_back(static_cast<double>(k + 1));
      ++counts[static_cast<int>(classify_gate(z))];
    }
    const Moments m = moments(trace.gates);
    out.sessions.push_back({trace.session_id, trace.outcome, trace.gates.size(), m.mean, m.std});
    (trace.outcome == 1 ? deal_std : no_deal_std).push_back(m.std);
  }
  if (zs.empty()) throw ContractError("gate analysis needs at least one gate value");
  out.points = zs.size();
  const Moments all = moments(zs);
  out.mean = all.mean;
  out.std = all.std;
  const double x_mean = moments(turns).mean;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    sxx += (turns[i] - x_mean) * (turns[i] - x_mean);
    sxy += (turns[i] - x_mean) * (zs[i] - all.mean);
  }
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double n = static_cast<double>(zs.size());
  out.dominance.linguistic = static_cast<double>(counts[0]) / n;
  out.dominance.mixed = static_cast<double>(counts[1]) / n;
  out.dominance.strategic = static_cast<double>(counts[2]) / n;
  out.volatility.deal_sessions = deal_std.size();
  out.volatility.no_deal_sessions = no_deal_std.size();
  if (!deal_std.empty()) out.volatility.deal = moments(deal_std).mean;
  if (!no_deal_std.empty()) out.volatility.no_deal = moments(no_deal_std).mean;
  return out;
}

std::vector<TurnGateStats> gate_evolution(std::span<const model::GateTrace> traces) {
  std::size_t turns = 0;
  for (const auto& t : traces) turns = std::max(turns, t.gates.size());
  std::vector<TurnGateStats> out;
  for (std::size_t k = 0; k < turns; ++k) {
    std::vector<double> column;
    for (const auto& t : traces)
      if (k < t.gates.size()) column.push_back(t.gates[k]);
    const Moments m = moments(column);
    out.push_back({k + 1, column.size(), m.mean, m.std});
  }
  return out;
}

GateHeatmap gate_heatmap(std::span<const model::GateTrace> traces) {
  GateHeatmap out;
  for (const auto& t : traces) out.turns = std::max(out.turns, t.gates.size());
  for (const auto& t : traces) {
    out.sessions.push_back(t.session_id);
    std::vector<std::optional<double>> row(out.turns);
    for (std::size_t k = 0; k < t.gates.size(); ++k) row[k] = t.gates[k];
    out.cells.push_back(std::move(row));
  }
  return out;
}

}  // namespace stgfn::evaluation
