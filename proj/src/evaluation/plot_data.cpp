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

#include "stgfn/evaluation/plot_data.hpp"

#include <cstdio>
#include <sstream>

#include "stgfn/error.hpp"
#include "stgfn/evaluation/gates.hpp"

namespace stgfn::evaluation {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json traces_to_json(std::span<const model::GateTrace> traces) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : traces) out.push_back({{"session", t.session_id}, {"outcome", t.outcome}, {"gates", t.gates}});
  return out;
}

std::vector<model::GateTrace> traces_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("gate traces must be a JSON array");
  std::vector<model::GateTrace> out;
  try {
    for (const auto& item : doc) {
      model::GateTrace t;
      t.session_id = item.at("session").get<std::string>();
      t.outcome = item.at("outcome").get<int>();
      t.gates = item.at("gates").get<std::vector<double>>();
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("gate traces: ") + e.what());
  }
  return out;
}

std::string fairness_curve_csv(const loss::FairnessCurve& curve) {
  std::ostringstream out;
  out << "gap,anchored,to_mean\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    out << num(curve.grid[i]) << ',' << num(curve.anchored[i]) << ',' << num(curve.to_mean[i]) << '\n';
  return out.str();
}

std::string gate_evolution_csv(std::span<const model::GateTrace> traces) {
  std::ostringstream out;
  out << "turn,count,mean_z,std_z\n";
  for (const auto& row : gate_evolution(traces))
    out << row.turn << ',' << row.count << ',' << num(row.mean) << ',' << num(row.std) << '\n';
  return out.str();
}

std::string gate_heatmap_csv(std::span<const model::GateTrace> traces) {
  const GateHeatmap map = gate_heatmap(traces);
  std::ostringstream out;
  out << "session";
  for (std::size_t k = 1; k <= map.turns; ++k) out << ",turn_" << k;
  out << '\n';
  for (std::size_t r = 0; r < map.sessions.size(); ++r) {
    out << map.sessions[r];
    for (const auto& cell : map.cells[r]) {
      out << ',';
      if (cell) out << num(*cell);
    }
    out << '\n';
  }
  return out.str();
}

std::string dominance_hist_csv(std::span<const model::GateTrace> traces) {
  std::size_t counts[3] = {0, 0, 0};
  std::size_t total = 0;
  for (const auto& t : traces) {
    for (double z : t.gates) {
      ++counts[static_cast<int>(classify_gate(z))];
      ++total;
    }
  }
  if (total == 0) throw ContractError("dominance histogram needs at least one gate value");
  std::ostringstream out;
  out << "band,count,fraction\n";
  for (Dominance d : {Dominance::kLinguistic, Dominance::kMixed, Dominance::kStrategic}) {
    const std::size_t c = counts[static_cast<int>(d)];
    out << dominance_name(d) << ',' << c << ',' << num(static_cast<double>(c) / static_cast<double>(total)) << '\n';
  }
  return out.str();
}

}  // namespace stgfn::evaluation
