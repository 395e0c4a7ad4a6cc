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

#include "stgfn/evaluation/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "stgfn/error.hpp"

namespace stgfn::evaluation {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

const MetricSummary& ArmSummary::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics)
    if (key == name) return value;
  throw ContractError("arm " + this->name + " has no metric '" + name + "'");
}

std::optional<double> id_reduction_pct(double reference, double regularized) {
  if (reference == 0.0) return std::nullopt;
  return 100.0 * (reference - regularized) / reference;
}

ExperimentReport build_report(std::span<const ArmResults> arms) {
  ExperimentReport out;
  for (const auto& arm : arms) {
    if (arm.per_seed.empty()) throw ContractError("arm " + arm.name + " has no results");
    ArmSummary s;
    s.name = arm.name;
    s.lambda = arm.lambda;
    s.seeds = arm.per_seed.size();
    s.gates = arm.gates;
    std::vector<double> acc, f1, auc, mae, mse, id;
    for (const auto& r : arm.per_seed) {
      acc.push_back(r.accuracy);
      f1.push_back(r.f1);
      if (r.auc) auc.push_back(*r.auc);
      mae.push_back(r.mae);
      mse.push_back(r.mse);
      id.push_back(r.id);
    }
    s.metrics = {{"accuracy", summarize(acc)}, {"f1", summarize(f1)}, {"auc", summarize(auc)},
                 {"mae", summarize(mae)},      {"mse", summarize(mse)}, {"id", summarize(id)}};
    out.arms.push_back(std::move(s));
  }
  const ArmSummary* reference = nullptr;
  const ArmSummary* regularized = nullptr;
  for (const auto& a : out.arms) {
    if (!a.lambda) continue;
    if (*a.lambda == 0.0 && !reference) reference = &a;
    if (*a.lambda > 0.0 && !regularized) regularized = &a;
  }
  if (reference && regularized)
    out.reduction_in_id_pct = id_reduction_pct(reference->metric("id").mean, regularized->metric("id").mean);
  return out;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["f1"] = r.f1;
  j["auc"] = optional_number(r.auc);
  j["mae"] = r.mae;
  j["mse"] = r.mse;
  j["id"] = r.id;
  j["n"] = r.n;
  j["positives"] = r.positives;
  return j;
}

nlohmann::ordered_json to_json(const GateAnalysis& g) {
  nlohmann::ordered_json j;
  j["points"] = g.points;
  j["mean"] = g.mean;
  j["std"] = g.std;
  j["slope"] = g.slope;
  j["dominance"] = {{"linguistic", g.dominance.linguistic},
                    {"mixed", g.dominance.mixed},
                    {"strategic", g.dominance.strategic}};
  j["volatility"] = {{"deal", optional_number(g.volatility.deal)},
                     {"no_deal", optional_number(g.volatility.no_deal)},
                     {"deal_sessions", g.volatility.deal_sessions},
                     {"no_deal_sessions", g.volatility.no_deal_sessions}};
  auto sessions = nlohmann::ordered_json::array();
  for (const auto& s : g.sessions)
    sessions.push_back({{"session", s.session_id}, {"outcome", s.outcome}, {"turns", s.turns}, {"mean", s.mean},
                        {"std", s.std}});
  j["sessions"] = std::move(sessions);
  return j;
}

nlohmann::ordered_json to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json arms = nlohmann::ordered_json::object();
  nlohmann::ordered_json gates = nlohmann::ordered_json::object();
  for (const auto& a : report.arms) {
    nlohmann::ordered_json arm;
    arm["lambda"] = optional_number(a.lambda);
    arm["seeds"] = a.seeds;
    for (const auto& [name, m] : a.metrics) {
      if (m.count == 0)
        arm[name] = nullptr;
      else
        arm[name] = {{"mean", m.mean}, {"std", m.std}};
    }
    arms[a.name] = std::move(arm);
    if (a.gates) gates[a.name] = to_json(*a.gates);
  }
  j["arms"] = std::move(arms);
  j["reduction_in_id_pct"] = optional_number(report.reduction_in_id_pct);
  j["gate"] = std::move(gates);
  return j;
}

std::string format_reduction(const std::optional<double>& pct) {
  if (!pct) return "N/A";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.1f%%", *pct);
  return buf;
}

std::string format_table(const ExperimentReport& report) {
  const std::vector<std::string> header = {"arm", "lambda", "accuracy", "f1", "auc", "mae", "mse", "id"};
  std::vector<std::vector<std::string>> rows = {header};
  for (const auto& a : report.arms) {
    std::vector<std::string> row = {a.name, a.lambda ? fixed(*a.lambda, 2) : "-"};
    for (const auto& [_, m] : a.metrics)
      row.push_back(m.count == 0 ? "n/a" : fixed(m.mean, 4) + " +/- " + fixed(m.std, 4));
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << "\n";
  }
  out << "reduction in ID: " << format_reduction(report.reduction_in_id_pct) << "\n";
  return out.str();
}

}  // namespace stgfn::evaluation
