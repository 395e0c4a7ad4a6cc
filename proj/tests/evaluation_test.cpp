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


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stgfn/error.hpp"
#include "stgfn/evaluation/gates.hpp"
#include "stgfn/evaluation/metrics.hpp"
#include "stgfn/evaluation/plot_data.hpp"
#include "stgfn/evaluation/report.hpp"
#include "stgfn/evaluation/wilcoxon.hpp"
#include "stgfn/loss.hpp"

namespace stgfn::evaluation {
namespace {

using data::UtilityPair;
using model::GateTrace;

struct RandomSet {
  std::vector<double> probs;
  std::vector<int> labels;
  std::vector<UtilityPair> pred;
  std::vector<UtilityPair> truth;
};

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

RandomSet random_set(std::mt19937_64& rng, std::size_t n, bool coarse) {
  std::uniform_real_distribution<double> u(-10, 10);
  RandomSet s;
  for (std::size_t i = 0; i < n; ++i) {
    // Coarse scores create ties.
    const double p = coarse ? std::floor(uniform01(rng) * 5.0) / 4.0 : uniform01(rng);
    s.probs.push_back(p);
    s.labels.push_back(uniform01(rng) < 0.5 ? 1 : 0);
    s.pred.push_back({u(rng), u(rng)});
    s.truth.push_back({u(rng), u(rng)});
  }
  s.labels[0] = 1;
  s.labels[1] = 0;
  return s;
}

TEST(Metrics, MatchBruteForceOnRandomInputs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomSet s = random_set(rng, 2 + trial % 49, trial % 2 == 0);
    const auto cls = classification_metrics(s.probs, s.labels);
    EXPECT_NEAR(cls.accuracy, oracle::accuracy(s.probs, s.labels), 1e-12);
    EXPECT_NEAR(cls.f1, oracle::f1(s.probs, s.labels), 1e-12);
    EXPECT_EQ(auc_roc(s.probs, s.labels), oracle::auc(s.probs, s.labels));
    const auto reg = regression_metrics(s.pred, s.truth);
    EXPECT_NEAR(reg.mae, oracle::mae(s.pred, s.truth), 1e-12);
    EXPECT_NEAR(reg.mse, oracle::mse(s.pred, s.truth), 1e-12);
    EXPECT_LE(reg.mae, std::sqrt(reg.mse) + 1e-12);
    EXPECT_NEAR(inequality_discrepancy(s.pred, s.truth), oracle::id(s.pred, s.truth), 1e-12);
  }
}

TEST(Metrics, ClassificationExamples) {
  const std::vector<double> p = {0.9, 0.2};
  const std::vector<int> both = {1, 1};
  const auto m = classification_metrics(p, both);
  EXPECT_EQ(m.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
  const std::vector<int> perfect = {1, 0};
  EXPECT_EQ(classification_metrics(p, perfect).f1, 1.0);
  const std::vector<double> low = {0.1, 0.2};
  const std::vector<int> neg = {0, 0};
  EXPECT_EQ(classification_metrics(low, neg).f1, 1.0);
  EXPECT_EQ(classification_metrics(low, both).f1, 0.0);
  EXPECT_EQ(classification_metrics(std::vector<double>{0.5}, std::vector<int>{1}).accuracy, 1.0);
  EXPECT_THROW(classification_metrics(p, std::vector<int>{1}), ContractError);
  EXPECT_THROW(classification_metrics({}, {}), ContractError);
}

TEST(Metrics, AucExamples) {
  const std::vector<int> y = {1, 1, 0, 0};
  EXPECT_EQ(auc_roc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, y), 1.0);
  EXPECT_EQ(auc_roc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, y), 0.5);
  EXPECT_EQ(auc_roc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, y), 0.0);
  EXPECT_THROW(auc_roc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), UndefinedMetricError);
}

TEST(Metrics, RegressionAndDiscrepancyExamples) {
  const std::vector<UtilityPair> p = {{4, 6}}, t = {{3, 6}};
  EXPECT_EQ(regression_metrics(p, t).mae, 0.5);
  EXPECT_EQ(regression_metrics(p, t).mse, 0.5);
  EXPECT_EQ(regression_metrics(t, t).mse, 0.0);
  EXPECT_EQ(inequality_discrepancy(std::vector<UtilityPair>{{8, 2}}, std::vector<UtilityPair>{{7, 4}}), 3.0);
  EXPECT_EQ(inequality_discrepancy(t, t), 0.0);
  EXPECT_THROW(inequality_discrepancy({}, {}), ContractError);
  EXPECT_THROW(regression_metrics({}, {}), ContractError);
}

TEST(Metrics, DiscrepancyInvariantToCommonShift) {
  std::mt19937_64 rng(5);
  const RandomSet s = random_set(rng, 30, false);
  auto shifted_pred = s.pred;
  auto shifted_truth = s.truth;
  for (std::size_t i = 0; i < s.pred.size(); ++i) {
    const double c = 100.0 * uniform01(rng), d = 100.0 * uniform01(rng);
    shifted_pred[i] = {s.pred[i].a + c, s.pred[i].b + c};
    shifted_truth[i] = {s.truth[i].a + d, s.truth[i].b + d};
  }
  EXPECT_NEAR(inequality_discrepancy(s.pred, s.truth), inequality_discrepancy(shifted_pred, shifted_truth), 1e-12);
}

TEST(Metrics, EvaluateBundlesEverything) {
  std::vector<model::Prediction> preds = {{0.9, {8, 2}}, {0.3, {1, 1}}, {0.6, {5, 5}}};
  std::vector<model::EncodedInstance> truth(3);
  truth[0].outcome = 1;
  truth[0].utilities = {7, 4};
  truth[1].outcome = 0;
  truth[1].utilities = {1, 1};
  truth[2].outcome = 0;
  truth[2].utilities = {5, 5};
  const MetricsReport r = evaluate(preds, truth);
  EXPECT_EQ(r.n, 3u);
  EXPECT_EQ(r.positives, 1u);
  EXPECT_DOUBLE_EQ(r.accuracy, 2.0 / 3.0);
  ASSERT_TRUE(r.auc.has_value());
  EXPECT_EQ(*r.auc, 1.0);
  EXPECT_EQ(r.id, 1.0);
  for (auto& t : truth) t.outcome = 1;
  EXPECT_FALSE(evaluate(preds, truth).auc.has_value());
}

TEST(Gates, ConstantHalf) {
  const std::vector<GateTrace> traces = {{"s1", {0.5, 0.5, 0.5}, 1}, {"s2", {0.5, 0.5}, 0}};
  const GateAnalysis g = gate_analysis(traces);
  EXPECT_EQ(g.points, 5u);
  EXPECT_EQ(g.mean, 0.5);
  EXPECT_EQ(g.std, 0.0);
  EXPECT_EQ(g.slope, 0.0);
  EXPECT_EQ(g.dominance.mixed, 1.0);
  EXPECT_EQ(*g.volatility.deal, 0.0);
  EXPECT_EQ(*g.volatility.no_deal, 0.0);
}

TEST(Gates, LinearRiseHasExactSlope) {
  const std::vector<double> z = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const GateAnalysis g = gate_analysis(std::vector<GateTrace>{{"s", z, 1}});
  EXPECT_NEAR(g.slope, 0.1, 1e-12);
  EXPECT_NEAR(g.mean, 0.5, 1e-12);
  // 0.1..0.3 strategic, 0.4..0.6 mixed, 0.7..0.9 linguistic.
  EXPECT_NEAR(g.dominance.strategic, 3.0 / 9.0, 1e-12);
  EXPECT_NEAR(g.dominance.mixed, 3.0 / 9.0, 1e-12);
  EXPECT_NEAR(g.dominance.linguistic, 3.0 / 9.0, 1e-12);
  EXPECT_FALSE(g.volatility.no_deal.has_value());
}

TEST(Gates, BoundariesAreMixed) {
  EXPECT_EQ(classify_gate(0.6), Dominance::kMixed);
  EXPECT_EQ(classify_gate(0.4), Dominance::kMixed);
  EXPECT_EQ(classify_gate(0.6000001), Dominance::kLinguistic);
  EXPECT_EQ(classify_gate(0.3999999), Dominance::kStrategic);
  EXPECT_EQ(dominance_name(Dominance::kLinguistic), "linguistic");
}

TEST(Gates, FractionsPartitionAndSessions) {
  std::mt19937_64 rng(3);
  std::vector<GateTrace> traces;
  for (int s = 0; s < 20; ++s) {
    GateTrace t{"s" + std::to_string(s), {}, s % 2};
    for (int k = 0; k < 1 + s % 7; ++k) t.gates.push_back(0.01 + 0.98 * uniform01(rng));
    traces.push_back(t);
  }
  const GateAnalysis g = gate_analysis(traces);
  EXPECT_NEAR(g.dominance.linguistic + g.dominance.mixed + g.dominance.strategic, 1.0, 1e-12);
  ASSERT_EQ(g.sessions.size(), 20u);
  EXPECT_EQ(g.sessions[3].turns, 4u);
  EXPECT_EQ(g.volatility.deal_sessions, 10u);
  double pooled = 0.0;
  for (const auto& t : traces) pooled = std::accumulate(t.gates.begin(), t.gates.end(), pooled);
  EXPECT_NEAR(g.mean, pooled / static_cast<double>(g.points), 1e-12);
}

TEST(Gates, Contracts) {
  EXPECT_THROW(gate_analysis({}), ContractError);
  EXPECT_THROW(gate_analysis(std::vector<GateTrace>{{"s", {}, 0}}), ContractError);
  EXPECT_THROW(gate_analysis(std::vector<GateTrace>{{"s", {1.0}, 0}}), ContractError);
}

TEST(Gates, EvolutionAndHeatmap) {
  const std::vector<GateTrace> traces = {{"a", {0.2, 0.4, 0.6}, 1}, {"b", {0.4}, 0}};
  const auto evo = gate_evolution(traces);
  ASSERT_EQ(evo.size(), 3u);
  EXPECT_EQ(evo[0].count, 2u);
  EXPECT_NEAR(evo[0].mean, 0.3, 1e-15);
  EXPECT_NEAR(evo[0].std, 0.1, 1e-15);
  EXPECT_EQ(evo[2].turn, 3u);
  const auto hm = gate_heatmap(traces);
  EXPECT_EQ(hm.turns, 3u);
  EXPECT_EQ(hm.sessions, (std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(hm.cells[1][1].has_value());
  EXPECT_EQ(*hm.cells[0][2], 0.6);
}

TEST(Wilcoxon, FiveAllPositiveIsExact) {
  const std::vector<double> a = {1.1, 2.2, 3.3, 4.4, 5.5}, b = {1, 2, 3, 4, 5};
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.n, 5u);
  EXPECT_DOUBLE_EQ(r.p_value, 0.0625);
  EXPECT_EQ(r.w_plus, 15.0);
  EXPECT_EQ(r.w_minus, 0.0);
}

TEST(Wilcoxon, MatchesSignEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial % 12);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::round(uniform01(rng) * 6.0);
      b[i] = std::round(uniform01(rng) * 6.0) + (i == 0 ? 0.5 : 0.0);
    }
    const auto r = wilcoxon_signed_rank(a, b);
    ASSERT_TRUE(r.exact);
    EXPECT_NEAR(r.p_value, oracle::wilcoxon_exact_p(a, b), 1e-12) << trial;
  }
}

TEST(Wilcoxon, AntisymmetryAndDegenerate) {
  const std::vector<double> a = {3, 1, 4, 1, 5, 9, 2, 6}, b = {2, 7, 1, 8, 2, 8, 1, 8};
  const auto ab = wilcoxon_signed_rank(a, b);
  const auto ba = wilcoxon_signed_rank(b, a);
  EXPECT_EQ(ab.statistic, -ba.statistic);
  EXPECT_EQ(ab.p_value, ba.p_value);
  EXPECT_THROW(wilcoxon_signed_rank(a, a), DegenerateTestError);
  EXPECT_THROW(wilcoxon_signed_rank(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0, 0, 0, 0}), ContractError);
  EXPECT_THROW(wilcoxon_signed_rank(a, std::vector<double>{1}), ContractError);
}

TEST(Wilcoxon, NullDistributionSumsToOne) {
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 1.0);
    if (n > 3) ranks[1] = ranks[2] = 2.5;
    const auto dist = signed_rank_null_distribution(ranks);
    EXPECT_NEAR(std::accumulate(dist.begin(), dist.end(), 0.0), 1.0, 1e-12) << n;
  }
}

TEST(Wilcoxon, NormalApproximationAboveTwenty) {
  std::vector<double> a(30), b(30, 0.0);
  for (std::size_t i = 0; i < 30; ++i) a[i] = static_cast<double>(i + 1) * (i % 3 == 0 ? -1.0 : 1.0);
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_FALSE(r.exact);
  // W+ - W- over ranks 1..30 with every third negated; variance n(n+1)(2n+1)/6.
  double w_minus = 0;
  for (std::size_t i = 0; i < 30; i += 3) w_minus += static_cast<double>(i + 1);
  const double w_plus = 465.0 - w_minus;
  EXPECT_EQ(r.statistic, w_plus - w_minus);
  const double z = (w_plus - 465.0 / 2.0) / std::sqrt(30.0 * 31.0 * 61.0 / 24.0);
  EXPECT_NEAR(r.p_value, std::erfc(std::fabs(z) / std::sqrt(2.0)), 1e-12);
}

ArmResults arm(const std::string& name, std::optional<double> lambda, std::vector<double> ids) {
  ArmResults a;
  a.name = name;
  a.lambda = lambda;
  for (double id : ids) {
    MetricsReport r;
    r.id = id;
    r.accuracy = 0.7;
    r.auc = 0.8;
    a.per_seed.push_back(r);
  }
  return a;
}

TEST(Report, ReductionExamples) {
  EXPECT_NEAR(*id_reduction_pct(3.79, 2.13), 43.799472295514512, 1e-9);
  EXPECT_EQ(format_reduction(id_reduction_pct(3.79, 2.13)), "+43.8%");
  EXPECT_EQ(*id_reduction_pct(2.0, 2.0), 0.0);
  EXPECT_EQ(format_reduction(id_reduction_pct(2.0, 2.5)), "-25.0%");
  EXPECT_FALSE(id_reduction_pct(0.0, 1.0).has_value());
  EXPECT_EQ(format_reduction(std::nullopt), "N/A");
}

TEST(Report, BuildsSummariesAndJson) {
  const std::vector<ArmResults> arms = {arm("baseline", std::nullopt, {5, 5, 5}), arm("nofair", 0.0, {3, 4, 5}),
                                        arm("fair", 0.7, {2, 2, 2})};
  const ExperimentReport rep = build_report(arms);
  ASSERT_EQ(rep.arms.size(), 3u);
  EXPECT_EQ(rep.arms[1].metric("id").mean, 4.0);
  EXPECT_EQ(rep.arms[1].metric("id").std, 1.0);
  EXPECT_EQ(rep.arms[2].seeds, 3u);
  ASSERT_TRUE(rep.reduction_in_id_pct.has_value());
  EXPECT_DOUBLE_EQ(*rep.reduction_in_id_pct, 50.0);
  const auto j = to_json(rep);
  EXPECT_EQ(j["arms"]["fair"]["id"]["mean"], 2.0);
  EXPECT_EQ(j["reduction_in_id_pct"], 50.0);
  const std::string table = format_table(rep);
  EXPECT_NE(table.find("reduction in ID: +50.0%"), std::string::npos);
  std::istringstream lines(table);
  for (std::string line; std::getline(lines, line);) EXPECT_TRUE(line.empty() || line.back() != ' ') << line;
}

TEST(Report, SummaryStatistics) {
  const auto s = summarize(std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(summarize(std::vector<double>{7}).std, 0.0);
}

TEST(PlotData, CsvShapes) {
  const auto grid = loss::linear_grid(0, 12, 13);
  const std::string curve = fairness_curve_csv(loss::fairness_curve(6.0, grid, 6.0));
  EXPECT_EQ(curve.substr(0, curve.find('\n')), "gap,anchored,to_mean");
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 14);
  const std::vector<GateTrace> traces = {{"a", {0.2, 0.7}, 1}, {"b", {0.5}, 0}};
  EXPECT_EQ(gate_heatmap_csv(traces), "session,turn_1,turn_2\na,0.20000000000000001,0.69999999999999996\nb,0.5,\n");
  EXPECT_EQ(dominance_hist_csv(std::vector<GateTrace>{{"a", {0.5, 0.5}, 1}}),
            "band,count,fraction\nlinguistic,0,0\nmixed,2,1\nstrategic,0,0\n");
  EXPECT_EQ(gate_evolution_csv(traces).substr(0, 24), "turn,count,mean_z,std_z\n");
}

TEST(PlotData, TraceJsonRoundTrip) {
  const std::vector<GateTrace> traces = {{"a", {0.25, 0.125}, 1}, {"b", {0.5}, 0}};
  const auto back = traces_from_json(nlohmann::json::parse(traces_to_json(traces).dump()));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].session_id, "a");
  EXPECT_EQ(back[0].gates, traces[0].gates);
  EXPECT_EQ(back[1].outcome, 0);
  EXPECT_THROW(traces_from_json(nlohmann::json::parse(R"([{"session": 3}])")), ParseError);
}

}  // namespace
}  // namespace stgfn::evaluation
