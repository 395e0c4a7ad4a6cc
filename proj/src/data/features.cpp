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

#include "stgfn/data/features.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stgfn/error.hpp"
#include "stgfn/random.hpp"

namespace stgfn::data {
namespace {

double min_max(double value, double lo, double hi) {
  if (hi - lo <= 0.0) return 0.5;
  return (value - lo) / (hi - lo);
}

}  // namespace

CorpusStats compute_corpus_stats(const std::vector<NegotiationInstance>& instances) {
  if (instances.empty()) throw ContractError("corpus statistics need at least one instance");
  CorpusStats s;
  s.batna_min = s.batna_max = instances.front().agent_a.batna;
  s.budget_min = s.budget_max = instances.front().agent_a.budget;
  for (const auto& inst : instances) {
    for (const AgentProfile* p : {&inst.agent_a, &inst.agent_b}) {
      s.batna_min = std::min(s.batna_min, p->batna);
      s.batna_max = std::max(s.batna_max, p->batna);
      s.budget_min = std::min(s.budget_min, p->budget);
      s.budget_max = std::max(s.budget_max, p->budget);
    }
  }
  return s;
}

std::array<double, kNodeFeatureDim> build_node_features(const AgentProfile& p, const CorpusStats& stats) {
  if (!std::isfinite(p.batna) || !std::isfinite(p.budget)) throw ContractError("node features: non-finite BATNA or budget");
  double total = 0.0;
  for (double w : p.priorities) {
    if (!std::isfinite(w)) throw ContractError("node features: non-finite priority weight");
    total += w;
  }
  std::array<double, kNodeFeatureDim> f{};
  f[0] = min_max(p.batna, stats.batna_min, stats.batna_max);
  f[1] = min_max(p.budget, stats.budget_min, stats.budget_max);
  f[2] = p.role != 0 ? 1.0 : 0.0;
  for (std::size_t i = 0; i < kPriorityCount; ++i) {
    f[3 + i] = total != 0.0 ? p.priorities[i] / total : 1.0 / static_cast<double>(kPriorityCount);
  }
  return f;
}

double trust_for(Svo source) {
  switch (source) {
    case Svo::kProsocial:
      return 0.8;
    case Svo::kIndividualistic:
      return 0.4;
    case Svo::kCompetitive:
      return 0.2;
    case Svo::kUnknown:
      return 0.5;
  }
  return 0.5;
}

std::pair<double, double> derive_trust(Svo svo_a, Svo svo_b) { return {trust_for(svo_a), trust_for(svo_b)}; }

StrategicGraph build_graph(const NegotiationInstance& inst, const CorpusStats& stats) {
  StrategicGraph g;
  g.features[0] = build_node_features(inst.agent_a, stats);
  g.features[1] = build_node_features(inst.agent_b, stats);
  const auto [ab, ba] = derive_trust(inst.agent_a.svo, inst.agent_b.svo);
  g.edges = {{0, 0, 1.0}, {0, 1, ab}, {1, 0, ba}, {1, 1, 1.0}};
  return g;
}

std::vector<NegotiationInstance> oversample_minority(const std::vector<NegotiationInstance>& train,
                                                     std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < train.size(); ++i) (train[i].outcome == 1 ? pos : neg).push_back(i);
  if (pos.empty()) throw ContractError("oversampling needs both classes; no deal (y=1) instances present");
  if (neg.empty()) throw ContractError("oversampling needs both classes; no no-deal (y=0) instances present");
  std::vector<NegotiationInstance> out = train;
  const auto& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t target = std::max(pos.size(), neg.size());
  std::mt19937_64 rng(derive_seed(seed, 0x05));
  for (std::size_t have = minority.size(); have < target; ++have) {
    const std::size_t pick = static_cast<std::size_t>(rng() % minority.size());
    out.push_back(train[minority[pick]]);
  }
  return out;
}

CorpusSplit split_corpus(const std::vector<NegotiationInstance>& instances, SplitFractions fractions,
                         std::uint64_t seed) {
  const double total = fractions.train + fractions.validation + fractions.test;
  if (fractions.train <= 0.0 || fractions.validation < 0.0 || fractions.test < 0.0 || std::fabs(total - 1.0) > 1e-9) {
    throw ContractError("split fractions must be non-negative, with positive train share, and sum to 1");
  }
  CorpusSplit split;
  split.fractions = fractions;
  split.seed = seed;
  std::mt19937_64 rng(derive_seed(seed, 0x5b));
  for (int label : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < instances.size(); ++i)
      if (instances[i].outcome == label) idx.push_back(i);
    // Fisher-Yates with our own draws so the permutation is library-independent.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    const auto n = static_cast<double>(idx.size());
    const auto n_val = static_cast<std::size_t>(std::llround(n * fractions.validation));
    const auto n_test = static_cast<std::size_t>(std::llround(n * fractions.test));
    const std::size_t n_train = idx.size() - std::min(idx.size(), n_val + n_test);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& inst = instances[idx[i]];
      if (i < n_train) {
        split.train.push_back(inst);
      } else if (i < n_train + n_val) {
        split.validation.push_back(inst);
      } else {
        split.test.push_back(inst);
      }
    }
  }
  return split;
}

}  // namespace stgfn::data
