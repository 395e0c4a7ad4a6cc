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

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "stgfn/data/types.hpp"

namespace stgfn::data {

/// Min/max of the min-max normalised node-feature columns.
struct CorpusStats {
  double batna_min = 0.0;
  double batna_max = 0.0;
  double budget_min = 0.0;
  double budget_max = 0.0;

  bool operator==(const CorpusStats&) const = default;
};

/// Over both agents of every instance. Throws ContractError on an empty corpus.
CorpusStats compute_corpus_stats(const std::vector<NegotiationInstance>& instances);

/// [batna_norm, budget_norm, role, priority_1..3]. Normalised columns use
/// min-max scaling (a constant column maps to 0.5); priorities are rescaled
/// to sum to 1 (uniform if they sum to 0).
std::array<double, kNodeFeatureDim> build_node_features(const AgentProfile& profile, const CorpusStats& stats);

/// Outgoing trust of an agent toward the other, by its own SVO.
double trust_for(Svo source);

/// {tau_AB, tau_BA}.
std::pair<double, double> derive_trust(Svo svo_a, Svo svo_b);

/// Two nodes with A->B, B->A and self-loops (trust 1).
StrategicGraph build_graph(const NegotiationInstance& instance, const CorpusStats& stats);

/// Resamples the minority class with replacement until both classes have
/// equal counts. Originals keep their order at the front. Deterministic in seed.
std::vector<NegotiationInstance> oversample_minority(const std::vector<NegotiationInstance>& train,
                                                     std::uint64_t seed);

struct SplitFractions {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct CorpusSplit {
  std::vector<NegotiationInstance> train;
  std::vector<NegotiationInstance> validation;
  std::vector<NegotiationInstance> test;
  SplitFractions fractions;
  std::uint64_t seed = 0;
};

/// Stratified by outcome so each part keeps the corpus label ratio.
CorpusSplit split_corpus(const std::vector<NegotiationInstance>& instances, SplitFractions fractions,
                         std::uint64_t seed);

}  // namespace stgfn::data
