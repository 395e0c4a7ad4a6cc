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

// Synthetic negotiation corpora with a known generative rule.
//
// Each dialogue carries two latent deal signals:
//   text  - the closing turn contains "accept" (otherwise "reject");
//   graph - BATNA compatibility: pie >= batna_A + batna_B.
// Per instance, each signal is "active" with probability equal to its
// strength. The label is the conjunction of the active signals, or a fair
// coin when neither is active.
//
// Deals split the pie with a gap drawn around delta_star. The favoured agent
// is announced in the text (a "claim" turn) or implied by the higher BATNA,
// chosen in proportion to the two strengths, and is then flipped with
// probability 1 - cue_reliability. No-deal utilities are the BATNA values.

#include <cstdint>
#include <vector>

#include "stgfn/data/types.hpp"

namespace stgfn::data {

struct SyntheticSpec {
  std::size_t instances = 500;
  /// Number of filler words ("w0", "w1", ...).
  std::size_t vocabulary = 40;
  /// Target mean |u_A - u_B| over deals.
  double delta_star = 6.0;
  double text_strength = 1.0;
  double graph_strength = 0.0;
  std::uint64_t seed = 1;
  double pie = 20.0;
  /// Extra pie when the agents' top priorities differ.
  double integrative_bonus = 4.0;
  double batna_min = 2.0;
  double batna_max = 14.0;
  std::size_t min_turns = 4;
  std::size_t max_turns = 12;
  double accept_rate = 0.6;
  /// Relative half-width of the uniform jitter on the gap.
  double gap_jitter = 0.25;
  double cue_reliability = 0.75;
};

/// Latent variables behind one generated instance.
struct SyntheticTruth {
  bool text_active = false;
  bool graph_active = false;
  bool accept_token = false;
  bool batna_compatible = false;
  bool text_cue = false;
  int favoured = 0;  // 0 = A, 1 = B
  double pie = 0.0;
  double gap = 0.0;
};

struct SyntheticCorpus {
  std::vector<NegotiationInstance> instances;
  std::vector<SyntheticTruth> truth;
};

/// Throws ContractError for strengths outside [0, 1] or a gap that cannot fit in the pie.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

struct SyntheticStats {
  double deal_rate = 0.0;
  /// Mean |u_A - u_B| over deals (0 if there are none).
  double mean_deal_gap = 0.0;
};

SyntheticStats synthetic_stats(const SyntheticCorpus& corpus);

/// The text-only decision rule: deal iff the last turn says "accept".
int text_rule(const NegotiationInstance& instance);

}  // namespace stgfn::data
