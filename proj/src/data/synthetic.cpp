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

#include "stgfn/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/random.hpp"

namespace stgfn::data {
namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return uniform01(rng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 rng_;
};

constexpr std::array<Svo, 4> kSvos{Svo::kProsocial, Svo::kIndividualistic, Svo::kCompetitive, Svo::kUnknown};

AgentProfile draw_profile(Draw& d, const SyntheticSpec& spec) {
  AgentProfile p;
  p.batna = d.uniform(spec.batna_min, spec.batna_max);
  p.budget = d.uniform(10.0, 30.0);
  p.svo = kSvos[d.index(kSvos.size())];
  std::array<double, 3> levels{3.0, 2.0, 1.0};
  for (std::size_t i = levels.size(); i > 1; --i) std::swap(levels[i - 1], levels[d.index(i)]);
  p.priorities = levels;
  return p;
}

std::size_t top_issue(const AgentProfile& p) {
  return static_cast<std::size_t>(std::max_element(p.priorities.begin(), p.priorities.end()) - p.priorities.begin());
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.text_strength < 0.0 || spec.text_strength > 1.0 || spec.graph_strength < 0.0 || spec.graph_strength > 1.0) {
    throw ContractError("synthetic signal strengths must lie in [0, 1]");
  }
  if (spec.delta_star < 0.0) throw ContractError("synthetic delta_star must be non-negative");
  if (spec.delta_star * (1.0 + spec.gap_jitter) > spec.pie) {
    throw ContractError("synthetic gap " + std::to_string(spec.delta_star) + " (with jitter) exceeds the pie " +
                        std::to_string(spec.pie));
  }
  if (spec.min_turns < 2 || spec.max_turns < spec.min_turns) throw ContractError("synthetic turn range is invalid");
  if (spec.vocabulary == 0) throw ContractError("synthetic vocabulary must be non-empty");

  Draw d(derive_seed(spec.seed, 0x51));
  SyntheticCorpus corpus;
  corpus.instances.reserve(spec.instances);
  corpus.truth.reserve(spec.instances);

  for (std::size_t n = 0; n < spec.instances; ++n) {
    NegotiationInstance inst;
    SyntheticTruth truth;
    inst.id = "syn-" + std::to_string(spec.seed) + "-" + std::to_string(n);
    inst.agent_a = draw_profile(d, spec);
    inst.agent_b = draw_profile(d, spec);
    inst.agent_a.role = d.bernoulli(0.5) ? 1 : 0;
    inst.agent_b.role = 1 - inst.agent_a.role;

    truth.pie = spec.pie + (top_issue(inst.agent_a) != top_issue(inst.agent_b) ? spec.integrative_bonus : 0.0);
    truth.batna_compatible = truth.pie >= inst.agent_a.batna + inst.agent_b.batna;
    truth.accept_token = d.bernoulli(spec.accept_rate);
    truth.text_active = d.bernoulli(spec.text_strength);
    truth.graph_active = d.bernoulli(spec.graph_strength);
    const bool coin = d.bernoulli(0.5);
    if (truth.text_active || truth.graph_active) {
      inst.outcome = ((!truth.text_active || truth.accept_token) && (!truth.graph_active || truth.batna_compatible)) ? 1 : 0;
    } else {
      inst.outcome = coin ? 1 : 0;
    }

    // Favoured agent for the split.
    const double strength_sum = spec.text_strength + spec.graph_strength;
    truth.text_cue = strength_sum > 0.0 ? d.bernoulli(spec.text_strength / strength_sum) : d.bernoulli(0.5);
    const int cue_agent = truth.text_cue ? (d.bernoulli(0.5) ? 1 : 0)
                                         : (inst.agent_a.batna >= inst.agent_b.batna ? 0 : 1);
    truth.favoured = d.bernoulli(spec.cue_reliability) ? cue_agent : 1 - cue_agent;
    truth.gap = spec.delta_star * (1.0 + d.uniform(-spec.gap_jitter, spec.gap_jitter));

    // Dialogue.
    const std::size_t turns = spec.min_turns + d.index(spec.max_turns - spec.min_turns + 1);
    for (std::size_t k = 0; k < turns; ++k) {
      Turn t;
      t.speaker = k % 2 == 0 ? Speaker::kA : Speaker::kB;
      const bool last = k + 1 == turns;
      const std::size_t words = last ? d.index(3) : 3 + d.index(5);
      for (std::size_t w = 0; w < words; ++w) t.tokens.push_back("w" + std::to_string(d.index(spec.vocabulary)));
      inst.turns.push_back(std::move(t));
    }
    if (truth.text_cue) {
      // A claim by the cue agent inside the last ten turns.
      std::vector<std::size_t> candidates;
      for (std::size_t k = turns > 10 ? turns - 10 : 0; k + 1 < turns; ++k) {
        if (static_cast<int>(inst.turns[k].speaker == Speaker::kA ? 0 : 1) == cue_agent) candidates.push_back(k);
      }
      if (!candidates.empty()) {
        auto& tokens = inst.turns[candidates[d.index(candidates.size())]].tokens;
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(d.index(tokens.size() + 1)), "claim");
      }
    }
    auto& closing = inst.turns.back().tokens;
    closing.insert(closing.begin() + static_cast<std::ptrdiff_t>(d.index(closing.size() + 1)),
                   truth.accept_token ? "accept" : "reject");
    for (auto& t : inst.turns) t.text = join(t.tokens);

    if (inst.outcome == 1) {
      const double hi = truth.pie / 2.0 + truth.gap / 2.0;
      const double lo = truth.pie / 2.0 - truth.gap / 2.0;
      inst.utilities = truth.favoured == 0 ? UtilityPair{hi, lo} : UtilityPair{lo, hi};
    } else {
      inst.utilities = UtilityPair{inst.agent_a.batna, inst.agent_b.batna};
    }
    corpus.instances.push_back(std::move(inst));
    corpus.truth.push_back(truth);
  }
  return corpus;
}

SyntheticStats synthetic_stats(const SyntheticCorpus& corpus) {
  SyntheticStats s;
  if (corpus.instances.empty()) return s;
  std::size_t deals = 0;
  double gap = 0.0;
  for (const auto& inst : corpus.instances) {
    if (inst.outcome != 1) continue;
    ++deals;
    gap += std::fabs(inst.utilities->a - inst.utilities->b);
  }
  s.deal_rate = static_cast<double>(deals) / static_cast<double>(corpus.instances.size());
  s.mean_deal_gap = deals ? gap / static_cast<double>(deals) : 0.0;
  return s;
}

int text_rule(const NegotiationInstance& instance) {
  const auto& tokens = instance.turns.back().tokens;
  return std::find(tokens.begin(), tokens.end(), "accept") != tokens.end() ? 1 : 0;
}

}  // namespace stgfn::data
