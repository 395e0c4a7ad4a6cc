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

#include "stgfn/model/embedder.hpp"

#include <algorithm>
#include <set>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::model {

namespace {

std::vector<std::string> turn_tokens(const data::Turn& turn) {
  return turn.tokens.empty() ? data::tokenize(turn.text) : turn.tokens;
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  tokens_.emplace_back(kUnknownToken);
  lookup_.emplace(std::string(kUnknownToken), kUnknown);
  for (auto& t : tokens) {
    if (t == kUnknownToken) continue;
    if (lookup_.count(t)) throw ContractError("duplicate vocabulary token '" + t + "'");
    lookup_.emplace(t, static_cast<std::int32_t>(tokens_.size()));
    tokens_.push_back(std::move(t));
  }
}

Vocabulary Vocabulary::build(const std::vector<data::NegotiationInstance>& corpus) {
  std::set<std::string> seen;
  for (const auto& inst : corpus)
    for (const auto& turn : inst.turns)
      for (auto& tok : turn_tokens(turn)) seen.insert(std::move(tok));
  return Vocabulary(std::vector<std::string>(seen.begin(), seen.end()));
}

std::int32_t Vocabulary::index(std::string_view token) const {
  auto it = lookup_.find(std::string(token));
  return it == lookup_.end() ? kUnknown : it->second;
}

std::string_view embedder_mode_name(EmbedderMode mode) {
  return mode == EmbedderMode::kBagOfTokens ? "bag" : "passthrough";
}

EmbedderMode parse_embedder_mode(std::string_view text) {
  if (text == "bag") return EmbedderMode::kBagOfTokens;
  if (text == "passthrough") return EmbedderMode::kPassthrough;
  throw ContractError("unknown embedder mode '" + std::string(text) + "' (expected bag|passthrough)");
}

std::size_t first_kept_turn(std::size_t turn_count, std::size_t max_turns) {
  return turn_count > max_turns ? turn_count - max_turns : 0;
}

std::vector<std::int32_t> encode_turn(const data::Turn& turn, const Vocabulary& vocab, std::size_t max_tokens) {
  std::vector<std::int32_t> out;
  for (const auto& tok : turn_tokens(turn)) {
    if (out.size() >= max_tokens) break;
    out.push_back(vocab.index(tok));
  }
  if (out.empty()) out.push_back(Vocabulary::kUnknown);
  return out;
}

EncodedInstance encode_instance(const data::NegotiationInstance& instance, const Vocabulary& vocab,
                                const EmbedderSpec& spec, const data::CorpusStats& stats) {
  if (instance.turns.empty()) throw ContractError("session " + instance.id + ": no turns");
  if (!instance.utilities) throw ContractError("session " + instance.id + ": missing utilities");
  if (spec.max_turns == 0) throw ContractError("max_turns must be positive");
  EncodedInstance out;
  out.id = instance.id;
  out.outcome = instance.outcome;
  out.utilities = *instance.utilities;
  out.graph = data::build_graph(instance, stats);
  for (std::size_t k = first_kept_turn(instance.turns.size(), spec.max_turns); k < instance.turns.size(); ++k) {
    const auto& turn = instance.turns[k];
    if (spec.mode == EmbedderMode::kBagOfTokens) {
      out.turn_tokens.push_back(encode_turn(turn, vocab, spec.max_tokens));
    } else {
      if (turn.embedding.size() != spec.d_txt)
        throw ShapeError("session " + instance.id + ": turn " + std::to_string(k) + " vector has width " +
                            std::to_string(turn.embedding.size()) + ", expected " + std::to_string(spec.d_txt));
      out.turn_vectors.push_back(turn.embedding);
    }
  }
  return out;
}

std::vector<EncodedInstance> encode_corpus(const std::vector<data::NegotiationInstance>& corpus,
                                           const Vocabulary& vocab, const EmbedderSpec& spec,
                                           const data::CorpusStats& stats) {
  std::vector<EncodedInstance> out;
  out.reserve(corpus.size());
  for (const auto& inst : corpus) out.push_back(encode_instance(inst, vocab, spec, stats));
  return out;
}

Var embed_turns(Tape& tape, Var table, const EncodedInstance& instance, const EmbedderSpec& spec) {
  if (spec.mode == EmbedderMode::kBagOfTokens) return embedding_bag(table, instance.turn_tokens);
  Tensor m({instance.turn_vectors.size(), spec.d_txt});
  for (std::size_t r = 0; r < instance.turn_vectors.size(); ++r)
    std::copy(instance.turn_vectors[r].begin(), instance.turn_vectors[r].end(), m.data() + r * spec.d_txt);
  return tape.constant(std::move(m));
}

}  // namespace stgfn::model
