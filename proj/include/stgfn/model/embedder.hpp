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

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stgfn/data/features.hpp"
#include "stgfn/data/types.hpp"
#include "stgfn/tape.hpp"

namespace stgfn::model {

/// Token -> row index. Index 0 is reserved for unknown tokens.
class Vocabulary {
 public:
  static constexpr std::int32_t kUnknown = 0;
  static constexpr std::string_view kUnknownToken = "<unk>";

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> tokens);

  /// Every distinct token of the corpus, sorted, after <unk>.
  static Vocabulary build(const std::vector<data::NegotiationInstance>& corpus);

  std::int32_t index(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> lookup_;
};

enum class EmbedderMode { kBagOfTokens, kPassthrough };

std::string_view embedder_mode_name(EmbedderMode mode);
EmbedderMode parse_embedder_mode(std::string_view text);

struct EmbedderSpec {
  EmbedderMode mode = EmbedderMode::kBagOfTokens;
  std::size_t d_txt = 768;
  std::size_t max_tokens = 128;
  /// Longer dialogues keep their last max_turns turns.
  std::size_t max_turns = 10;
};

/// An instance turned into model inputs.
struct EncodedInstance {
  std::string id;
  /// Vocabulary indices per kept turn (bag mode).
  std::vector<std::vector<std::int32_t>> turn_tokens;
  /// Turn vectors per kept turn (passthrough mode).
  std::vector<std::vector<double>> turn_vectors;
  data::StrategicGraph graph;
  int outcome = 0;
  data::UtilityPair utilities;

  std::size_t turn_count() const { return turn_tokens.empty() ? turn_vectors.size() : turn_tokens.size(); }
};

/// Index of the first kept turn.
std::size_t first_kept_turn(std::size_t turn_count, std::size_t max_turns);

/// Token indices of one turn, truncated to max_tokens. An empty turn maps
/// to a single unknown token.
std::vector<std::int32_t> encode_turn(const data::Turn& turn, const Vocabulary& vocab, std::size_t max_tokens);

/// Throws ContractError if the instance has no turns or lacks utilities;
/// ShapeError if a passthrough turn vector has the wrong width.
EncodedInstance encode_instance(const data::NegotiationInstance& instance, const Vocabulary& vocab,
                                const EmbedderSpec& spec, const data::CorpusStats& stats);

std::vector<EncodedInstance> encode_corpus(const std::vector<data::NegotiationInstance>& corpus,
                                           const Vocabulary& vocab, const EmbedderSpec& spec,
                                           const data::CorpusStats& stats);

/// Turn matrix [turns x d_txt] for one dialogue. table is the [vocab x d_txt]
/// embedding table (ignored in passthrough mode).
Var embed_turns(Tape& tape, Var table, const EncodedInstance& instance, const EmbedderSpec& spec);

}  // namespace stgfn::model
