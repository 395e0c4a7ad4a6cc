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

#include "stgfn/model/baseline.hpp"

#include <algorithm>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/random.hpp"

namespace stgfn::model {

namespace {

constexpr std::uint64_t kInitStream = 0x1718;

}  // namespace

LogisticBaseline::LogisticBaseline(ModelConfig config, Vocabulary vocab, std::uint64_t seed)
    : Model(std::move(config), std::move(vocab)) {
  check_model_config(config_);
  std::mt19937_64 rng(derive_seed(seed, kInitStream));
  const std::size_t f = feature_dim();
  init_uniform(params_.add("baseline.outcome.weight", {f, 1}), f, rng);
  init_uniform(params_.add("baseline.outcome.bias", {1, 1}), f, rng);
  init_uniform(params_.add("baseline.utility.weight", {f, 2}), f, rng);
  init_uniform(params_.add("baseline.utility.bias", {1, 2}), f, rng);
}

std::size_t LogisticBaseline::feature_dim() const {
  const std::size_t text = config_.embedder.mode == EmbedderMode::kBagOfTokens ? vocab_.size() : config_.embedder.d_txt;
  return text + 2 * data::kNodeFeatureDim;
}

std::vector<double> LogisticBaseline::features(const EncodedInstance& instance) const {
  std::vector<double> out(feature_dim(), 0.0);
  const std::size_t turns = instance.turn_count();
  if (turns == 0) throw ContractError("session " + instance.id + ": no turns");
  std::size_t text_dim = 0;
  if (config_.embedder.mode == EmbedderMode::kBagOfTokens) {
    text_dim = vocab_.size();
    for (const auto& turn : instance.turn_tokens) {
      const double w = 1.0 / static_cast<double>(turn.size() * turns);
      for (std::int32_t idx : turn) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= text_dim)
          throw ContractError("session " + instance.id + ": token index outside the vocabulary");
        out[static_cast<std::size_t>(idx)] += w;
      }
    }
  } else {
    text_dim = config_.embedder.d_txt;
    for (const auto& v : instance.turn_vectors) {
      if (v.size() != text_dim) throw ShapeError("session " + instance.id + ": turn vector has the wrong width");
      for (std::size_t c = 0; c < text_dim; ++c) out[c] += v[c] / static_cast<double>(turns);
    }
  }
  for (std::size_t node = 0; node < 2; ++node)
    std::copy(instance.graph.features[node].begin(), instance.graph.features[node].end(),
              out.begin() + static_cast<std::ptrdiff_t>(text_dim + node * data::kNodeFeatureDim));
  return out;
}

ForwardOutput LogisticBaseline::run(Tape& tape, const Binder& bind, std::span<const EncodedInstance* const> batch,
                                    std::mt19937_64*) const {
  if (batch.empty()) throw ContractError("forward on an empty batch");
  const std::size_t f = feature_dim();
  Tensor x({batch.size(), f});
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto row = features(*batch[r]);
    std::copy(row.begin(), row.end(), x.data() + r * f);
  }
  const Var input = tape.constant(std::move(x));
  ForwardOutput out;
  out.probability = sigmoid(matmul(input, bind("baseline.outcome.weight")) + bind("baseline.outcome.bias"));
  out.utilities = matmul(input, bind("baseline.utility.weight")) + bind("baseline.utility.bias");
  return out;
}

}  // namespace stgfn::model
