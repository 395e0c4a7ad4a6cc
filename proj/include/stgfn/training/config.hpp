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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "stgfn/loss.hpp"
#include "stgfn/model/stgfn.hpp"

namespace stgfn::training {

struct TrainConfig {
  std::size_t batch_size = 16;
  double learning_rate = 1e-4;
  double weight_decay = 1e-4;
  std::size_t max_epochs = 100;
  int patience = 5;
  double factor = 0.1;
  double lambda = 0.7;
  double dropout = 0.3;
  std::size_t d_hidden = 128;
  std::size_t heads = 2;
  std::size_t seq_len = 10;
  std::size_t d_txt = 768;
  std::size_t max_tokens = 128;
  std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
  model::GateMode gate_mode = model::GateMode::kLiteral;
  model::EmbedderMode embedder = model::EmbedderMode::kBagOfTokens;
  double outcome_weight = 1.0;
  double utility_weight = 1.0;
  std::uint64_t split_seed = 42;
  bool oversample = true;

  bool operator==(const TrainConfig&) const = default;
};

/// Throws ContractError naming the first invalid field.
void validate(const TrainConfig& config);

/// Flat object keyed by field name.
nlohmann::ordered_json to_json(const TrainConfig& config);

/// Fields absent from the document keep their defaults. Throws ParseError on
/// unknown keys or wrongly typed values; the result is validated.
TrainConfig config_from_json(const nlohmann::json& doc);
TrainConfig load_config(const std::filesystem::path& path);

/// Sets one field from its text form ("seeds" takes a comma list).
void apply_override(TrainConfig& config, std::string_view key, std::string_view value);

/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const TrainConfig& config);

model::ModelConfig model_config(const TrainConfig& config);
loss::TermWeights term_weights(const TrainConfig& config);

}  // namespace stgfn::training
