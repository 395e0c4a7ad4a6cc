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
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgfn/data/types.hpp"
#include "stgfn/model/embedder.hpp"
#include "stgfn/model/fusion.hpp"
#include "stgfn/model/gat.hpp"
#include "stgfn/model/parameters.hpp"

namespace stgfn::model {

struct Prediction {
  /// Deal probability, strictly inside (0, 1).
  double probability = 0.5;
  data::UtilityPair utilities;
};

/// Gate values of one dialogue, one per kept turn.
struct GateTrace {
  std::string session_id;
  std::vector<double> gates;
  int outcome = 0;
};

struct ForwardOutput {
  /// [batch x 1]
  Var probability;
  /// [batch x 2], agent A first.
  Var utilities;
  /// Gate values per batch row; empty for models without a gate.
  std::vector<std::vector<double>> gates;
};

enum class ModelKind { kStGfn, kLogistic };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ModelConfig {
  EmbedderSpec embedder;
  std::size_t hidden = 128;
  std::size_t heads = 2;
  GateMode gate_mode = GateMode::kLiteral;
  double dropout = 0.3;
  double leaky_slope = 0.2;
  double trust_eps = 1e-6;
};

/// Throws ContractError on an unusable configuration.
void check_model_config(const ModelConfig& config);

class Model {
 public:
  Model(ModelConfig config, Vocabulary vocab) : config_(std::move(config)), vocab_(std::move(vocab)) {}
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;
  virtual std::unique_ptr<Model> clone() const = 0;

  /// Gradients flow into parameters(). Dropout is active iff dropout_rng is set.
  ForwardOutput forward(Tape& tape, std::span<const EncodedInstance* const> batch, std::mt19937_64* dropout_rng);

  /// No gradients, no dropout. Safe to call concurrently on one model.
  ForwardOutput evaluate(Tape& tape, std::span<const EncodedInstance* const> batch) const;

  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }
  const ModelConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocab_; }

  /// Sets the utility output bias, e.g. to the mean training targets.
  void set_utility_bias(double a, double b);

 protected:
  virtual std::string utility_bias_name() const = 0;
  virtual ForwardOutput run(Tape& tape, const Binder& bind, std::span<const EncodedInstance* const> batch,
                            std::mt19937_64* dropout_rng) const = 0;

  ModelConfig config_;
  Vocabulary vocab_;
  ParameterSet params_;
};

class StGfnModel final : public Model {
 public:
  /// Parameters are initialised from seed.
  StGfnModel(ModelConfig config, Vocabulary vocab, std::uint64_t seed);

  ModelKind kind() const override { return ModelKind::kStGfn; }
  std::unique_ptr<Model> clone() const override { return std::make_unique<StGfnModel>(*this); }

  GatConfig gat_config() const;
  FusionConfig fusion_config() const;

 protected:
  std::string utility_bias_name() const override { return "head.utility.bias"; }
  ForwardOutput run(Tape& tape, const Binder& bind, std::span<const EncodedInstance* const> batch,
                    std::mt19937_64* dropout_rng) const override;
};

/// Builds a model of the given kind with freshly initialised parameters.
std::unique_ptr<Model> make_model(ModelKind kind, const ModelConfig& config, const Vocabulary& vocab,
                                  std::uint64_t seed);

/// Evaluation-mode prediction for one dialogue.
std::pair<Prediction, GateTrace> predict(const Model& model, const EncodedInstance& instance);

struct PredictionSet {
  std::vector<Prediction> predictions;
  std::vector<GateTrace> traces;
};

/// Same results as calling predict() on each instance; runs in batches.
PredictionSet predict_all(const Model& model, std::span<const EncodedInstance> instances,
                          std::size_t batch_size = 64);

}  // namespace stgfn::model
