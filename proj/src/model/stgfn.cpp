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

#include "stgfn/model/stgfn.hpp"

#include <algorithm>

#include "stgfn/error.hpp"
#include "stgfn/model/baseline.hpp"
#include "stgfn/model/lstm.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/random.hpp"

namespace stgfn::model {

namespace {

constexpr std::uint64_t kInitStream = 0x1717;

Var text_step(Tape& tape, Var table, const EmbedderSpec& spec, std::span<const EncodedInstance* const> batch,
              std::size_t k) {
  if (spec.mode == EmbedderMode::kBagOfTokens) {
    std::vector<std::vector<std::int32_t>> bags(batch.size());
    for (std::size_t r = 0; r < batch.size(); ++r)
      if (k < batch[r]->turn_tokens.size()) bags[r] = batch[r]->turn_tokens[k];
    return embedding_bag(table, bags);
  }
  Tensor m({batch.size(), spec.d_txt});
  for (std::size_t r = 0; r < batch.size(); ++r) {
    if (k >= batch[r]->turn_vectors.size()) continue;
    const auto& v = batch[r]->turn_vectors[k];
    if (v.size() != spec.d_txt) throw ShapeError("session " + batch[r]->id + ": turn vector has the wrong width");
    std::copy(v.begin(), v.end(), m.data() + r * spec.d_txt);
  }
  return tape.constant(std::move(m));
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) { return kind == ModelKind::kStGfn ? "stgfn" : "logistic"; }

ModelKind parse_model_kind(std::string_view text) {
  if (text == "stgfn") return ModelKind::kStGfn;
  if (text == "logistic") return ModelKind::kLogistic;
  throw ContractError("unknown model kind '" + std::string(text) + "' (expected stgfn|logistic)");
}

void check_model_config(const ModelConfig& config) {
  if (config.embedder.d_txt == 0) throw ContractError("d_txt must be positive");
  if (config.embedder.max_turns == 0) throw ContractError("sequence length must be positive");
  if (config.embedder.max_tokens == 0) throw ContractError("max tokens per turn must be positive");
  if (!(config.dropout >= 0.0 && config.dropout < 1.0)) throw ContractError("dropout must be in [0, 1)");
  check_gat_config({data::kNodeFeatureDim, config.hidden, config.heads, config.leaky_slope, config.trust_eps});
}

ForwardOutput Model::forward(Tape& tape, std::span<const EncodedInstance* const> batch,
                             std::mt19937_64* dropout_rng) {
  return run(tape, trainable_binder(tape, params_), batch, dropout_rng);
}

ForwardOutput Model::evaluate(Tape& tape, std::span<const EncodedInstance* const> batch) const {
  return run(tape, frozen_binder(tape, params_), batch, nullptr);
}

void Model::set_utility_bias(double a, double b) {
  Tensor& bias = params_.get(utility_bias_name());
  bias[0] = a;
  bias[1] = b;
}

StGfnModel::StGfnModel(ModelConfig config, Vocabulary vocab, std::uint64_t seed)
    : Model(std::move(config), std::move(vocab)) {
  check_model_config(config_);
  std::mt19937_64 rng(derive_seed(seed, kInitStream));
  if (config_.embedder.mode == EmbedderMode::kBagOfTokens)
    init_uniform(params_.add("embed.table", {vocab_.size(), config_.embedder.d_txt}), 1, rng);
  add_gat_parameters(params_, gat_config(), rng);
  add_fusion_parameters(params_, fusion_config(), rng);
  add_lstm_parameters(params_, config_.hidden, rng);
  init_uniform(params_.add("head.outcome.weight", {config_.hidden, 1}), config_.hidden, rng);
  init_uniform(params_.add("head.outcome.bias", {1, 1}), config_.hidden, rng);
  init_uniform(params_.add("head.utility.weight", {config_.hidden, 2}), config_.hidden, rng);
  init_uniform(params_.add("head.utility.bias", {1, 2}), config_.hidden, rng);
}

GatConfig StGfnModel::gat_config() const {
  return {data::kNodeFeatureDim, config_.hidden, config_.heads, config_.leaky_slope, config_.trust_eps};
}

FusionConfig StGfnModel::fusion_config() const {
  return {config_.embedder.d_txt, 2 * config_.hidden, config_.hidden, config_.gate_mode};
}

ForwardOutput StGfnModel::run(Tape& tape, const Binder& bind, std::span<const EncodedInstance* const> batch,
                              std::mt19937_64* dropout_rng) const {
  if (batch.empty()) throw ContractError("forward on an empty batch");
  const std::size_t rows = batch.size();
  std::size_t steps = 0;
  std::vector<const data::StrategicGraph*> graphs;
  for (const auto* inst : batch) {
    const std::size_t k = inst->turn_count();
    if (k == 0) throw ContractError("session " + inst->id + ": no turns");
    if (k > config_.embedder.max_turns)
      throw ContractError("session " + inst->id + ": " + std::to_string(k) + " turns exceed the sequence length");
    steps = std::max(steps, k);
    graphs.push_back(&inst->graph);
  }

  const bool training = dropout_rng != nullptr;
  std::mt19937_64 unused;
  std::mt19937_64& rng = training ? *dropout_rng : unused;
  const double keep = 1.0 - config_.dropout;

  const GatOutput graph = gat_forward(tape, bind, gat_config(), graphs);
  const FusionConfig fusion_cfg = fusion_config();
  const FusionContext ctx = fusion_context(bind, fusion_cfg, graph.graph);
  const Var table = config_.embedder.mode == EmbedderMode::kBagOfTokens ? bind("embed.table") : Var{};
  const LstmWeights lstm = bind_lstm(bind, config_.hidden);
  LstmState state = lstm_zero_state(tape, rows, config_.hidden);

  ForwardOutput out;
  out.gates.resize(rows);
  for (std::size_t k = 0; k < steps; ++k) {
    const FusionStep step = fuse(ctx, fusion_cfg, text_step(tape, table, config_.embedder, batch, k));
    const Tensor& z = step.gate.value();
    std::size_t active = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (k >= batch[r]->turn_count()) continue;
      if (!(z[r] > 0.0 && z[r] < 1.0)) throw NumericError("gate value left (0, 1)");
      out.gates[r].push_back(z[r]);
      ++active;
    }
    const LstmState next = lstm_step(lstm, dropout(step.fused, keep, rng, training), state);
    if (active == rows) {
      state = next;
      continue;
    }
    Tensor mask({rows, 1});
    Tensor hold({rows, 1});
    for (std::size_t r = 0; r < rows; ++r) {
      const bool on = k < batch[r]->turn_count();
      mask[r] = on ? 1.0 : 0.0;
      hold[r] = on ? 0.0 : 1.0;
    }
    const Var m = tape.constant(std::move(mask));
    const Var h = tape.constant(std::move(hold));
    state = {m * next.hidden + h * state.hidden, m * next.cell + h * state.cell};
  }

  const Var last = dropout(state.hidden, keep, rng, training);
  out.probability = sigmoid(matmul(last, bind("head.outcome.weight")) + bind("head.outcome.bias"));
  out.utilities = matmul(last, bind("head.utility.weight")) + bind("head.utility.bias");
  return out;
}

std::unique_ptr<Model> make_model(ModelKind kind, const ModelConfig& config, const Vocabulary& vocab,
                                  std::uint64_t seed) {
  if (kind == ModelKind::kStGfn) return std::make_unique<StGfnModel>(config, vocab, seed);
  return std::make_unique<LogisticBaseline>(config, vocab, seed);
}

std::pair<Prediction, GateTrace> predict(const Model& model, const EncodedInstance& instance) {
  const EncodedInstance* one[] = {&instance};
  Tape tape;
  const ForwardOutput out = model.evaluate(tape, one);
  Prediction p;
  p.probability = out.probability.value()[0];
  p.utilities = {out.utilities.value()[0], out.utilities.value()[1]};
  GateTrace trace{instance.id, out.gates.empty() ? std::vector<double>{} : out.gates[0], instance.outcome};
  return {p, std::move(trace)};
}

PredictionSet predict_all(const Model& model, std::span<const EncodedInstance> instances, std::size_t batch_size) {
  if (batch_size == 0) throw ContractError("batch size must be positive");
  PredictionSet out;
  for (std::size_t begin = 0; begin < instances.size(); begin += batch_size) {
    const std::size_t end = std::min(instances.size(), begin + batch_size);
    std::vector<const EncodedInstance*> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&instances[i]);
    Tape tape;
    const ForwardOutput fw = model.evaluate(tape, batch);
    for (std::size_t r = 0; r < batch.size(); ++r) {
      Prediction p;
      p.probability = fw.probability.value()[r];
      p.utilities = {fw.utilities.value().at(r, 0), fw.utilities.value().at(r, 1)};
      out.predictions.push_back(p);
      out.traces.push_back({batch[r]->id, fw.gates.empty() ? std::vector<double>{} : fw.gates[r], batch[r]->outcome});
    }
  }
  return out;
}

}  // namespace stgfn::model
