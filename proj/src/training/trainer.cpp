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

#include "stgfn/training/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/random.hpp"

namespace stgfn::training {

namespace {

constexpr std::uint64_t kShuffleStream = 0x5f;
constexpr std::uint64_t kDropoutStream = 0xd0;
constexpr std::uint64_t kOversampleStream = 0x05;

struct BatchTargets {
  std::vector<int> labels;
  Tensor utilities;
};

BatchTargets targets(std::span<const model::EncodedInstance* const> batch) {
  BatchTargets t{{}, Tensor({batch.size(), 2})};
  for (std::size_t r = 0; r < batch.size(); ++r) {
    t.labels.push_back(batch[r]->outcome);
    t.utilities.at(r, 0) = batch[r]->utilities.a;
    t.utilities.at(r, 1) = batch[r]->utilities.b;
  }
  return t;
}

void accumulate(loss::LossBreakdown& into, const loss::LossBreakdown& b, double weight) {
  into.outcome += weight * b.outcome;
  into.utility += weight * b.utility;
  into.fairness += weight * b.fairness;
  into.total += weight * b.total;
}

}  // namespace

PreparedData prepare_data(const data::CorpusSplit& split, const TrainConfig& config, std::uint64_t seed) {
  validate(config);
  if (split.train.empty()) throw ContractError("training split is empty");
  if (split.validation.empty()) throw ContractError("validation split is empty");
  data::require_valid(split.train);
  data::require_valid(split.validation);
  data::require_valid(split.test);
  PreparedData out;
  out.vocab = model::Vocabulary::build(split.train);
  out.stats = data::compute_corpus_stats(split.train);
  const model::EmbedderSpec spec = model_config(config).embedder;
  const auto train = config.oversample ? data::oversample_minority(split.train, derive_seed(seed, kOversampleStream))
                                       : split.train;
  out.train = model::encode_corpus(train, out.vocab, spec, out.stats);
  out.validation = model::encode_corpus(split.validation, out.vocab, spec, out.stats);
  out.test = model::encode_corpus(split.test, out.vocab, spec, out.stats);
  return out;
}

nlohmann::ordered_json to_json(const EpochLog& l) {
  return {{"epoch", l.epoch},
          {"lr", l.lr},
          {"loss_outcome", l.loss_outcome},
          {"loss_utility", l.loss_utility},
          {"loss_fairness", l.loss_fairness},
          {"loss_total", l.loss_total},
          {"val_loss", l.val_loss},
          {"val_accuracy", l.val_accuracy}};
}

EpochLog epoch_log_from_json(const nlohmann::json& j) {
  EpochLog l;
  l.epoch = j.at("epoch").get<std::size_t>();
  l.lr = j.at("lr").get<double>();
  l.loss_outcome = j.at("loss_outcome").get<double>();
  l.loss_utility = j.at("loss_utility").get<double>();
  l.loss_fairness = j.at("loss_fairness").get<double>();
  l.loss_total = j.at("loss_total").get<double>();
  l.val_loss = j.at("val_loss").get<double>();
  l.val_accuracy = j.at("val_accuracy").get<double>();
  return l;
}

loss::LossBreakdown evaluate_loss(const model::Model& model, std::span<const model::EncodedInstance> set,
                                  double lambda, loss::TermWeights weights, std::size_t batch_size) {
  if (set.empty()) throw ContractError("evaluate_loss on an empty set");
  loss::LossBreakdown total;
  total.lambda = lambda;
  for (std::size_t begin = 0; begin < set.size(); begin += batch_size) {
    const std::size_t end = std::min(set.size(), begin + batch_size);
    std::vector<const model::EncodedInstance*> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&set[i]);
    Tape tape;
    const auto fw = model.evaluate(tape, batch);
    auto t = targets(batch);
    const auto l = loss::composite_loss(fw.probability, t.labels, fw.utilities, tape.constant(std::move(t.utilities)),
                                        lambda, weights);
    accumulate(total, l.breakdown(), static_cast<double>(batch.size()) / static_cast<double>(set.size()));
  }
  return total;
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, kShuffleStream, epoch));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  return order;
}

Trainer::Trainer(model::ModelKind kind, TrainConfig config, double lambda, const PreparedData& data,
                 std::uint64_t seed)
    : config_(std::move(config)), lambda_(lambda), data_(&data), seed_(seed) {
  validate(config_);
  if (!(lambda_ >= 0.0)) throw ContractError("lambda must be non-negative");
  if (data.train.empty() || data.validation.empty()) throw ContractError("training and validation sets must be non-empty");
  model_ = model::make_model(kind, model_config(config_), data.vocab, seed);
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (const auto& inst : data.train) {
    mean_a += inst.utilities.a;
    mean_b += inst.utilities.b;
  }
  const auto n = static_cast<double>(data.train.size());
  model_->set_utility_bias(mean_a / n, mean_b / n);
  best_ = model_->clone();
  state_.optimizer.lr = config_.learning_rate;
  state_.optimizer.weight_decay = config_.weight_decay;
  state_.scheduler.patience = config_.patience;
  state_.scheduler.factor = config_.factor;
}

Trainer::Trainer(std::unique_ptr<model::Model> model, std::unique_ptr<model::Model> best, TrainerState state,
                 TrainConfig config, double lambda, const PreparedData& data, std::uint64_t seed)
    : config_(std::move(config)),
      lambda_(lambda),
      data_(&data),
      seed_(seed),
      model_(std::move(model)),
      best_(std::move(best)),
      state_(std::move(state)) {
  validate(config_);
  if (!model_ || !best_ || !model_->parameters().same_layout(best_->parameters()))
    throw ContractError("resumed models are missing or differ in layout");
  if (data.train.empty() || data.validation.empty()) throw ContractError("training and validation sets must be non-empty");
}

const EpochLog& Trainer::run_epoch() {
  if (done()) throw ContractError("training already ran all " + std::to_string(config_.max_epochs) + " epochs");
  const auto started = std::chrono::steady_clock::now();
  const std::size_t epoch = state_.epoch + 1;
  const auto& train = data_->train;
  const auto order = epoch_order(train.size(), seed_, epoch);
  std::mt19937_64 dropout_rng(derive_seed(seed_, kDropoutStream, epoch));
  const loss::TermWeights weights = term_weights(config_);
  auto params = model_->parameters().pointers();

  EpochLog log;
  log.epoch = epoch;
  log.lr = state_.optimizer.lr;
  loss::LossBreakdown sums;
  std::size_t batch_index = 0;
  for (std::size_t begin = 0; begin < order.size(); begin += config_.batch_size, ++batch_index) {
    const std::size_t end = std::min(order.size(), begin + config_.batch_size);
    std::vector<const model::EncodedInstance*> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&train[order[i]]);
    const auto where = [&] {
      return "epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_index) + " (first session " +
             batch.front()->id + ")";
    };
    model_->parameters().zero_grad();
    loss::LossBreakdown b;
    try {
      Tape tape;
      const auto fw = model_->forward(tape, batch, &dropout_rng);
      auto t = targets(batch);
      const auto l = loss::composite_loss(fw.probability, t.labels, fw.utilities,
                                          tape.constant(std::move(t.utilities)), lambda_, weights);
      b = l.breakdown();
      if (!std::isfinite(b.total)) throw NumericError("non-finite loss");
      tape.backward(l.total);
      adamw_step(params, state_.optimizer);
    } catch (const NumericError& e) {
      throw DivergenceError("divergence at " + where() + ": " + e.what());
    }
    for (const Tensor* p : params)
      if (!p->all_finite()) throw DivergenceError("divergence at " + where() + ": parameters became non-finite");
    accumulate(sums, b, static_cast<double>(batch.size()) / static_cast<double>(train.size()));
  }
  log.loss_outcome = sums.outcome;
  log.loss_utility = sums.utility;
  log.loss_fairness = sums.fairness;
  log.loss_total = sums.total;

  const auto val = evaluate_loss(*model_, data_->validation, lambda_, weights, config_.batch_size);
  if (!std::isfinite(val.total))
    throw DivergenceError("divergence at epoch " + std::to_string(epoch) + ": non-finite validation loss");
  log.val_loss = val.total;
  const auto preds = model::predict_all(*model_, data_->validation, config_.batch_size);
  log.val_accuracy = evaluation::evaluate(preds.predictions, data_->validation).accuracy;

  if (val.total < state_.best_val) {
    state_.best_val = val.total;
    state_.best_epoch = epoch;
    best_->parameters().copy_values_from(model_->parameters());
  }
  scheduler_step(state_.scheduler, val.total, state_.optimizer.lr);
  state_.epoch = epoch;
  state_.log.push_back(log);
  wall_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return state_.log.back();
}

void Trainer::run(const EpochCallback& on_epoch) {
  while (!done()) {
    const EpochLog& log = run_epoch();
    if (on_epoch) on_epoch(log);
  }
}

RunResult Trainer::result() const {
  RunResult r;
  r.seed = seed_;
  r.kind = model_->kind();
  r.lambda = lambda_;
  r.log = state_.log;
  r.best_epoch = state_.best_epoch;
  r.wall_seconds = wall_seconds_;
  if (!data_->test.empty()) {
    auto preds = model::predict_all(*best_, data_->test, config_.batch_size);
    r.test = evaluation::evaluate(preds.predictions, data_->test);
    r.test_predictions = std::move(preds.predictions);
    if (model_->kind() == model::ModelKind::kStGfn) r.traces = std::move(preds.traces);
  }
  return r;
}

RunResult train(const PreparedData& data, const TrainConfig& config, model::ModelKind kind, double lambda,
                std::uint64_t seed, const EpochCallback& on_epoch) {
  Trainer trainer(kind, config, lambda, data, seed);
  trainer.run(on_epoch);
  return trainer.result();
}

}  // namespace stgfn::training
