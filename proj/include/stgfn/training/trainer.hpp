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
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"
#include "stgfn/data/features.hpp"
#include "stgfn/evaluation/metrics.hpp"
#include "stgfn/loss.hpp"
#include "stgfn/model/stgfn.hpp"
#include "stgfn/optim.hpp"
#include "stgfn/training/config.hpp"

namespace stgfn::training {

/// Encoded splits. Vocabulary and normalisation statistics come from the
/// training part only.
struct PreparedData {
  model::Vocabulary vocab;
  data::CorpusStats stats;
  std::vector<model::EncodedInstance> train;
  std::vector<model::EncodedInstance> validation;
  std::vector<model::EncodedInstance> test;
};

/// Oversamples the training part (when enabled) with seed and encodes all
/// three parts. Throws ContractError on an empty training or validation part.
PreparedData prepare_data(const data::CorpusSplit& split, const TrainConfig& config, std::uint64_t seed);

struct EpochLog {
  std::size_t epoch = 0;
  /// Rate used during the epoch.
  double lr = 0.0;
  double loss_outcome = 0.0;
  double loss_utility = 0.0;
  double loss_fairness = 0.0;
  double loss_total = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;

  bool operator==(const EpochLog&) const = default;
};

nlohmann::ordered_json to_json(const EpochLog& log);
EpochLog epoch_log_from_json(const nlohmann::json& j);

/// Composite loss of a model over a set, in evaluation mode.
loss::LossBreakdown evaluate_loss(const model::Model& model, std::span<const model::EncodedInstance> set,
                                  double lambda, loss::TermWeights weights, std::size_t batch_size);

/// Everything besides the parameters that a resumed run needs.
struct TrainerState {
  std::size_t epoch = 0;
  AdamWState optimizer;
  PlateauScheduler scheduler;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  std::vector<EpochLog> log;
};

struct RunResult {
  std::uint64_t seed = 0;
  model::ModelKind kind = model::ModelKind::kStGfn;
  double lambda = 0.0;
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  evaluation::MetricsReport test;
  std::vector<model::Prediction> test_predictions;
  std::vector<model::GateTrace> traces;
  double wall_seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Keeps a pointer to the prepared data, which must outlive the trainer.
class Trainer {
 public:
  /// Fresh run with parameters initialised from seed.
  Trainer(model::ModelKind kind, TrainConfig config, double lambda, const PreparedData& data, std::uint64_t seed);

  /// Resumed run. model and best must share a layout.
  Trainer(std::unique_ptr<model::Model> model, std::unique_ptr<model::Model> best, TrainerState state,
          TrainConfig config, double lambda, const PreparedData& data, std::uint64_t seed);

  /// One pass over the training part, then validation and scheduling.
  /// Throws DivergenceError naming the epoch and batch on a non-finite loss.
  const EpochLog& run_epoch();
  bool done() const { return state_.epoch >= config_.max_epochs; }
  void run(const EpochCallback& on_epoch = {});

  /// Test-set evaluation of the model selected by validation loss.
  RunResult result() const;

  const model::Model& model() const { return *model_; }
  const model::Model& best_model() const { return *best_; }
  const TrainerState& state() const { return state_; }
  const TrainConfig& config() const { return config_; }
  double lambda() const { return lambda_; }
  std::uint64_t seed() const { return seed_; }

 private:
  TrainConfig config_;
  double lambda_;
  const PreparedData* data_;
  std::uint64_t seed_;
  std::unique_ptr<model::Model> model_;
  std::unique_ptr<model::Model> best_;
  TrainerState state_;
  double wall_seconds_ = 0.0;
};

/// Trains to max_epochs and evaluates on the test part.
RunResult train(const PreparedData& data, const TrainConfig& config, model::ModelKind kind, double lambda,
                std::uint64_t seed, const EpochCallback& on_epoch = {});

/// Training order of an epoch: a seeded permutation of [0, n).
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch);

}  // namespace stgfn::training
