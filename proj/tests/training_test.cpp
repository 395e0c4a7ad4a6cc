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


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "stgfn/data/features.hpp"
#include "stgfn/data/synthetic.hpp"
#include "stgfn/error.hpp"
#include "stgfn/loss.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/training/checkpoint.hpp"
#include "stgfn/training/config.hpp"
#include "stgfn/training/experiment.hpp"
#include "stgfn/training/trainer.hpp"

namespace stgfn::training {
namespace {

namespace fs = std::filesystem;

TrainConfig tiny_config() {
  TrainConfig c;
  c.d_txt = 8;
  c.d_hidden = 8;
  c.heads = 2;
  c.max_epochs = 4;
  c.learning_rate = 1e-2;
  c.seeds = {1, 2};
  return c;
}

data::CorpusSplit tiny_split(std::size_t n = 60) {
  const auto corpus = data::generate_synthetic({.instances = n, .text_strength = 0.8, .graph_strength = 0.5, .seed = 4});
  return data::split_corpus(corpus.instances, {}, 42);
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("stgfn_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
}

TEST(Config, DefaultsAndRoundTrip) {
  const TrainConfig d;
  EXPECT_EQ(d.batch_size, 16u);
  EXPECT_EQ(d.learning_rate, 1e-4);
  EXPECT_EQ(d.weight_decay, 1e-4);
  EXPECT_EQ(d.max_epochs, 100u);
  EXPECT_EQ(d.patience, 5);
  EXPECT_EQ(d.factor, 0.1);
  EXPECT_EQ(d.lambda, 0.7);
  EXPECT_EQ(d.dropout, 0.3);
  EXPECT_EQ(d.d_hidden, 128u);
  EXPECT_EQ(d.heads, 2u);
  EXPECT_EQ(d.seq_len, 10u);
  EXPECT_EQ(d.d_txt, 768u);
  EXPECT_EQ(d.seeds, (std::vector<std::uint64_t>{42, 43, 44, 45, 46}));
  TrainConfig c = tiny_config();
  c.gate_mode = model::GateMode::kConvex;
  EXPECT_EQ(config_from_json(nlohmann::json::parse(to_json(c).dump())), c);
  EXPECT_EQ(config_from_json(nlohmann::json::object()), d);
}

TEST(Config, RejectsUnknownKeysBadTypesAndBadValues) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"learning_rat": 0.1})")), ParseError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"batch_size": "big"})")), ParseError);
  try {
    config_from_json(nlohmann::json::parse(R"({"batch_size": 0})"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("batch_size"), std::string::npos) << e.what();
  }
  TrainConfig c;
  c.heads = 3;
  EXPECT_THROW(validate(c), ContractError);
  c = TrainConfig{};
  c.seeds.clear();
  EXPECT_THROW(validate(c), ContractError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(Config, OverridesAndHash) {
  TrainConfig c;
  const std::string h0 = config_hash(c);
  EXPECT_EQ(h0.size(), 16u);
  EXPECT_EQ(config_hash(TrainConfig{}), h0);
  apply_override(c, "lambda", "0.25");
  apply_override(c, "seeds", "7,8,9");
  apply_override(c, "gate_mode", "convex");
  apply_override(c, "d_txt", "64");
  EXPECT_EQ(c.lambda, 0.25);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{7, 8, 9}));
  EXPECT_EQ(c.gate_mode, model::GateMode::kConvex);
  EXPECT_EQ(c.d_txt, 64u);
  EXPECT_NE(config_hash(c), h0);
  EXPECT_THROW(apply_override(c, "nope", "1"), ParseError);
  EXPECT_THROW(apply_override(c, "batch_size", "x"), ParseError);
  const auto m = model_config(c);
  EXPECT_EQ(m.embedder.d_txt, 64u);
  EXPECT_EQ(m.embedder.max_turns, 10u);
  EXPECT_EQ(m.gate_mode, model::GateMode::kConvex);
}

TEST(Trainer, OversampledTrainingIsBalanced) {
  const auto split = tiny_split(200);
  const auto data = prepare_data(split, tiny_config(), 3);
  const auto deals = std::count_if(data.train.begin(), data.train.end(), [](const auto& e) { return e.outcome == 1; });
  EXPECT_EQ(static_cast<std::size_t>(deals) * 2, data.train.size());
  EXPECT_EQ(data.validation.size(), split.validation.size());
  EXPECT_EQ(data.test.size(), split.test.size());
  TrainConfig off = tiny_config();
  off.oversample = false;
  EXPECT_EQ(prepare_data(split, off, 3).train.size(), split.train.size());
}

TEST(Trainer, OneEpochIsCeilOfBatches) {
  const auto corpus = data::generate_synthetic({.instances = 400, .graph_strength = 0.5, .seed = 8}).instances;
  data::CorpusSplit split;
  for (const auto& inst : corpus) {
    auto& part = inst.outcome == 1 ? split.train : split.validation;
    if (std::count_if(part.begin(), part.end(), [&](const auto& i) { return i.outcome == inst.outcome; }) < 80)
      part.push_back(inst);
  }
  for (std::size_t i = 0; i < 80; ++i) split.train.push_back(split.validation[i]);
  split.validation.resize(20);
  split.test = split.validation;
  ASSERT_EQ(split.train.size(), 160u);
  const auto data = prepare_data(split, tiny_config(), 1);
  ASSERT_EQ(data.train.size(), 160u);
  Trainer t(model::ModelKind::kStGfn, tiny_config(), 0.7, data, 1);
  t.run_epoch();
  EXPECT_EQ(t.state().optimizer.step, 10u);
  EXPECT_EQ(t.state().epoch, 1u);
}

TEST(Trainer, UtilityBiasStartsAtTrainingMeans) {
  const auto data = prepare_data(tiny_split(), tiny_config(), 1);
  const Trainer t(model::ModelKind::kStGfn, tiny_config(), 0.7, data, 1);
  double a = 0, b = 0;
  for (const auto& e : data.train) {
    a += e.utilities.a;
    b += e.utilities.b;
  }
  const Tensor& bias = t.model().parameters().get("head.utility.bias");
  EXPECT_DOUBLE_EQ(bias[0], a / static_cast<double>(data.train.size()));
  EXPECT_DOUBLE_EQ(bias[1], b / static_cast<double>(data.train.size()));
}

TEST(Trainer, FixedSeedRunsAreBitIdentical) {
  const auto data = prepare_data(tiny_split(), tiny_config(), 5);
  const RunResult a = train(data, tiny_config(), model::ModelKind::kStGfn, 0.7, 5);
  const RunResult b = train(data, tiny_config(), model::ModelKind::kStGfn, 0.7, 5);
  EXPECT_EQ(a.log, b.log);
  ASSERT_EQ(a.test_predictions.size(), b.test_predictions.size());
  for (std::size_t i = 0; i < a.test_predictions.size(); ++i) {
    EXPECT_EQ(a.test_predictions[i].probability, b.test_predictions[i].probability);
    EXPECT_EQ(a.test_predictions[i].utilities, b.test_predictions[i].utilities);
    EXPECT_EQ(a.traces[i].gates, b.traces[i].gates);
  }
  const RunResult c = train(data, tiny_config(), model::ModelKind::kStGfn, 0.7, 6);
  EXPECT_NE(a.log, c.log);
}

TEST(Trainer, LearningRateFollowsPlateauRule) {
  TrainConfig cfg = tiny_config();
  cfg.max_epochs = 25;
  cfg.patience = 2;
  cfg.learning_rate = 0.05;
  const auto data = prepare_data(tiny_split(), cfg, 2);
  const RunResult r = train(data, cfg, model::ModelKind::kStGfn, 0.7, 2);
  ASSERT_EQ(r.log.size(), 25u);
  PlateauScheduler s;
  s.patience = cfg.patience;
  s.factor = cfg.factor;
  double lr = cfg.learning_rate;
  std::size_t reductions = 0;
  for (const auto& e : r.log) {
    EXPECT_EQ(e.lr, lr) << "epoch " << e.epoch;
    reductions += scheduler_step(s, e.val_loss, lr) ? 1 : 0;
  }
  EXPECT_GT(reductions, 0u);
  const auto best = std::min_element(r.log.begin(), r.log.end(),
                                     [](const EpochLog& x, const EpochLog& y) { return x.val_loss < y.val_loss; });
  EXPECT_EQ(r.best_epoch, best->epoch);
}

TEST(Trainer, ZeroLambdaMatchesLossWithoutFairness) {
  const auto data = prepare_data(tiny_split(), tiny_config(), 1);
  std::vector<const model::EncodedInstance*> batch;
  std::vector<int> labels;
  Tensor target({8, 2});
  for (std::size_t i = 0; i < 8; ++i) {
    batch.push_back(&data.train[i]);
    labels.push_back(data.train[i].outcome);
    target.at(i, 0) = data.train[i].utilities.a;
    target.at(i, 1) = data.train[i].utilities.b;
  }
  auto grads = [&](bool with_fairness_term) {
    auto m = model::make_model(model::ModelKind::kStGfn, model_config(tiny_config()), data.vocab, 3);
    Tape tape;
    const auto out = m->forward(tape, batch, nullptr);
    const Var t = tape.constant(target);
    const Var total = with_fairness_term ? loss::composite_loss(out.probability, labels, out.utilities, t, 0.0).total
                                         : loss::outcome_loss(out.probability, labels) + loss::utility_loss(out.utilities, t);
    tape.backward(total);
    std::vector<double> g;
    for (const Tensor* p : m->parameters().pointers()) g.insert(g.end(), p->grad()->begin(), p->grad()->end());
    return g;
  };
  EXPECT_EQ(grads(true), grads(false));
}

TEST(Trainer, NonFiniteLossIsDivergence) {
  auto data = prepare_data(tiny_split(), tiny_config(), 1);
  data.train[3].utilities.a = std::numeric_limits<double>::infinity();
  Trainer t(model::ModelKind::kStGfn, tiny_config(), 0.7, data, 1);
  try {
    t.run_epoch();
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos) << e.what();
  }
}

TEST(Trainer, EpochOrderIsSeededPermutation) {
  const auto a = epoch_order(50, 1, 3);
  std::set<std::size_t> seen(a.begin(), a.end());
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_EQ(*seen.rbegin(), 49u);
  EXPECT_EQ(epoch_order(50, 1, 3), a);
  EXPECT_NE(epoch_order(50, 1, 4), a);
  EXPECT_NE(epoch_order(50, 2, 3), a);
}

TEST(Trainer, EpochLogJsonRoundTrip) {
  const EpochLog log{3, 1e-4, 0.5, 10.25, 0.125, 11.0, 12.5, 0.75};
  EXPECT_EQ(epoch_log_from_json(nlohmann::json::parse(to_json(log).dump())), log);
}

TEST(Checkpoint, ContinuationEqualsUninterruptedTraining) {
  TrainConfig cfg = tiny_config();
  cfg.max_epochs = 6;
  const auto data = prepare_data(tiny_split(), cfg, 9);
  Trainer full(model::ModelKind::kStGfn, cfg, 0.7, data, 9);
  full.run();

  Trainer first(model::ModelKind::kStGfn, cfg, 0.7, data, 9);
  for (int i = 0; i < 3; ++i) first.run_epoch();
  const fs::path path = temp_path("ckpt_continue.json");
  save_checkpoint(make_checkpoint(first, data), path);
  Trainer second = resume(load_checkpoint(path), data);
  fs::remove(path);
  EXPECT_EQ(second.state().epoch, 3u);
  second.run();

  EXPECT_EQ(second.state().log, full.state().log);
  EXPECT_TRUE(second.model().parameters().same_values(full.model().parameters()));
  EXPECT_TRUE(second.best_model().parameters().same_values(full.best_model().parameters()));
  EXPECT_EQ(second.state().optimizer.step, full.state().optimizer.step);
  EXPECT_EQ(second.state().optimizer.first_moment, full.state().optimizer.first_moment);
  EXPECT_EQ(second.result().test.id, full.result().test.id);
}

TEST(Checkpoint, RoundTripPreservesEverything) {
  const auto data = prepare_data(tiny_split(), tiny_config(), 1);
  Trainer t(model::ModelKind::kLogistic, tiny_config(), 0.0, data, 1);
  t.run_epoch();
  const Checkpoint c = make_checkpoint(t, data);
  const fs::path path = temp_path("ckpt_roundtrip.json");
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  fs::remove(path);
  EXPECT_EQ(back.config, c.config);
  EXPECT_EQ(back.config_hash, config_hash(c.config));
  EXPECT_EQ(back.kind, model::ModelKind::kLogistic);
  EXPECT_EQ(back.vocab, c.vocab);
  EXPECT_EQ(back.stats, c.stats);
  EXPECT_TRUE(back.params.same_values(c.params));
  EXPECT_TRUE(back.best_params.same_values(c.best_params));
  EXPECT_EQ(back.state.scheduler.best, c.state.scheduler.best);
  EXPECT_EQ(back.state.optimizer.second_moment, c.state.optimizer.second_moment);
  const auto restored = restore_model(back);
  EXPECT_TRUE(restored->parameters().same_values(t.best_model().parameters()));
}

TEST(Checkpoint, CorruptionIsRejected) {
  const auto data = prepare_data(tiny_split(), tiny_config(), 1);
  Trainer t(model::ModelKind::kStGfn, tiny_config(), 0.7, data, 1);
  const fs::path path = temp_path("ckpt_corrupt.json");
  save_checkpoint(make_checkpoint(t, data), path);
  std::string text;
  {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto write = [&](const std::string& s) {
    std::ofstream out(path, std::ios::trunc);
    out << s;
  };
  write(text.substr(0, text.size() / 2));
  EXPECT_THROW(load_checkpoint(path), ParseError);

  auto doc = nlohmann::json::parse(text);
  doc["version"] = 99;
  write(doc.dump());
  EXPECT_THROW(load_checkpoint(path), IncompatibleError);

  doc = nlohmann::json::parse(text);
  doc["config"]["batch_size"] = 17;
  write(doc.dump());
  EXPECT_THROW(load_checkpoint(path), IncompatibleError);

  doc = nlohmann::json::parse(text);
  doc["params"].erase(doc["params"].begin());
  write(doc.dump());
  EXPECT_ANY_THROW(load_checkpoint(path));

  fs::remove(path);
  EXPECT_THROW(load_checkpoint(path), IoError);
}

TEST(Checkpoint, HashMismatchQuotesBothHashes) {
  const auto data = prepare_data(tiny_split(), tiny_config(), 1);
  Trainer t(model::ModelKind::kStGfn, tiny_config(), 0.7, data, 1);
  const Checkpoint c = make_checkpoint(t, data);
  TrainConfig other = tiny_config();
  other.lambda = 0.3;
  try {
    require_compatible(c, other);
    FAIL() << "expected IncompatibleError";
  } catch (const IncompatibleError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(config_hash(tiny_config())), std::string::npos) << msg;
    EXPECT_NE(msg.find(config_hash(other)), std::string::npos) << msg;
  }
  EXPECT_NO_THROW(require_compatible(c, tiny_config()));
  const auto other_data = prepare_data(tiny_split(90), tiny_config(), 1);
  EXPECT_THROW(resume(c, other_data), IncompatibleError);
}

TEST(Experiment, ArmsAndRuns) {
  TrainConfig cfg = tiny_config();
  cfg.max_epochs = 2;
  cfg.lambda = 0.5;
  EXPECT_EQ(arm_by_name("fair", cfg).lambda, 0.5);
  EXPECT_EQ(arm_by_name("baseline", cfg).kind, model::ModelKind::kLogistic);
  EXPECT_EQ(arm_by_name("nofair", cfg).lambda, 0.0);
  EXPECT_THROW(arm_by_name("other", cfg), ContractError);
  const auto arms = default_arms(cfg);
  ASSERT_EQ(arms.size(), 3u);
  std::size_t callbacks = 0;
  const auto result = run_experiment(tiny_split(), cfg, arms, [&](const ArmSpec&, const RunResult&) { ++callbacks; });
  EXPECT_EQ(callbacks, 6u);
  ASSERT_EQ(result.runs.size(), 3u);
  EXPECT_EQ(result.runs[1][1].seed, 2u);
  ASSERT_EQ(result.report.arms.size(), 3u);
  EXPECT_FALSE(result.report.arms[0].gates.has_value());
  EXPECT_TRUE(result.report.arms[2].gates.has_value());
  EXPECT_EQ(result.report.arms[2].seeds, 2u);
}

}  // namespace
}  // namespace stgfn::training
