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

#include "stgfn/training/checkpoint.hpp"

#include <cmath>
#include <fstream>

#include "stgfn/error.hpp"

namespace stgfn::training {

namespace {

using Json = nlohmann::ordered_json;

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double finite_or_inf(const nlohmann::json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

Json params_json(const model::ParameterSet& params) {
  Json out = Json::object();
  for (const auto& [name, t] : params.tensors()) out[name] = {{"shape", t.shape()}, {"values", t.storage()}};
  return out;
}

model::ParameterSet params_from_json(const nlohmann::json& j) {
  model::ParameterSet out;
  for (const auto& [name, entry] : j.items()) {
    Tensor& t = out.add(name, entry.at("shape").get<Shape>());
    auto values = entry.at("values").get<std::vector<double>>();
    if (values.size() != t.size()) throw ParseError("parameter " + name + ": value count does not match its shape");
    t.storage() = std::move(values);
  }
  return out;
}

Json state_json(const TrainerState& s) {
  Json log = Json::array();
  for (const auto& l : s.log) log.push_back(to_json(l));
  return {{"epoch", s.epoch},
          {"optimizer",
           {{"lr", s.optimizer.lr},
            {"weight_decay", s.optimizer.weight_decay},
            {"beta1", s.optimizer.beta1},
            {"beta2", s.optimizer.beta2},
            {"eps", s.optimizer.eps},
            {"step", s.optimizer.step},
            {"first_moment", s.optimizer.first_moment},
            {"second_moment", s.optimizer.second_moment}}},
          {"scheduler",
           {{"best", finite_or_null(s.scheduler.best)},
            {"bad_epochs", s.scheduler.bad_epochs},
            {"patience", s.scheduler.patience},
            {"factor", s.scheduler.factor},
            {"min_delta", s.scheduler.min_delta},
            {"min_lr", s.scheduler.min_lr}}},
          {"best_val", finite_or_null(s.best_val)},
          {"best_epoch", s.best_epoch},
          {"log", std::move(log)}};
}

TrainerState state_from_json(const nlohmann::json& j) {
  TrainerState s;
  s.epoch = j.at("epoch").get<std::size_t>();
  const auto& o = j.at("optimizer");
  s.optimizer.lr = o.at("lr").get<double>();
  s.optimizer.weight_decay = o.at("weight_decay").get<double>();
  s.optimizer.beta1 = o.at("beta1").get<double>();
  s.optimizer.beta2 = o.at("beta2").get<double>();
  s.optimizer.eps = o.at("eps").get<double>();
  s.optimizer.step = o.at("step").get<std::uint64_t>();
  s.optimizer.first_moment = o.at("first_moment").get<std::vector<std::vector<double>>>();
  s.optimizer.second_moment = o.at("second_moment").get<std::vector<std::vector<double>>>();
  const auto& sc = j.at("scheduler");
  s.scheduler.best = finite_or_inf(sc.at("best"));
  s.scheduler.bad_epochs = sc.at("bad_epochs").get<int>();
  s.scheduler.patience = sc.at("patience").get<int>();
  s.scheduler.factor = sc.at("factor").get<double>();
  s.scheduler.min_delta = sc.at("min_delta").get<double>();
  s.scheduler.min_lr = sc.at("min_lr").get<double>();
  s.best_val = finite_or_inf(j.at("best_val"));
  s.best_epoch = j.at("best_epoch").get<std::size_t>();
  for (const auto& l : j.at("log")) s.log.push_back(epoch_log_from_json(l));
  return s;
}

std::unique_ptr<model::Model> model_with(const Checkpoint& c, const model::ParameterSet& values) {
  auto m = model::make_model(c.kind, model_config(c.config), c.vocab, c.seed);
  if (!m->parameters().same_layout(values))
    throw IncompatibleError("checkpoint parameters do not match the model built from its config");
  m->parameters().copy_values_from(values);
  return m;
}

}  // namespace

Checkpoint make_checkpoint(const Trainer& trainer, const PreparedData& data) {
  Checkpoint c;
  c.config = trainer.config();
  c.config_hash = config_hash(c.config);
  c.kind = trainer.model().kind();
  c.lambda = trainer.lambda();
  c.seed = trainer.seed();
  c.vocab = data.vocab;
  c.stats = data.stats;
  c.params = trainer.model().parameters();
  c.best_params = trainer.best_model().parameters();
  c.state = trainer.state();
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  Json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["config"] = to_json(c.config);
  j["config_hash"] = c.config_hash;
  j["model_kind"] = std::string(model::model_kind_name(c.kind));
  j["gate_mode"] = std::string(model::gate_mode_name(c.config.gate_mode));
  j["lambda"] = c.lambda;
  j["seed"] = c.seed;
  j["vocab"] = c.vocab.tokens();
  j["corpus_stats"] = {{"batna_min", c.stats.batna_min},
                       {"batna_max", c.stats.batna_max},
                       {"budget_min", c.stats.budget_min},
                       {"budget_max", c.stats.budget_max}};
  j["state"] = state_json(c.state);
  j["params"] = params_json(c.params);
  j["best_params"] = params_json(c.best_params);

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out << j.dump() << '\n';
    if (!out) throw IoError("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != kCheckpointFormat)
    throw IncompatibleError("checkpoint " + path.string() + " has an unknown format");
  const int version = j.value("version", -1);
  if (version != kCheckpointVersion)
    throw IncompatibleError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kCheckpointVersion) + ")");
  Checkpoint c;
  try {
    c.config = config_from_json(j.at("config"));
    c.config_hash = j.at("config_hash").get<std::string>();
    c.kind = model::parse_model_kind(j.at("model_kind").get<std::string>());
    c.lambda = j.at("lambda").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    auto tokens = j.at("vocab").get<std::vector<std::string>>();
    if (tokens.empty() || tokens.front() != model::Vocabulary::kUnknownToken)
      throw ParseError("vocabulary must start with the unknown token");
    c.vocab = model::Vocabulary(std::vector<std::string>(tokens.begin() + 1, tokens.end()));
    const auto& st = j.at("corpus_stats");
    c.stats = {st.at("batna_min").get<double>(), st.at("batna_max").get<double>(), st.at("budget_min").get<double>(),
               st.at("budget_max").get<double>()};
    c.state = state_from_json(j.at("state"));
    c.params = params_from_json(j.at("params"));
    c.best_params = params_from_json(j.at("best_params"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint " + path.string() + ": " + e.what());
  } catch (const ContractError& e) {
    throw ParseError("checkpoint " + path.string() + ": " + e.what());
  }
  const std::string recomputed = config_hash(c.config);
  if (recomputed != c.config_hash)
    throw IncompatibleError("checkpoint config hash " + c.config_hash + " does not match its config (" + recomputed +
                            ")");
  if (!c.params.same_layout(c.best_params)) throw ParseError("checkpoint parameter sets differ in layout");
  return c;
}

void require_compatible(const Checkpoint& checkpoint, const TrainConfig& config) {
  const std::string h = config_hash(config);
  if (h != checkpoint.config_hash)
    throw IncompatibleError("config hash mismatch: checkpoint " + checkpoint.config_hash + ", requested " + h);
}

std::unique_ptr<model::Model> restore_model(const Checkpoint& checkpoint, bool best) {
  return model_with(checkpoint, best ? checkpoint.best_params : checkpoint.params);
}

Trainer resume(const Checkpoint& c, const PreparedData& data) {
  if (!(c.vocab == data.vocab)) throw IncompatibleError("data vocabulary differs from the checkpoint's");
  if (!(c.stats == data.stats)) throw IncompatibleError("data normalisation differs from the checkpoint's");
  return Trainer(model_with(c, c.params), model_with(c, c.best_params), c.state, c.config, c.lambda, data, c.seed);
}

}  // namespace stgfn::training
