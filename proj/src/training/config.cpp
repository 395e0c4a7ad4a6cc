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

#include "stgfn/training/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stgfn/error.hpp"

namespace stgfn::training {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("config field '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("config field '" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t comma = text.find(',', begin);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_number<std::uint64_t>("seeds", text.substr(begin, end - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

std::string scalar_text(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

void validate(const TrainConfig& c) {
  auto fail = [](const std::string& msg) { throw ContractError("config: " + msg); };
  if (c.batch_size == 0) fail("batch_size must be positive");
  if (!(c.learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(c.weight_decay >= 0.0)) fail("weight_decay must be non-negative");
  if (c.max_epochs == 0) fail("max_epochs must be positive");
  if (c.patience <= 0) fail("patience must be positive");
  if (!(c.factor > 0.0 && c.factor < 1.0)) fail("factor must be in (0, 1)");
  if (!(c.lambda >= 0.0)) fail("lambda must be non-negative");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) fail("dropout must be in [0, 1)");
  if (c.d_hidden == 0) fail("d_hidden must be positive");
  if (c.heads == 0 || c.d_hidden % c.heads != 0) fail("d_hidden must be a positive multiple of heads");
  if (c.seq_len == 0) fail("seq_len must be positive");
  if (c.d_txt == 0) fail("d_txt must be positive");
  if (c.max_tokens == 0) fail("max_tokens must be positive");
  if (c.seeds.empty()) fail("seeds must not be empty");
  if (!(c.outcome_weight >= 0.0) || !(c.utility_weight >= 0.0)) fail("loss weights must be non-negative");
}

nlohmann::ordered_json to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["weight_decay"] = c.weight_decay;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["factor"] = c.factor;
  j["lambda"] = c.lambda;
  j["dropout"] = c.dropout;
  j["d_hidden"] = c.d_hidden;
  j["heads"] = c.heads;
  j["seq_len"] = c.seq_len;
  j["d_txt"] = c.d_txt;
  j["max_tokens"] = c.max_tokens;
  j["seeds"] = c.seeds;
  j["gate_mode"] = std::string(model::gate_mode_name(c.gate_mode));
  j["embedder"] = std::string(model::embedder_mode_name(c.embedder));
  j["outcome_weight"] = c.outcome_weight;
  j["utility_weight"] = c.utility_weight;
  j["split_seed"] = c.split_seed;
  j["oversample"] = c.oversample;
  return j;
}

TrainConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  TrainConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "seeds") {
      if (!value.is_array()) throw ParseError("config field 'seeds' must be an array");
      c.seeds.clear();
      for (const auto& s : value) {
        if (!s.is_number_unsigned()) throw ParseError("config field 'seeds' must hold non-negative integers");
        c.seeds.push_back(s.get<std::uint64_t>());
      }
      continue;
    }
    if (value.is_object() || value.is_array() || value.is_null())
      throw ParseError("config field '" + key + "' must be a scalar");
    apply_override(c, key, scalar_text(value));
  }
  try {
    validate(c);
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
  return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void apply_override(TrainConfig& c, std::string_view key, std::string_view value) {
  try {
    if (key == "batch_size") c.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "learning_rate") c.learning_rate = parse_number<double>(key, value);
    else if (key == "weight_decay") c.weight_decay = parse_number<double>(key, value);
    else if (key == "max_epochs") c.max_epochs = parse_number<std::size_t>(key, value);
    else if (key == "patience") c.patience = parse_number<int>(key, value);
    else if (key == "factor") c.factor = parse_number<double>(key, value);
    else if (key == "lambda") c.lambda = parse_number<double>(key, value);
    else if (key == "dropout") c.dropout = parse_number<double>(key, value);
    else if (key == "d_hidden") c.d_hidden = parse_number<std::size_t>(key, value);
    else if (key == "heads") c.heads = parse_number<std::size_t>(key, value);
    else if (key == "seq_len") c.seq_len = parse_number<std::size_t>(key, value);
    else if (key == "d_txt") c.d_txt = parse_number<std::size_t>(key, value);
    else if (key == "max_tokens") c.max_tokens = parse_number<std::size_t>(key, value);
    else if (key == "seeds") c.seeds = parse_seeds(value);
    else if (key == "gate_mode") c.gate_mode = model::parse_gate_mode(value);
    else if (key == "embedder") c.embedder = model::parse_embedder_mode(value);
    else if (key == "outcome_weight") c.outcome_weight = parse_number<double>(key, value);
    else if (key == "utility_weight") c.utility_weight = parse_number<double>(key, value);
    else if (key == "split_seed") c.split_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "oversample") c.oversample = parse_bool(key, value);
    else throw ParseError("unknown config field '" + std::string(key) + "'");
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
}

std::string config_hash(const TrainConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

model::ModelConfig model_config(const TrainConfig& c) {
  model::ModelConfig m;
  m.embedder.mode = c.embedder;
  m.embedder.d_txt = c.d_txt;
  m.embedder.max_tokens = c.max_tokens;
  m.embedder.max_turns = c.seq_len;
  m.hidden = c.d_hidden;
  m.heads = c.heads;
  m.gate_mode = c.gate_mode;
  m.dropout = c.dropout;
  return m;
}

loss::TermWeights term_weights(const TrainConfig& c) { return {c.outcome_weight, c.utility_weight}; }

}  // namespace stgfn::training
