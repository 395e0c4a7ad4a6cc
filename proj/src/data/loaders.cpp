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

#include "stgfn/data/loaders.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stgfn/error.hpp"

namespace stgfn::data {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 3> kCasinoIssues{"food", "water", "firewood"};
constexpr std::array<std::string_view, 3> kDondItems{"books", "hats", "balls"};

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// A malformed record; reported with its index by the caller.
struct RecordError {
  std::string message;
};

[[noreturn]] void bad(const std::string& message) { throw RecordError{message}; }

double number_field(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) bad(std::string("field '") + key + "' must be a number");
  return obj[key].get<double>();
}

// Priority keys in canonical order when they match a known issue set,
// otherwise document order.
std::vector<std::string> ordered_keys(const Json& priorities, CorpusFormat format) {
  std::vector<std::string> keys;
  for (auto it = priorities.begin(); it != priorities.end(); ++it) keys.push_back(it.key());
  auto matches = [&](const std::array<std::string_view, 3>& canon) {
    if (keys.size() != canon.size()) return false;
    return std::all_of(canon.begin(), canon.end(), [&](std::string_view c) {
      return std::any_of(keys.begin(), keys.end(), [&](const std::string& k) { return lower(k) == c; });
    });
  };
  const auto& primary = format == CorpusFormat::kCasino ? kCasinoIssues : kDondItems;
  const auto& secondary = format == CorpusFormat::kCasino ? kDondItems : kCasinoIssues;
  for (const auto* canon : {&primary, &secondary}) {
    if (matches(*canon)) {
      std::vector<std::string> ordered;
      for (std::string_view c : *canon) {
        for (const auto& k : keys)
          if (lower(k) == c) ordered.push_back(k);
      }
      return ordered;
    }
  }
  return keys;
}

double priority_weight(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string level = lower(value.get<std::string>());
    if (level == "high") return 3.0;
    if (level == "medium") return 2.0;
    if (level == "low") return 1.0;
    bad("unknown priority level '" + value.get<std::string>() + "'");
  }
  bad("priority must be a level string or a number");
}

struct ParsedAgent {
  AgentProfile profile;
  double self_value = 0.0;  // sum of valuation x count (or valuation if no counts)
  std::vector<std::string> item_keys;
};

ParsedAgent parse_agent(const Json& obj, CorpusFormat format, const Json* counts) {
  if (!obj.is_object()) bad("agent entry must be an object");
  ParsedAgent out;
  AgentProfile& p = out.profile;

  if (!obj.contains("priorities") || !obj["priorities"].is_object()) bad("agent priorities missing");
  const Json& pri = obj["priorities"];
  if (pri.size() != kPriorityCount) {
    bad("expected " + std::to_string(kPriorityCount) + " priorities, got " + std::to_string(pri.size()));
  }
  out.item_keys = ordered_keys(pri, format);
  for (std::size_t i = 0; i < kPriorityCount; ++i) {
    p.priorities[i] = priority_weight(pri[out.item_keys[i]]);
    double count = 1.0;
    if (counts && counts->contains(out.item_keys[i]) && (*counts)[out.item_keys[i]].is_number()) {
      count = (*counts)[out.item_keys[i]].get<double>();
    }
    out.self_value += p.priorities[i] * count;
  }

  if (obj.contains("batna") && !obj["batna"].is_null()) {
    p.batna = number_field(obj, "batna");
  } else if (format == CorpusFormat::kCasino) {
    bad("field 'batna' must be a number");
  } else {
    p.batna = 0.0;
  }

  if (obj.contains("budget") && !obj["budget"].is_null()) {
    p.budget = number_field(obj, "budget");
  } else {
    p.budget = out.self_value;
  }

  if (obj.contains("role") && !obj["role"].is_null()) {
    const Json& r = obj["role"];
    if (r.is_number()) {
      p.role = r.get<double>() != 0.0 ? 1 : 0;
    } else if (r.is_string()) {
      p.role = role_flag(r.get<std::string>());
    } else if (r.is_boolean()) {
      p.role = r.get<bool>() ? 1 : 0;
    } else {
      bad("role must be a string or number");
    }
  }

  p.svo = Svo::kUnknown;
  if (obj.contains("svo") && obj["svo"].is_string()) p.svo = parse_svo(obj["svo"].get<std::string>());
  return out;
}

bool has_no_deal_marker(const std::vector<Turn>& turns) {
  for (const auto& t : turns) {
    const std::string s = lower(t.text);
    for (const char* marker : {"<no_agreement>", "<disagree>", "<disconnect>", "<walkaway>"}) {
      if (s.find(marker) != std::string::npos) return true;
    }
  }
  return false;
}

NegotiationInstance parse_record(const Json& rec, CorpusFormat format) {
  if (!rec.is_object()) bad("record must be an object");
  NegotiationInstance inst;
  if (!rec.contains("id")) bad("field 'id' missing");
  inst.id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();

  if (!rec.contains("turns") || !rec["turns"].is_array()) bad("field 'turns' must be an array");
  for (const Json& t : rec["turns"]) {
    if (!t.is_object()) bad("turn must be an object");
    Turn turn;
    const std::string speaker = t.contains("speaker") && t["speaker"].is_string() ? t["speaker"].get<std::string>() : "";
    if (speaker == "A" || speaker == "a") {
      turn.speaker = Speaker::kA;
    } else if (speaker == "B" || speaker == "b") {
      turn.speaker = Speaker::kB;
    } else {
      bad("turn speaker must be 'A' or 'B'");
    }
    if (!t.contains("text") || !t["text"].is_string()) bad("turn text must be a string");
    turn.text = t["text"].get<std::string>();
    turn.tokens = tokenize(turn.text);
    if (t.contains("embedding") && !t["embedding"].is_null()) {
      if (!t["embedding"].is_array()) bad("turn embedding must be an array");
      for (const Json& v : t["embedding"]) {
        if (!v.is_number()) bad("turn embedding must hold numbers");
        turn.embedding.push_back(v.get<double>());
      }
    }
    inst.turns.push_back(std::move(turn));
  }
  if (inst.turns.empty()) bad("dialogue has no turns");

  if (!rec.contains("agents") || !rec["agents"].is_object()) bad("field 'agents' missing");
  const Json& agents = rec["agents"];
  if (!agents.contains("A") || !agents.contains("B")) bad("agents A and B are both required");
  const Json* counts = rec.contains("counts") && rec["counts"].is_object() ? &rec["counts"] : nullptr;
  const ParsedAgent a = parse_agent(agents["A"], format, counts);
  const ParsedAgent b = parse_agent(agents["B"], format, counts);
  inst.agent_a = a.profile;
  inst.agent_b = b.profile;

  const bool has_allocation = rec.contains("allocation") && rec["allocation"].is_object();
  if (rec.contains("outcome") && !rec["outcome"].is_null()) {
    const Json& o = rec["outcome"];
    if (o.is_boolean()) {
      inst.outcome = o.get<bool>() ? 1 : 0;
    } else if (o.is_number_integer() && (o.get<int>() == 0 || o.get<int>() == 1)) {
      inst.outcome = o.get<int>();
    } else {
      bad("outcome must be 0 or 1");
    }
  } else if (format == CorpusFormat::kDealOrNoDeal) {
    inst.outcome = (has_allocation && !has_no_deal_marker(inst.turns)) ? 1 : 0;
  } else {
    bad("field 'outcome' missing");
  }

  if (rec.contains("utilities") && !rec["utilities"].is_null()) {
    const Json& u = rec["utilities"];
    if (!u.is_object()) bad("utilities must be an object");
    inst.utilities = UtilityPair{number_field(u, "A"), number_field(u, "B")};
  } else if (inst.outcome == 1 && has_allocation) {
    const Json& alloc = rec["allocation"];
    auto value_of = [&](const char* who, const ParsedAgent& agent) {
      if (!alloc.contains(who) || !alloc[who].is_object()) bad(std::string("allocation for ") + who + " missing");
      double total = 0.0;
      for (std::size_t i = 0; i < kPriorityCount; ++i) {
        const std::string& key = agent.item_keys[i];
        if (alloc[who].contains(key)) {
          if (!alloc[who][key].is_number()) bad("allocation counts must be numbers");
          total += agent.profile.priorities[i] * alloc[who][key].get<double>();
        }
      }
      return total;
    };
    inst.utilities = UtilityPair{value_of("A", a), value_of("B", b)};
  } else if (inst.outcome == 0) {
    inst.utilities = UtilityPair{inst.agent_a.batna, inst.agent_b.batna};
  }
  return inst;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  const std::string s = lower(name);
  if (s == "casino") return CorpusFormat::kCasino;
  if (s == "dealornodeal" || s == "dond") return CorpusFormat::kDealOrNoDeal;
  throw ContractError("unknown corpus format '" + std::string(name) + "' (expected casino|dealornodeal)");
}

int role_flag(std::string_view role) {
  const std::string s = lower(role);
  if (s == "camp manager" || s == "buyer" || s == "1" || s == "true") return 1;
  return 0;
}

LoadResult parse_corpus(const std::string& json_text, CorpusFormat format, LoadOptions options) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("corpus is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("corpus must be a JSON array of dialogue objects");
  LoadResult result;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      result.instances.push_back(parse_record(doc[i], format));
    } catch (const RecordError& e) {
      if (options.strict) throw ParseError("record " + std::to_string(i) + ": " + e.message);
      result.skipped += 1;
      result.warnings.push_back("record " + std::to_string(i) + " skipped: " + e.message);
    } catch (const nlohmann::json::exception& e) {
      if (options.strict) throw ParseError("record " + std::to_string(i) + ": " + e.what());
      result.skipped += 1;
      result.warnings.push_back("record " + std::to_string(i) + " skipped: " + e.what());
    }
  }
  return result;
}

LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format, LoadOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return parse_corpus(buf.str(), format, options);
}

LoadResult load_casino_like(const std::filesystem::path& path, LoadOptions options) {
  return load_corpus(path, CorpusFormat::kCasino, options);
}

LoadResult load_dealornodeal_like(const std::filesystem::path& path, LoadOptions options) {
  return load_corpus(path, CorpusFormat::kDealOrNoDeal, options);
}

std::string corpus_to_json(const std::vector<NegotiationInstance>& instances) {
  Json doc = Json::array();
  for (const auto& inst : instances) {
    Json rec;
    rec["id"] = inst.id;
    Json turns = Json::array();
    for (const auto& t : inst.turns) {
      Json jt;
      jt["speaker"] = t.speaker == Speaker::kA ? "A" : "B";
      jt["text"] = t.text;
      if (!t.embedding.empty()) jt["embedding"] = t.embedding;
      turns.push_back(std::move(jt));
    }
    rec["turns"] = std::move(turns);
    auto agent = [](const AgentProfile& p) {
      Json j;
      j["batna"] = p.batna;
      j["budget"] = p.budget;
      j["role"] = p.role;
      j["svo"] = std::string(svo_name(p.svo));
      Json pri;
      for (std::size_t i = 0; i < kPriorityCount; ++i) pri["issue" + std::to_string(i + 1)] = p.priorities[i];
      j["priorities"] = std::move(pri);
      return j;
    };
    rec["agents"]["A"] = agent(inst.agent_a);
    rec["agents"]["B"] = agent(inst.agent_b);
    rec["outcome"] = inst.outcome;
    if (inst.utilities) {
      rec["utilities"] = Json{{"A", inst.utilities->a}, {"B", inst.utilities->b}};
    } else {
      rec["utilities"] = nullptr;
    }
    doc.push_back(std::move(rec));
  }
  return doc.dump(1);
}

void save_corpus(const std::filesystem::path& path, const std::vector<NegotiationInstance>& instances) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file '" + path.string() + "'");
  out << corpus_to_json(instances) << '\n';
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace stgfn::data
