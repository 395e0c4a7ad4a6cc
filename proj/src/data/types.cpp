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

#include "stgfn/data/types.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "stgfn/error.hpp"

namespace stgfn::data {

std::string_view svo_name(Svo svo) {
  switch (svo) {
    case Svo::kProsocial:
      return "prosocial";
    case Svo::kIndividualistic:
      return "individualistic";
    case Svo::kCompetitive:
      return "competitive";
    case Svo::kUnknown:
      return "unknown";
  }
  return "unknown";
}

Svo parse_svo(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "prosocial") return Svo::kProsocial;
  if (s == "individualistic" || s == "proself") return Svo::kIndividualistic;
  if (s == "competitive") return Svo::kCompetitive;
  return Svo::kUnknown;
}

double StrategicGraph::trust(int src, int dst) const {
  for (const Edge& e : edges) {
    if (e.src == src && e.dst == dst) return e.trust;
  }
  throw ContractError("strategic graph has no edge " + std::to_string(src) + " -> " + std::to_string(dst));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

bool profile_finite(const AgentProfile& p) {
  if (!std::isfinite(p.batna) || !std::isfinite(p.budget)) return false;
  for (double w : p.priorities)
    if (!std::isfinite(w)) return false;
  return true;
}

}  // namespace

std::vector<ValidationIssue> validate(const std::vector<NegotiationInstance>& instances) {
  std::vector<ValidationIssue> issues;
  for (const auto& inst : instances) {
    if (inst.turns.empty()) issues.push_back({inst.id, "dialogue has no turns"});
    if (inst.outcome != 0 && inst.outcome != 1) issues.push_back({inst.id, "outcome must be 0 or 1"});
    if (!inst.utilities) {
      issues.push_back({inst.id, "deal recorded without utilities"});
    } else if (!std::isfinite(inst.utilities->a) || !std::isfinite(inst.utilities->b)) {
      issues.push_back({inst.id, "utilities are not finite"});
    }
    if (!profile_finite(inst.agent_a) || !profile_finite(inst.agent_b)) {
      issues.push_back({inst.id, "agent profile has non-finite values"});
    }
  }
  return issues;
}

void require_valid(const std::vector<NegotiationInstance>& instances) {
  const auto issues = validate(instances);
  if (issues.empty()) return;
  std::ostringstream msg;
  msg << issues.size() << " invalid instance(s):";
  for (const auto& issue : issues) msg << "\n  " << issue.session_id << ": " << issue.message;
  throw ContractError(msg.str());
}

}  // namespace stgfn::data
