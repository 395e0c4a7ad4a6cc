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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stgfn::data {

inline constexpr std::size_t kNodeFeatureDim = 6;
inline constexpr std::size_t kPriorityCount = 3;

enum class Speaker { kA, kB };

/// Social value orientation.
enum class Svo { kProsocial, kIndividualistic, kCompetitive, kUnknown };

std::string_view svo_name(Svo svo);
/// Accepts prosocial, individualistic/proself, competitive; anything else is unknown.
Svo parse_svo(std::string_view text);

struct Turn {
  Speaker speaker = Speaker::kA;
  std::string text;
  std::vector<std::string> tokens;
  /// Optional precomputed turn vector (pretrained-vector passthrough mode).
  std::vector<double> embedding;

  bool operator==(const Turn&) const = default;
};

struct AgentProfile {
  double batna = 0.0;
  double budget = 0.0;
  int role = 0;
  Svo svo = Svo::kUnknown;
  std::array<double, kPriorityCount> priorities{};

  bool operator==(const AgentProfile&) const = default;
};

struct UtilityPair {
  double a = 0.0;
  double b = 0.0;

  bool operator==(const UtilityPair&) const = default;
};

struct NegotiationInstance {
  std::string id;
  std::vector<Turn> turns;
  AgentProfile agent_a;
  AgentProfile agent_b;
  int outcome = 0;
  /// Missing only for malformed deal records; no-deal records carry the
  /// agents' BATNA values.
  std::optional<UtilityPair> utilities;

  bool operator==(const NegotiationInstance&) const = default;
};

struct Edge {
  int src = 0;
  int dst = 0;
  double trust = 1.0;
};

/// Two agent nodes (0 = A, 1 = B) with directed trust-weighted edges.
struct StrategicGraph {
  std::array<std::array<double, kNodeFeatureDim>, 2> features{};
  std::vector<Edge> edges;

  /// Trust on edge src -> dst; throws ContractError if the edge is absent.
  double trust(int src, int dst) const;
};

/// Lowercases and splits on non-alphanumeric characters, dropping empties.
std::vector<std::string> tokenize(std::string_view text);

/// Problems that make an instance unusable for training or evaluation.
struct ValidationIssue {
  std::string session_id;
  std::string message;
};

std::vector<ValidationIssue> validate(const std::vector<NegotiationInstance>& instances);

/// Throws ContractError listing every offending session id.
void require_valid(const std::vector<NegotiationInstance>& instances);

}  // namespace stgfn::data
