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

#include <random>
#include <string_view>

#include "stgfn/model/parameters.hpp"

namespace stgfn::model {

/// literal: fused = z * relu(W [txt ; graph] + b).
/// convex:  fused = z * relu(W_txt txt) + (1 - z) * relu(W_graph graph).
enum class GateMode { kLiteral, kConvex };

std::string_view gate_mode_name(GateMode mode);
GateMode parse_gate_mode(std::string_view text);

struct FusionConfig {
  std::size_t text_dim = 768;
  std::size_t graph_dim = 256;
  std::size_t hidden = 128;
  GateMode mode = GateMode::kLiteral;
};

/// Adds fusion.gate.{weight,bias} and either fusion.proj.{weight,bias}
/// (literal) or fusion.proj_txt.weight and fusion.proj_graph.weight (convex).
void add_fusion_parameters(ParameterSet& params, const FusionConfig& config, std::mt19937_64& rng);

/// Per-dialogue pieces that do not change across turns.
struct FusionContext {
  Var graph;
  Var gate_graph_term;
  /// convex only: relu(W_graph graph).
  Var graph_branch;
  Var gate_weight_txt;
  Var gate_bias;
  Var proj_weight_txt;
  Var proj_graph_term;
  Var proj_bias;
};

FusionContext fusion_context(const Binder& bind, const FusionConfig& config, Var graph);

struct FusionStep {
  /// [batch x hidden]
  Var fused;
  /// [batch x 1], strictly inside (0, 1).
  Var gate;
};

/// One turn for a batch: text is [batch x text_dim].
FusionStep fuse(const FusionContext& ctx, const FusionConfig& config, Var text);

}  // namespace stgfn::model
