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
#include <random>
#include <span>
#include <vector>

#include "stgfn/data/types.hpp"
#include "stgfn/model/parameters.hpp"

namespace stgfn::model {

struct GatConfig {
  std::size_t node_dim = data::kNodeFeatureDim;
  std::size_t hidden = 128;
  std::size_t heads = 2;
  double slope = 0.2;
  double trust_eps = 1e-6;

  std::size_t head_dim() const { return hidden / heads; }
};

/// Throws ContractError unless hidden is a positive multiple of heads.
void check_gat_config(const GatConfig& config);

/// Adds gat.head<h>.{weight,attn_src,attn_dst}. The attention vector of a
/// head is [attn_src ; attn_dst].
void add_gat_parameters(ParameterSet& params, const GatConfig& config, std::mt19937_64& rng);

/// attention[h][i][j]: weight node i puts on node j under head h.
using AttentionMap = std::vector<std::array<std::array<double, 2>, 2>>;

struct GatOutput {
  /// [batch x hidden] per node.
  Var node_a;
  Var node_b;
  /// [batch x 2*hidden], node A first.
  Var graph;
  /// One map per batch row.
  std::vector<AttentionMap> attention;
};

/// Throws ContractError if an edge of the four-edge pattern is missing or a
/// trust value lies outside [0, 1].
void check_graph(const data::StrategicGraph& graph);

GatOutput gat_forward(Tape& tape, const Binder& bind, const GatConfig& config,
                      std::span<const data::StrategicGraph* const> graphs);

}  // namespace stgfn::model
