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

#include "stgfn/model/gat.hpp"

#include <cmath>
#include <string>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::model {

namespace {

std::string head_name(std::size_t h, const char* leaf) { return "gat.head" + std::to_string(h) + "." + leaf; }

}  // namespace

void check_gat_config(const GatConfig& config) {
  if (config.heads == 0 || config.hidden == 0 || config.hidden % config.heads != 0)
    throw ContractError("gat hidden size " + std::to_string(config.hidden) + " is not a positive multiple of " +
                        std::to_string(config.heads) + " heads");
}

void add_gat_parameters(ParameterSet& params, const GatConfig& config, std::mt19937_64& rng) {
  check_gat_config(config);
  const std::size_t dh = config.head_dim();
  for (std::size_t h = 0; h < config.heads; ++h) {
    init_uniform(params.add(head_name(h, "weight"), {config.node_dim, dh}), config.node_dim, rng);
    init_uniform(params.add(head_name(h, "attn_src"), {dh, 1}), 2 * dh, rng);
    init_uniform(params.add(head_name(h, "attn_dst"), {dh, 1}), 2 * dh, rng);
  }
}

void check_graph(const data::StrategicGraph& graph) {
  for (int src = 0; src < 2; ++src) {
    for (int dst = 0; dst < 2; ++dst) {
      bool found = false;
      for (const auto& e : graph.edges) {
        if (e.src != src || e.dst != dst) continue;
        if (!(e.trust >= 0.0 && e.trust <= 1.0))
          throw ContractError("trust " + std::to_string(e.trust) + " on edge " + std::to_string(src) + "->" +
                              std::to_string(dst) + " is outside [0, 1]");
        found = true;
      }
      if (!found)
        throw ContractError(src == dst ? "graph is missing the self-loop on node " + std::to_string(src)
                                       : "graph is missing edge " + std::to_string(src) + "->" + std::to_string(dst));
    }
  }
}

GatOutput gat_forward(Tape& tape, const Binder& bind, const GatConfig& config,
                      std::span<const data::StrategicGraph* const> graphs) {
  check_gat_config(config);
  const std::size_t batch = graphs.size();
  if (batch == 0) throw ContractError("gat_forward on an empty batch");
  Tensor xa({batch, config.node_dim});
  Tensor xb({batch, config.node_dim});
  // log_trust[i][j]: column of log(tau_ij + eps) over the batch.
  std::array<std::array<Tensor, 2>, 2> log_trust{};
  for (auto& row : log_trust)
    for (auto& t : row) t = Tensor({batch, 1});
  for (std::size_t r = 0; r < batch; ++r) {
    const auto& g = *graphs[r];
    check_graph(g);
    if (config.node_dim != data::kNodeFeatureDim) throw ShapeError("gat node_dim must be 6");
    for (std::size_t c = 0; c < config.node_dim; ++c) {
      xa.at(r, c) = g.features[0][c];
      xb.at(r, c) = g.features[1][c];
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) log_trust[i][j][r] = std::log(g.trust(i, j) + config.trust_eps);
  }
  const Var va = tape.constant(std::move(xa));
  const Var vb = tape.constant(std::move(xb));
  std::array<std::array<Var, 2>, 2> bias{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) bias[i][j] = tape.constant(std::move(log_trust[i][j]));

  GatOutput out;
  out.attention.assign(batch, AttentionMap(config.heads));
  std::vector<Var> heads_a;
  std::vector<Var> heads_b;
  for (std::size_t h = 0; h < config.heads; ++h) {
    const Var w = bind(head_name(h, "weight"));
    const Var a_src = bind(head_name(h, "attn_src"));
    const Var a_dst = bind(head_name(h, "attn_dst"));
    const std::array<Var, 2> proj{matmul(va, w), matmul(vb, w)};
    const std::array<Var, 2> src{matmul(proj[0], a_src), matmul(proj[1], a_src)};
    const std::array<Var, 2> dst{matmul(proj[0], a_dst), matmul(proj[1], a_dst)};
    std::array<Var, 2> node_out{};
    for (int i = 0; i < 2; ++i) {
      const Var e0 = leaky_relu(src[i] + dst[0], config.slope) + bias[i][0];
      const Var e1 = leaky_relu(src[i] + dst[1], config.slope) + bias[i][1];
      const Var alpha = softmax(concat({e0, e1}));
      node_out[i] = slice_cols(alpha, 0, 1) * proj[0] + slice_cols(alpha, 1, 1) * proj[1];
      const Tensor& av = alpha.value();
      for (std::size_t r = 0; r < batch; ++r) {
        out.attention[r][h][i][0] = av.at(r, 0);
        out.attention[r][h][i][1] = av.at(r, 1);
      }
    }
    heads_a.push_back(node_out[0]);
    heads_b.push_back(node_out[1]);
  }
  out.node_a = heads_a.size() == 1 ? heads_a[0] : concat(heads_a);
  out.node_b = heads_b.size() == 1 ? heads_b[0] : concat(heads_b);
  out.graph = concat({out.node_a, out.node_b});
  return out;
}

}  // namespace stgfn::model
