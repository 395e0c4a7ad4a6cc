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

#include "stgfn/model/fusion.hpp"

#include <string>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::model {

std::string_view gate_mode_name(GateMode mode) { return mode == GateMode::kLiteral ? "literal" : "convex"; }

GateMode parse_gate_mode(std::string_view text) {
  if (text == "literal") return GateMode::kLiteral;
  if (text == "convex") return GateMode::kConvex;
  throw ContractError("unknown gate mode '" + std::string(text) + "' (expected literal|convex)");
}

void add_fusion_parameters(ParameterSet& params, const FusionConfig& config, std::mt19937_64& rng) {
  const std::size_t joint = config.text_dim + config.graph_dim;
  init_uniform(params.add("fusion.gate.weight", {joint, 1}), joint, rng);
  init_uniform(params.add("fusion.gate.bias", {1, 1}), joint, rng);
  if (config.mode == GateMode::kLiteral) {
    init_uniform(params.add("fusion.proj.weight", {joint, config.hidden}), joint, rng);
    init_uniform(params.add("fusion.proj.bias", {1, config.hidden}), joint, rng);
  } else {
    init_uniform(params.add("fusion.proj_txt.weight", {config.text_dim, config.hidden}), config.text_dim, rng);
    init_uniform(params.add("fusion.proj_graph.weight", {config.graph_dim, config.hidden}), config.graph_dim, rng);
  }
}

// The graph half of each joint weight is applied once per dialogue.
FusionContext fusion_context(const Binder& bind, const FusionConfig& config, Var graph) {
  if (graph.cols() != config.graph_dim)
    throw ShapeError("fusion expects graph width " + std::to_string(config.graph_dim) + ", got " +
                     std::to_string(graph.cols()));
  FusionContext ctx;
  ctx.graph = graph;
  const Var gate_w = bind("fusion.gate.weight");
  ctx.gate_weight_txt = slice_rows(gate_w, 0, config.text_dim);
  ctx.gate_graph_term = matmul(graph, slice_rows(gate_w, config.text_dim, config.graph_dim));
  ctx.gate_bias = bind("fusion.gate.bias");
  if (config.mode == GateMode::kLiteral) {
    const Var proj_w = bind("fusion.proj.weight");
    ctx.proj_weight_txt = slice_rows(proj_w, 0, config.text_dim);
    ctx.proj_graph_term = matmul(graph, slice_rows(proj_w, config.text_dim, config.graph_dim));
    ctx.proj_bias = bind("fusion.proj.bias");
  } else {
    ctx.proj_weight_txt = bind("fusion.proj_txt.weight");
    ctx.graph_branch = relu(matmul(graph, bind("fusion.proj_graph.weight")));
  }
  return ctx;
}

FusionStep fuse(const FusionContext& ctx, const FusionConfig& config, Var text) {
  if (text.cols() != config.text_dim)
    throw ShapeError("fusion expects text width " + std::to_string(config.text_dim) + ", got " +
                     std::to_string(text.cols()));
  FusionStep step;
  step.gate = sigmoid(matmul(text, ctx.gate_weight_txt) + ctx.gate_graph_term + ctx.gate_bias);
  if (config.mode == GateMode::kLiteral) {
    step.fused = step.gate * relu(matmul(text, ctx.proj_weight_txt) + ctx.proj_graph_term + ctx.proj_bias);
  } else {
    const Var text_branch = relu(matmul(text, ctx.proj_weight_txt));
    step.fused = step.gate * text_branch + affine(step.gate, -1.0, 1.0) * ctx.graph_branch;
  }
  return step;
}

}  // namespace stgfn::model
