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

#include "stgfn/model/lstm.hpp"

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::model {

void add_lstm_parameters(ParameterSet& params, std::size_t hidden, std::mt19937_64& rng) {
  init_uniform(params.add("lstm.input.weight", {hidden, 4 * hidden}), hidden, rng);
  init_uniform(params.add("lstm.recurrent.weight", {hidden, 4 * hidden}), hidden, rng);
  Tensor& bias = params.add("lstm.bias", {1, 4 * hidden});
  init_uniform(bias, hidden, rng);
  for (std::size_t c = hidden; c < 2 * hidden; ++c) bias[c] = 1.0;
}

LstmWeights bind_lstm(const Binder& bind, std::size_t hidden) {
  return {bind("lstm.input.weight"),
          bind("lstm.recurrent.weight"),
          bind("lstm.bias"), hidden};
}

LstmState lstm_zero_state(Tape& tape, std::size_t batch, std::size_t hidden) {
  return {tape.constant(Tensor({batch, hidden})), tape.constant(Tensor({batch, hidden}))};
}

LstmState lstm_step(const LstmWeights& w, Var input, const LstmState& prev) {
  const std::size_t h = w.hidden;
  const Var pre = matmul(input, w.input) + matmul(prev.hidden, w.recurrent) + w.bias;
  const Var in_gate = sigmoid(slice_cols(pre, 0, h));
  const Var forget_gate = sigmoid(slice_cols(pre, h, h));
  const Var candidate = tanh(slice_cols(pre, 2 * h, h));
  const Var out_gate = sigmoid(slice_cols(pre, 3 * h, h));
  const Var cell = forget_gate * prev.cell + in_gate * candidate;
  return {out_gate * tanh(cell), cell};
}

Var lstm_forward(Tape& tape, const Binder& bind, std::size_t hidden, std::span<const Var> inputs) {
  if (inputs.empty()) throw ContractError("lstm_forward needs at least one step");
  const LstmWeights w = bind_lstm(bind, hidden);
  LstmState state = lstm_zero_state(tape, inputs.front().rows(), hidden);
  for (const Var& x : inputs) state = lstm_step(w, x, state);
  return state.hidden;
}

}  // namespace stgfn::model
