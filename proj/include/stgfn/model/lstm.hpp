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
#include <span>

#include "stgfn/model/parameters.hpp"

namespace stgfn::model {

/// Adds lstm.input.weight [hidden x 4*hidden], lstm.recurrent.weight and
/// lstm.bias, gate blocks ordered input, forget, cell, output. The forget
/// block of the bias starts at 1.
void add_lstm_parameters(ParameterSet& params, std::size_t hidden, std::mt19937_64& rng);

struct LstmWeights {
  Var input;
  Var recurrent;
  Var bias;
  std::size_t hidden = 0;
};

LstmWeights bind_lstm(const Binder& bind, std::size_t hidden);

struct LstmState {
  Var hidden;
  Var cell;
};

LstmState lstm_zero_state(Tape& tape, std::size_t batch, std::size_t hidden);

LstmState lstm_step(const LstmWeights& weights, Var input, const LstmState& prev);

/// Runs the recurrence from zero state over inputs (each [batch x hidden])
/// and returns the final hidden state. Throws ContractError if inputs is empty.
Var lstm_forward(Tape& tape, const Binder& bind, std::size_t hidden, std::span<const Var> inputs);

}  // namespace stgfn::model
