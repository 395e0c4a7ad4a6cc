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

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stgfn/tape.hpp"
#include "stgfn/tensor.hpp"

namespace stgfn::model {

/// Named trainable tensors. Iteration order is by name, which fixes the
/// optimizer's moment-buffer order and the checkpoint layout.
class ParameterSet {
 public:
  /// Adds a zero tensor of the given shape. Throws ContractError on duplicates.
  Tensor& add(const std::string& name, Shape shape);

  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }

  std::vector<std::string> names() const;
  std::vector<Tensor*> pointers();
  std::size_t scalar_count() const;

  void zero_grad();

  /// Same names and shapes.
  bool same_layout(const ParameterSet& other) const;
  /// Copies values (not gradients) from a set with the same layout.
  void copy_values_from(const ParameterSet& other);
  bool same_values(const ParameterSet& other) const;

  std::map<std::string, Tensor>& tensors() { return tensors_; }
  const std::map<std::string, Tensor>& tensors() const { return tensors_; }

 private:
  std::map<std::string, Tensor> tensors_;
};

/// Fills t with uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
void init_uniform(Tensor& t, std::size_t fan_in, std::mt19937_64& rng);

/// Resolves a parameter name to a leaf on some tape.
using Binder = std::function<Var(const std::string&)>;

/// Leaves that accumulate gradients into the parameters.
Binder trainable_binder(Tape& tape, ParameterSet& params);
/// Read-only leaves.
Binder frozen_binder(Tape& tape, const ParameterSet& params);

}  // namespace stgfn::model
