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

#include "stgfn/model/parameters.hpp"

#include <cmath>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::model {

Tensor& ParameterSet::add(const std::string& name, Shape shape) {
  if (tensors_.count(name)) throw ContractError("duplicate parameter '" + name + "'");
  Tensor t(std::move(shape));
  t.set_requires_grad(true);
  return tensors_.emplace(name, std::move(t)).first->second;
}

Tensor& ParameterSet::get(const std::string& name) {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ContractError("unknown parameter '" + name + "'");
  return it->second;
}

const Tensor& ParameterSet::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ContractError("unknown parameter '" + name + "'");
  return it->second;
}

std::vector<std::string> ParameterSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : tensors_) out.push_back(name);
  return out;
}

std::vector<Tensor*> ParameterSet::pointers() {
  std::vector<Tensor*> out;
  for (auto& [_, t] : tensors_) out.push_back(&t);
  return out;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [_, t] : tensors_) n += t.size();
  return n;
}

void ParameterSet::zero_grad() {
  for (auto& [_, t] : tensors_) t.zero_grad();
}

bool ParameterSet::same_layout(const ParameterSet& other) const {
  if (tensors_.size() != other.tensors_.size()) return false;
  auto it = other.tensors_.begin();
  for (const auto& [name, t] : tensors_) {
    if (it->first != name || it->second.shape() != t.shape()) return false;
    ++it;
  }
  return true;
}

void ParameterSet::copy_values_from(const ParameterSet& other) {
  if (!same_layout(other)) throw ContractError("parameter sets have different layouts");
  auto it = other.tensors_.begin();
  for (auto& [_, t] : tensors_) {
    t.storage() = it->second.storage();
    ++it;
  }
}

bool ParameterSet::same_values(const ParameterSet& other) const {
  if (!same_layout(other)) return false;
  auto it = other.tensors_.begin();
  for (const auto& [_, t] : tensors_) {
    if (!t.same_values(it->second)) return false;
    ++it;
  }
  return true;
}

Binder trainable_binder(Tape& tape, ParameterSet& params) {
  return [&tape, &params](const std::string& name) { return tape.parameter(params.get(name)); };
}

Binder frozen_binder(Tape& tape, const ParameterSet& params) {
  return [&tape, &params](const std::string& name) { return tape.view(params.get(name)); };
}

void init_uniform(Tensor& t, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in == 0 ? 1 : fan_in));
  for (double& v : t.values()) v = (2.0 * uniform01(rng) - 1.0) * bound;
}

}  // namespace stgfn::model
