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

#include "stgfn/tape.hpp"

#include "stgfn/error.hpp"
#include "stgfn/kernels.hpp"

namespace stgfn {

const Tensor& Var::value() const { return tape_->value(*this); }

Tape::Node& Tape::node(Var v) {
  if (v.tape_ != this || v.id_ >= nodes_.size()) throw ContractError("variable does not belong to this tape");
  return nodes_[v.id_];
}

const Tape::Node& Tape::node(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) throw ContractError("variable does not belong to this tape");
  return nodes_[v.id_];
}

Var Tape::push(Node n) {
  if (backward_done_) throw ContractError("tape is closed: backward() already ran");
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::parameter(Tensor& param) {
  Node n;
  n.op = "parameter";
  n.external = &param;
  n.param = &param;
  n.needs_grad = param.requires_grad();
  return push(std::move(n));
}

Var Tape::record(std::string_view op, Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  if (!value.all_finite()) {
    throw NumericError("op '" + std::string(op) + "' produced a non-finite value (shape " +
                       shape_string(value.shape()) + ")");
  }
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (Var in : inputs) {
    const Node& src = node(in);
    n.inputs.push_back(in.id_);
    n.needs_grad = n.needs_grad || src.needs_grad;
  }
  if (n.needs_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

Var Tape::view(const Tensor& value) {
  Node n;
  n.op = "view";
  n.external = &value;
  return push(std::move(n));
}

const Tensor& Tape::value(Var v) const {
  const Node& n = node(v);
  return n.external ? *n.external : n.value;
}

std::string_view Tape::op_name(Var v) const { return node(v).op; }

bool Tape::needs_grad(Var v) const { return node(v).needs_grad; }

double* Tape::grad_target(Var v) {
  Node& n = node(v);
  if (!n.needs_grad) return nullptr;
  if (n.grad.empty()) n.grad.assign(value(v).size(), 0.0);
  return n.grad.data();
}

const std::vector<double>& Tape::grad(Var v) const { return node(v).grad; }

void Tape::backward(Var loss) {
  if (backward_done_) throw ContractError("backward() called twice on the same tape");
  Node& root = node(loss);
  if (value(loss).size() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " + shape_string(value(loss).shape()));
  }
  backward_done_ = true;
  if (!root.needs_grad) return;
  root.grad.assign(1, 1.0);
  const auto& k = kernels::active();
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.needs_grad || n.grad.empty()) continue;
    if (n.param != nullptr) {
      auto& g = n.param->grad();
      if (!g) g.emplace(n.param->size(), 0.0);
      k.axpy(n.grad.size(), 1.0, n.grad.data(), g->data());
    } else if (n.backward) {
      n.backward(*this, n.grad);
    }
  }
}

}  // namespace stgfn
