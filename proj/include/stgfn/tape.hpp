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

// Define-by-run reverse-mode tape. Every forward op appends a node holding its
// output value and a backward rule; nodes are appended after their inputs, so
// walking the tape backwards is a valid reverse topological order.
//
// A tape is single-use: build it, call backward() once, discard it. It is not
// thread-safe; independent tapes may live on different threads.

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "stgfn/tensor.hpp"

namespace stgfn {

class Tape;

/// Handle to a node on a tape.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape& tape() const { return *tape_; }
  std::uint32_t id() const { return id_; }
  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

class Tape {
 public:
  /// Receives the node's upstream gradient; adds into input gradients
  /// obtained from Tape::grad_target.
  using BackwardFn = std::function<void(Tape&, const std::vector<double>& upstream)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf without gradient.
  Var constant(Tensor value);

  /// Leaf bound to a trainable tensor. The tensor must outlive the tape and
  /// stay unmodified until backward() returns. Its gradient accumulates.
  Var parameter(Tensor& param);

  /// Leaf that reads an external tensor without copying and without
  /// gradient. The tensor must outlive the tape.
  Var view(const Tensor& value);

  /// Appends an op result. Throws NumericError if value has NaN/Inf.
  Var record(std::string_view op, Tensor value, std::vector<Var> inputs, BackwardFn backward);

  const Tensor& value(Var v) const;
  std::string_view op_name(Var v) const;

  /// True if gradient can flow from v to some parameter.
  bool needs_grad(Var v) const;

  /// Gradient buffer for v, zero-initialised on first use; nullptr when no
  /// gradient is needed for v.
  double* grad_target(Var v);

  /// Gradient of the last backward() w.r.t. v (empty if it received none).
  const std::vector<double>& grad(Var v) const;

  /// Accumulates d(loss)/d(param) into every parameter's grad buffer.
  /// loss must be a one-element tensor produced on this tape.
  void backward(Var loss);

  bool backward_done() const { return backward_done_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::string_view op;
    Tensor value;
    const Tensor* external = nullptr;
    Tensor* param = nullptr;
    std::vector<std::uint32_t> inputs;
    BackwardFn backward;
    std::vector<double> grad;
    bool needs_grad = false;
  };

  Node& node(Var v);
  const Node& node(Var v) const;
  Var push(Node node);

  std::deque<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace stgfn
