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

// Central finite-difference checks of tape gradients.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stgfn/tape.hpp"

namespace stgfn::gradcheck {

struct Options {
  double step = 1e-5;
  double rel_tol = 1e-4;
  /// Elements whose absolute error is within this bound pass regardless of
  /// relative error.
  double abs_tol = 1e-6;
};

/// A scalar function of some tensors. loss must bind every tensor in
/// params with Tape::parameter and return a one-element result.
struct Problem {
  std::vector<Tensor*> params;
  std::function<Var(Tape&)> loss;
  /// Owns whatever params and loss refer to.
  std::shared_ptr<void> storage;
};

struct CheckResult {
  std::string name;
  std::size_t elements = 0;
  std::size_t failures = 0;
  double max_abs_error = 0.0;
  /// Over elements outside abs_tol.
  double max_rel_error = 0.0;

  bool passed() const { return failures == 0; }
};

CheckResult check(const std::string& name, Problem& problem, const Options& options = {});

struct OpCase {
  std::string name;
  std::function<Problem(std::uint64_t seed)> make;
};

/// One case per differentiable op, the loss terms, and the composed
/// models at toy size (d_txt 16, hidden 8).
std::vector<OpCase> default_cases();

/// Worst result of each case over the seeds, in case order.
std::vector<CheckResult> run_cases(std::span<const OpCase> cases, std::span<const std::uint64_t> seeds,
                                   const Options& options = {});

/// One PASS/FAIL row per result.
std::string format_results(std::span<const CheckResult> results, const Options& options = {});

}  // namespace stgfn::gradcheck
