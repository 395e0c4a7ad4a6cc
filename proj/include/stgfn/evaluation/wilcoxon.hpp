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

#include <span>
#include <vector>

namespace stgfn::evaluation {

inline constexpr std::size_t kWilcoxonExactMax = 20;

struct WilcoxonResult {
  /// W+ - W-; negates when the samples are swapped.
  double statistic = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  /// Two-tailed.
  double p_value = 1.0;
  /// Pairs left after dropping zero differences.
  std::size_t n = 0;
  bool exact = false;
};

/// Signed-rank test on paired samples. Exact null distribution up to 20
/// nonzero differences, normal approximation with tie correction above.
/// Throws ContractError on mismatched lengths or fewer than 5 pairs, and
/// DegenerateTestError when every difference is zero.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Null distribution of 2*W+ for the given ranks: entry s is
/// P(2*W+ == s). Ranks must be multiples of 1/2.
std::vector<double> signed_rank_null_distribution(std::span<const double> ranks);

}  // namespace stgfn::evaluation
