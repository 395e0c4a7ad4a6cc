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

#include "stgfn/evaluation/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stgfn/error.hpp"

namespace stgfn::evaluation {

namespace {

std::size_t doubled(double rank) {
  const double twice = 2.0 * rank;
  if (twice < 0.0 || std::fabs(twice - std::round(twice)) > 1e-9)
    throw ContractError("rank " + std::to_string(rank) + " is not a non-negative multiple of 1/2");
  return static_cast<std::size_t>(std::llround(twice));
}

}  // namespace

std::vector<double> signed_rank_null_distribution(std::span<const double> ranks) {
  std::size_t total = 0;
  for (double r : ranks) total += doubled(r);
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (double r : ranks) {
    const std::size_t step = doubled(r);
    reach += step;
    for (std::size_t s = reach + 1; s-- > step;) counts[s] += counts[s - step];
  }
  const double patterns = std::ldexp(1.0, static_cast<int>(ranks.size()));
  for (double& c : counts) c /= patterns;
  return counts;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ContractError("wilcoxon: length mismatch " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  if (a.size() < 5) throw ContractError("wilcoxon needs at least 5 pairs, got " + std::to_string(a.size()));
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);
  if (diffs.empty()) throw DegenerateTestError("wilcoxon: every paired difference is zero");

  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::fabs(diffs[x]) < std::fabs(diffs[y]); });
  std::vector<double> ranks(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    const double size = static_cast<double>(j - i + 1);
    tie_term += size * size * size - size;
    i = j + 1;
  }

  WilcoxonResult out;
  out.n = n;
  for (std::size_t i = 0; i < n; ++i) (diffs[i] > 0.0 ? out.w_plus : out.w_minus) += ranks[i];
  out.statistic = out.w_plus - out.w_minus;

  if (n <= kWilcoxonExactMax) {
    out.exact = true;
    const auto dist = signed_rank_null_distribution(ranks);
    const std::size_t observed = doubled(out.w_plus);
    double lower = 0.0, upper = 0.0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
      if (s <= observed) lower += dist[s];
      if (s >= observed) upper += dist[s];
    }
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
  } else {
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    if (!(var > 0.0)) throw DegenerateTestError("wilcoxon: zero variance under the null");
    const double z = (out.w_plus - mean) / std::sqrt(var);
    out.p_value = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
  }
  return out;
}

}  // namespace stgfn::evaluation
