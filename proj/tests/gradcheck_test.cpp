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


#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "stgfn/gradcheck.hpp"
#include "stgfn/ops.hpp"

namespace stgfn::gradcheck {
namespace {

// x -> x^2 whose backward rule reports 3x instead of 2x.
Var broken_square(Var a) {
  Tensor out = a.value();
  for (auto& v : out.values()) v = v * v;
  return a.tape().record("broken_square", std::move(out), {a},
                         [a](Tape& tape, const std::vector<double>& up) {
                           double* g = tape.grad_target(a);
                           if (g == nullptr) return;
                           const Tensor& x = a.value();
                           for (std::size_t i = 0; i < x.size(); ++i) g[i] += up[i] * 3.0 * x[i];
                         });
}

OpCase broken_case() {
  return {"broken_square", [](std::uint64_t seed) {
            auto x = std::make_shared<Tensor>(Shape{2, 3});
            std::mt19937_64 rng(seed);
            for (auto& v : x->values()) v = 0.5 + uniform01(rng);
            x->set_requires_grad(true);
            Problem p;
            p.params = {x.get()};
            p.loss = [x](Tape& tape) { return sum(broken_square(tape.parameter(*x))); };
            p.storage = x;
            return p;
          }};
}

TEST(Gradcheck, DefaultCasesCoverOpsLossesAndModels) {
  const auto cases = default_cases();
  std::vector<std::string> names;
  for (const auto& c : cases) names.push_back(c.name);
  for (const char* expected : {"matmul", "add", "mul", "concat", "sigmoid", "tanh", "relu", "leaky_relu",
                               "softmax", "dropout", "mean", "sum", "abs", "square", "loss.composite",
                               "model.stgfn.literal", "model.stgfn.convex"})
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
}

TEST(Gradcheck, AllDefaultCasesPassOnThreeSeeds) {
  const auto cases = default_cases();
  const std::uint64_t seeds[] = {1, 2, 3};
  for (const auto& r : run_cases(cases, seeds)) {
    EXPECT_TRUE(r.passed()) << r.name << " max rel " << r.max_rel_error << " max abs " << r.max_abs_error;
    EXPECT_GT(r.elements, 0u) << r.name;
  }
}

TEST(Gradcheck, DetectsAWrongBackwardRule) {
  std::vector<OpCase> cases = {default_cases().front(), broken_case()};
  const std::uint64_t seeds[] = {7};
  const auto results = run_cases(cases, seeds);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_TRUE(results[0].passed());
  EXPECT_FALSE(results[1].passed());
  EXPECT_EQ(results[1].failures, 6u);
  // |3x - 2x| / max(3x, 2x) = 1/3 for every element.
  EXPECT_NEAR(results[1].max_rel_error, 1.0 / 3.0, 1e-6);
  const std::string table = format_results(results);
  EXPECT_NE(table.find("FAIL"), std::string::npos);
  EXPECT_NE(table.find("broken_square"), std::string::npos);
}

}  // namespace
}  // namespace stgfn::gradcheck
