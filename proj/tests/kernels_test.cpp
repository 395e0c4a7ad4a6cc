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

#include <cmath>
#include <random>
#include <vector>

#include "stgfn/error.hpp"
#include "stgfn/kernels.hpp"

namespace stgfn::kernels {
namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (avx2_table() == nullptr || !cpu_supports(Isa::kAvx2)) GTEST_SKIP() << "AVX2 kernels unavailable";
  }
  const KernelTable& scalar = scalar_table();
  const KernelTable* vec = avx2_table();
};

TEST_F(KernelEquivalence, ElementwiseIsBitExact) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 33u, 1000u}) {
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    std::vector<double> a(n), b(n);
    scalar.add(n, x.data(), y.data(), a.data());
    vec->add(n, x.data(), y.data(), b.data());
    EXPECT_EQ(a, b) << "add n=" << n;
    scalar.mul(n, x.data(), y.data(), a.data());
    vec->mul(n, x.data(), y.data(), b.data());
    EXPECT_EQ(a, b) << "mul n=" << n;
    a = y;
    b = y;
    scalar.axpy(n, 0.37, x.data(), a.data());
    vec->axpy(n, 0.37, x.data(), b.data());
    EXPECT_EQ(a, b) << "axpy n=" << n;
  }
}

TEST_F(KernelEquivalence, GemmAgreesWithScalar) {
  std::mt19937_64 rng(5);
  const std::size_t dims[][3] = {{1, 1, 1}, {3, 5, 7}, {16, 8, 64}, {17, 130, 9}, {4, 513, 2}};
  for (const auto& d : dims) {
    const auto a = random_vector(d[0] * d[2], rng);
    const auto b = random_vector(d[2] * d[1], rng);
    for (bool acc : {false, true}) {
      std::vector<double> c1 = random_vector(d[0] * d[1], rng);
      std::vector<double> c2 = c1;
      scalar.gemm(d[0], d[1], d[2], a.data(), b.data(), c1.data(), acc);
      vec->gemm(d[0], d[1], d[2], a.data(), b.data(), c2.data(), acc);
      for (std::size_t i = 0; i < c1.size(); ++i)
        EXPECT_NEAR(c1[i], c2[i], 1e-12 * (1.0 + std::fabs(c1[i]))) << d[0] << "x" << d[1] << "x" << d[2];
    }
  }
}

TEST_F(KernelEquivalence, SumAgreesWithScalar) {
  std::mt19937_64 rng(8);
  for (std::size_t n : {0u, 1u, 5u, 64u, 1001u}) {
    const auto x = random_vector(n, rng);
    EXPECT_NEAR(scalar.sum(n, x.data()), vec->sum(n, x.data()), 1e-12 * static_cast<double>(n + 1));
  }
}

TEST(Kernels, GemmRowDependsOnlyOnItsInputRow) {
  std::mt19937_64 rng(11);
  const std::size_t n = 6, k = 9;
  const auto b = random_vector(k * n, rng);
  const auto a = random_vector(4 * k, rng);
  std::vector<double> all(4 * n), one(n);
  active().gemm(4, n, k, a.data(), b.data(), all.data(), false);
  active().gemm(1, n, k, a.data() + 2 * k, b.data(), one.data(), false);
  for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(all[2 * n + j], one[j]);
}

TEST(Kernels, ScalarGemmMatchesNaiveLoop) {
  const std::vector<double> a = {1, 2, 3, 4, 5, 6};
  const std::vector<double> b = {7, 8, 9, 10, 11, 12};
  std::vector<double> c(4);
  scalar_table().gemm(2, 2, 3, a.data(), b.data(), c.data(), false);
  EXPECT_EQ(c, (std::vector<double>{58, 64, 139, 154}));
}

TEST(Kernels, TransposeAndNames) {
  const std::vector<double> src = {1, 2, 3, 4, 5, 6};
  std::vector<double> dst(6);
  transpose(2, 3, src.data(), dst.data());
  EXPECT_EQ(dst, (std::vector<double>{1, 4, 2, 5, 3, 6}));
  EXPECT_EQ(parse_isa("scalar"), Isa::kScalar);
  EXPECT_EQ(parse_isa(isa_name(Isa::kAvx2)), Isa::kAvx2);
  EXPECT_THROW(parse_isa("sse"), ContractError);
}

TEST(Kernels, ScopedIsaRestores) {
  const Isa before = active().isa;
  {
    ScopedIsa guard(Isa::kScalar);
    EXPECT_EQ(active().isa, Isa::kScalar);
  }
  EXPECT_EQ(active().isa, before);
}

}  // namespace
}  // namespace stgfn::kernels
