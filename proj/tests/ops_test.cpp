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
#include <limits>
#include <random>
#include <vector>

#include "stgfn/error.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/tape.hpp"

namespace stgfn {
namespace {

std::vector<double> grad_of(const Tensor& t) { return *t.grad(); }

Tensor param(Shape shape, std::vector<double> values) {
  Tensor t(std::move(shape), std::move(values));
  t.set_requires_grad(true);
  return t;
}

TEST(Ops, SigmoidOfZeroIsHalf) {
  Tape tape;
  EXPECT_EQ(sigmoid(tape.constant(Tensor::scalar(0.0))).value().item(), 0.5);
}

TEST(Ops, ConcatAlongColumns) {
  Tape tape;
  const Var c = concat({tape.constant(Tensor::row({1, 2})), tape.constant(Tensor::row({3}))});
  EXPECT_EQ(c.value().storage(), (std::vector<double>{1, 2, 3}));
  EXPECT_THROW(concat({tape.constant(Tensor({2, 1})), tape.constant(Tensor({3, 1}))}), ShapeError);
}

TEST(Ops, ReluAndLeakyRelu) {
  Tape tape;
  const Var x = tape.constant(Tensor::scalar(-2.5));
  EXPECT_EQ(relu(x).value().item(), 0.0);
  EXPECT_DOUBLE_EQ(leaky_relu(x, 0.2).value().item(), -0.5);
  EXPECT_EQ(leaky_relu(tape.constant(Tensor::scalar(3.0)), 0.2).value().item(), 3.0);
}

TEST(Ops, SumOfSquaresGradient) {
  Tensor x = param({3}, {1, 2, 3});
  Tape tape;
  const Var v = tape.parameter(x);
  tape.backward(sum(v * v));
  EXPECT_EQ(grad_of(x), (std::vector<double>{2, 4, 6}));
}

TEST(Ops, BackwardTwiceIsAnError) {
  Tensor x = param({1}, {1});
  Tape tape;
  const Var loss = sum(square(tape.parameter(x)));
  tape.backward(loss);
  EXPECT_THROW(tape.backward(loss), ContractError);
}

TEST(Ops, BackwardOnNonScalarIsAnError) {
  Tensor x = param({2}, {1, 2});
  Tape tape;
  EXPECT_THROW(tape.backward(square(tape.parameter(x))), ContractError);
}

TEST(Ops, UnusedParameterGetsZeroGradient) {
  Tensor x = param({2}, {1, 2});
  Tensor q = param({2}, {5, 6});
  Tape tape;
  const Var vx = tape.parameter(x);
  tape.parameter(q);
  tape.backward(sum(vx));
  EXPECT_EQ(grad_of(q), (std::vector<double>{0, 0}));
}

TEST(Ops, GradientsAccumulateAcrossTapes) {
  Tensor x = param({1}, {3});
  for (int i = 0; i < 2; ++i) {
    Tape tape;
    tape.backward(sum(square(tape.parameter(x))));
  }
  EXPECT_EQ(grad_of(x)[0], 12.0);
  x.zero_grad();
  EXPECT_EQ(grad_of(x)[0], 0.0);
}

TEST(Ops, MatmulValueAndShapeError) {
  Tape tape;
  const Var a = tape.constant(Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  const Var b = tape.constant(Tensor::matrix(3, 1, {1, 0, -1}));
  EXPECT_EQ(matmul(a, b).value().storage(), (std::vector<double>{-2, -2}));
  EXPECT_THROW(matmul(a, a), ShapeError);
}

TEST(Ops, BroadcastingRowAndColumn) {
  Tape tape;
  const Var m = tape.constant(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  const Var r = tape.constant(Tensor::row({10, 20}));
  const Var c = tape.constant(Tensor::column({1, 2}));
  EXPECT_EQ((m + r).value().storage(), (std::vector<double>{11, 22, 13, 24}));
  EXPECT_EQ((m * c).value().storage(), (std::vector<double>{1, 2, 6, 8}));
  EXPECT_EQ((m - r).value().storage(), (std::vector<double>{-9, -18, -7, -16}));
  EXPECT_THROW(m + tape.constant(Tensor::row({1, 2, 3})), ShapeError);
}

TEST(Ops, BroadcastGradientsReduceOverRepeatedAxis) {
  Tensor m = param({2, 2}, {1, 2, 3, 4});
  Tensor c = param({2, 1}, {5, 7});
  Tape tape;
  tape.backward(sum(tape.parameter(m) * tape.parameter(c)));
  EXPECT_EQ(grad_of(m), (std::vector<double>{5, 5, 7, 7}));
  EXPECT_EQ(grad_of(c), (std::vector<double>{3, 7}));
}

TEST(Ops, SoftmaxRowsSumToOne) {
  Tape tape;
  const Var s = softmax(tape.constant(Tensor::matrix(2, 3, {1, 2, 3, 1000, 1000, 1000})));
  for (std::size_t r = 0; r < 2; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) total += s.value().at(r, c);
    EXPECT_NEAR(total, 1.0, 1e-15);
  }
  EXPECT_NEAR(s.value().at(1, 0), 1.0 / 3.0, 1e-15);
}

TEST(Ops, SlicesAndAffine) {
  Tape tape;
  const Var m = tape.constant(Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(slice_cols(m, 1, 1).value().storage(), (std::vector<double>{2, 4, 6}));
  EXPECT_EQ(slice_rows(m, 1, 2).value().storage(), (std::vector<double>{3, 4, 5, 6}));
  EXPECT_THROW(slice_rows(m, 2, 2), ShapeError);
  EXPECT_EQ(affine(m, -1.0, 1.0).value().storage(), (std::vector<double>{0, -1, -2, -3, -4, -5}));
  EXPECT_EQ(mean(m).value().item(), 3.5);
}

TEST(Ops, DropoutIsIdentityWhenNotTraining) {
  std::mt19937_64 rng(1);
  Tape tape;
  const Tensor x = Tensor::row({1, 2, 3});
  EXPECT_EQ(dropout(tape.constant(x), 0.5, rng, false).value().storage(), x.storage());
}

TEST(Ops, DropoutKeepsExpectation) {
  std::mt19937_64 rng(2);
  Tape tape;
  const Var y = dropout(tape.constant(Tensor({1, 20000}, 1.0)), 0.7, rng, true);
  double total = 0.0;
  for (double v : y.value().values()) {
    EXPECT_TRUE(v == 0.0 || std::fabs(v - 1.0 / 0.7) < 1e-15);
    total += v;
  }
  EXPECT_NEAR(total / 20000.0, 1.0, 0.02);
  EXPECT_THROW(dropout(y, 0.0, rng, true), ContractError);
}

TEST(Ops, NonFiniteOutputNamesTheOp) {
  Tape tape;
  const Var x = tape.constant(Tensor::scalar(std::numeric_limits<double>::max()));
  try {
    square(x);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("square"), std::string::npos);
  }
}

TEST(Ops, BinaryCrossEntropyValueAndClamp) {
  Tape tape;
  const int labels[] = {1, 0};
  const Var bce = binary_cross_entropy(tape.constant(Tensor::row({0.8, 0.4})), labels, 1e-12);
  EXPECT_NEAR(bce.value().item(), -(std::log(0.8) + std::log(0.6)) / 2.0, 1e-15);
  Tensor p = param({1}, {0.0});
  Tape t2;
  const int one[] = {1};
  const Var clamped = binary_cross_entropy(t2.parameter(p), one, 1e-12);
  EXPECT_NEAR(clamped.value().item(), -std::log(1e-12), 1e-9);
  t2.backward(clamped);
  EXPECT_EQ(grad_of(p)[0], 0.0);
  const int bad[] = {2};
  EXPECT_THROW(binary_cross_entropy(t2.constant(Tensor::row({0.5})), bad, 1e-12), ContractError);
}

TEST(Ops, EmbeddingBagMeansRows) {
  Tensor table = param({3, 2}, {1, 2, 3, 4, 5, 6});
  Tape tape;
  const Var e = embedding_bag(tape.parameter(table), {{0, 2}, {}, {1}});
  EXPECT_EQ(e.value().storage(), (std::vector<double>{3, 4, 0, 0, 3, 4}));
  tape.backward(sum(e));
  EXPECT_EQ(grad_of(table), (std::vector<double>{0.5, 0.5, 1, 1, 0.5, 0.5}));
  Tape t2;
  EXPECT_THROW(embedding_bag(t2.constant(Tensor({3, 2})), {{3}}), ShapeError);
}

TEST(Ops, MixingTapesIsAnError) {
  Tape a;
  Tape b;
  EXPECT_THROW(add(a.constant(Tensor::scalar(1)), b.constant(Tensor::scalar(1))), ContractError);
}

TEST(Ops, ClosedTapeRejectsNewNodes) {
  Tensor x = param({1}, {1});
  Tape tape;
  const Var v = tape.parameter(x);
  tape.backward(sum(v));
  EXPECT_THROW(square(v), ContractError);
}

TEST(Ops, ViewReadsWithoutGradient) {
  Tensor w = param({1}, {2});
  Tensor x = param({1}, {3});
  Tape tape;
  tape.backward(sum(tape.view(w) * tape.parameter(x)));
  EXPECT_EQ(grad_of(w)[0], 0.0);
  EXPECT_EQ(grad_of(x)[0], 2.0);
}

TEST(Ops, Uniform01Range) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace stgfn
