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

// Differentiable ops on tape variables. All ops work on the matrix view of
// their inputs. Binary elementwise ops broadcast: each dimension must match
// or be 1 on one side.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "stgfn/tape.hpp"

namespace stgfn {

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }

/// scale * a + shift, elementwise.
Var affine(Var a, double scale, double shift = 0.0);

/// Concatenates along columns; all inputs must have the same row count.
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);

/// Columns [begin, begin + count).
Var slice_cols(Var a, std::size_t begin, std::size_t count);
/// Rows [begin, begin + count).
Var slice_rows(Var a, std::size_t begin, std::size_t count);

Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
Var leaky_relu(Var a, double slope);
/// Softmax over each row.
Var softmax(Var a);
Var abs(Var a);
Var square(Var a);

/// Inverted dropout. keep_prob in (0, 1]. Identity when !training.
Var dropout(Var a, double keep_prob, std::mt19937_64& rng, bool training);

/// Mean of all elements, as a 1x1 tensor.
Var mean(Var a);
/// Sum of all elements, as a 1x1 tensor.
Var sum(Var a);

/// Mean binary cross-entropy between probabilities (any shape) and 0/1
/// labels. Probabilities are clamped to [eps, 1 - eps] before the log;
/// the gradient is zero where the clamp is active.
Var binary_cross_entropy(Var probs, std::span<const int> labels, double eps);

/// Row r is the mean of table rows bags[r]; an empty bag yields a zero row.
Var embedding_bag(Var table, const std::vector<std::vector<std::int32_t>>& bags);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

}  // namespace stgfn
