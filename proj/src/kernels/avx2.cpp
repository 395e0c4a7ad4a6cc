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

#include <immintrin.h>

#include <cmath>

#include "stgfn/kernels.hpp"

namespace stgfn::kernels {
namespace {

// One output row, columns [j, j + 8).
inline void row_block8(std::size_t k, std::size_t n, const double* a_row,
                       const double* b, std::size_t j, double* c_row, bool accumulate) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d av = _mm256_broadcast_sd(a_row + p);
    const double* b_row = b + p * n + j;
    acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b_row), acc0);
    acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b_row + 4), acc1);
  }
  if (accumulate) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(c_row + j));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(c_row + j + 4));
  }
  _mm256_storeu_pd(c_row + j, acc0);
  _mm256_storeu_pd(c_row + j + 4, acc1);
}

// Four output rows, columns [j, j + 8). Same per-element chain as row_block8.
inline void quad_block8(std::size_t k, std::size_t n, const double* a, std::size_t i,
                        const double* b, std::size_t j, double* c, bool accumulate) {
  __m256d acc[4][2];
  for (auto& r : acc) r[0] = r[1] = _mm256_setzero_pd();
  const double* a0 = a + (i + 0) * k;
  const double* a1 = a + (i + 1) * k;
  const double* a2 = a + (i + 2) * k;
  const double* a3 = a + (i + 3) * k;
  for (std::size_t p = 0; p < k; ++p) {
    const double* b_row = b + p * n + j;
    const __m256d b0 = _mm256_loadu_pd(b_row);
    const __m256d b1 = _mm256_loadu_pd(b_row + 4);
    __m256d av = _mm256_broadcast_sd(a0 + p);
    acc[0][0] = _mm256_fmadd_pd(av, b0, acc[0][0]);
    acc[0][1] = _mm256_fmadd_pd(av, b1, acc[0][1]);
    av = _mm256_broadcast_sd(a1 + p);
    acc[1][0] = _mm256_fmadd_pd(av, b0, acc[1][0]);
    acc[1][1] = _mm256_fmadd_pd(av, b1, acc[1][1]);
    av = _mm256_broadcast_sd(a2 + p);
    acc[2][0] = _mm256_fmadd_pd(av, b0, acc[2][0]);
    acc[2][1] = _mm256_fmadd_pd(av, b1, acc[2][1]);
    av = _mm256_broadcast_sd(a3 + p);
    acc[3][0] = _mm256_fmadd_pd(av, b0, acc[3][0]);
    acc[3][1] = _mm256_fmadd_pd(av, b1, acc[3][1]);
  }
  for (std::size_t r = 0; r < 4; ++r) {
    double* c_row = c + (i + r) * n + j;
    if (accumulate) {
      acc[r][0] = _mm256_add_pd(acc[r][0], _mm256_loadu_pd(c_row));
      acc[r][1] = _mm256_add_pd(acc[r][1], _mm256_loadu_pd(c_row + 4));
    }
    _mm256_storeu_pd(c_row, acc[r][0]);
    _mm256_storeu_pd(c_row + 4, acc[r][1]);
  }
}

inline void row_block4(std::size_t k, std::size_t n, const double* a_row,
                       const double* b, std::size_t j, double* c_row, bool accumulate) {
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    acc = _mm256_fmadd_pd(_mm256_broadcast_sd(a_row + p), _mm256_loadu_pd(b + p * n + j), acc);
  }
  if (accumulate) acc = _mm256_add_pd(acc, _mm256_loadu_pd(c_row + j));
  _mm256_storeu_pd(c_row + j, acc);
}

inline void row_tail(std::size_t k, std::size_t n, const double* a_row, const double* b,
                     std::size_t j, double* c_row, bool accumulate) {
  double acc = 0.0;
  for (std::size_t p = 0; p < k; ++p) acc = std::fma(a_row[p], b[p * n + j], acc);
  c_row[j] = accumulate ? c_row[j] + acc : acc;
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const double* a,
               const double* b, double* c, bool accumulate) {
  const std::size_t n8 = n - n % 8;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    for (std::size_t j = 0; j < n8; j += 8) quad_block8(k, n, a, i, b, j, c, accumulate);
    for (std::size_t r = i; r < i + 4; ++r) {
      std::size_t j = n8;
      if (j + 4 <= n) {
        row_block4(k, n, a + r * k, b, j, c + r * n, accumulate);
        j += 4;
      }
      for (; j < n; ++j) row_tail(k, n, a + r * k, b, j, c + r * n, accumulate);
    }
  }
  for (; i < m; ++i) {
    const double* a_row = a + i * k;
    double* c_row = c + i * n;
    for (std::size_t j = 0; j < n8; j += 8) row_block8(k, n, a_row, b, j, c_row, accumulate);
    std::size_t j = n8;
    if (j + 4 <= n) {
      row_block4(k, n, a_row, b, j, c_row, accumulate);
      j += 4;
    }
    for (; j < n; ++j) row_tail(k, n, a_row, b, j, c_row, accumulate);
  }
}

void add_avx2(std::size_t n, const double* x, const double* y, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void mul_avx2(std::size_t n, const double* x, const double* y, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy_avx2(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) {
    const double prod = alpha * x[i];
    y[i] += prod;
  }
}

double sum_avx2(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::kAvx2, gemm_avx2, add_avx2,
                                 mul_avx2,   axpy_avx2, sum_avx2};
  return &table;
}

}  // namespace stgfn::kernels
