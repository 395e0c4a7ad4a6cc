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

// Dense double-precision kernels behind the tensor ops.
//
// Every kernel has a portable scalar reference. Vector variants (AVX2+FMA on
// x86-64) are compiled into their own translation unit and chosen once at
// startup from CPUID, or forced with STGFN_KERNELS=scalar|avx2.
//
// Layout is row-major and contiguous. GEMM computes each output element as a
// single left-to-right chain over the inner dimension, so an output row
// depends only on the matching input row. This keeps results independent of
// how instances are grouped into batches.

#include <cstddef>
#include <string_view>

namespace stgfn::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  /// c[m x n] = a[m x k] * b[k x n]; with accumulate, c += a * b.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a,
               const double* b, double* c, bool accumulate);
  /// out[i] = x[i] + y[i]. Bit-exact across ISAs.
  void (*add)(std::size_t n, const double* x, const double* y, double* out);
  /// out[i] = x[i] * y[i]. Bit-exact across ISAs.
  void (*mul)(std::size_t n, const double* x, const double* y, double* out);
  /// y[i] += alpha * x[i]. Bit-exact across ISAs (no fused multiply-add).
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  /// Sum of x. Vector variants reassociate.
  double (*sum)(std::size_t n, const double* x);
};

const KernelTable& scalar_table();

/// Null when the variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);

/// The table used by tensor ops.
const KernelTable& active();

/// Switches the active table. Throws ContractError when unsupported.
void select(Isa isa);

std::string_view isa_name(Isa isa);

/// Parses "scalar" / "avx2". Throws ContractError otherwise.
Isa parse_isa(std::string_view name);

/// dst[cols x rows] = transpose(src[rows x cols]).
void transpose(std::size_t rows, std::size_t cols, const double* src, double* dst);

/// Restores the active table on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace stgfn::kernels
