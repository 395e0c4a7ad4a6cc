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

#include <atomic>
#include <cstdlib>
#include <string>

#include "stgfn/error.hpp"
#include "stgfn/kernels.hpp"

namespace stgfn::kernels {

#ifndef STGFN_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(STGFN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  throw ContractError("unknown kernel set '" + std::string(name) + "' (expected scalar|avx2)");
}

namespace {

const KernelTable* table_for(Isa isa) {
  if (isa == Isa::kScalar) return &scalar_table();
  if (!cpu_supports(isa) || avx2_table() == nullptr) {
    throw ContractError("kernel set '" + std::string(isa_name(isa)) +
                        "' is not available on this build/CPU");
  }
  return avx2_table();
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("STGFN_KERNELS"); env != nullptr && *env != '\0') {
    return table_for(parse_isa(env));
  }
  if (cpu_supports(Isa::kAvx2) && avx2_table() != nullptr) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) { current().store(table_for(isa), std::memory_order_relaxed); }

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { select(isa); }

ScopedIsa::~ScopedIsa() { select(previous_); }

}  // namespace stgfn::kernels
