// Copyright 2026 The patcls Authors
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
#include <stdexcept>
#include <string>

#include "patcls/kernels.hpp"

namespace patcls::kernels {
namespace {

const KernelTable* best_supported() {
#if defined(PATCLS_HAVE_AVX2)
  if (supported(Isa::kAvx2)) return &avx2_table();
#endif
#if defined(PATCLS_HAVE_NEON)
  if (supported(Isa::kNeon)) return &neon_table();
#endif
  return &scalar_table();
}

const KernelTable* initial_table() {
  if (const char* forced = std::getenv("PATCLS_ISA")) {
    const std::string name(forced);
    for (Isa isa : available()) {
      if (isa_name(isa) == name) return &table(isa);
    }
    throw std::invalid_argument("PATCLS_ISA=" + name + " is not available on this host");
  }
  return best_supported();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(PATCLS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(PATCLS_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (supported(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) + "' is not supported here");
  }
  switch (isa) {
#if defined(PATCLS_HAVE_AVX2)
    case Isa::kAvx2: return avx2_table();
#endif
#if defined(PATCLS_HAVE_NEON)
    case Isa::kNeon: return neon_table();
#endif
    default: return scalar_table();
  }
}

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

void select(Isa isa) { active_slot().store(&table(isa), std::memory_order_relaxed); }

void gemm_nn(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n) {
  const KernelTable& kt = active();
  for (std::size_t i = 0; i < m; ++i) {
    float* crow = c + i * n;
    const float* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      if (arow[p] != 0.0f) kt.axpy(arow[p], b + p * n, crow, n);
    }
  }
}

void gemm_nt(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n) {
  const KernelTable& kt = active();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += kt.dot(a + i * k, b + j * k, k);
  }
}

void gemm_tn(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n) {
  const KernelTable& kt = active();
  for (std::size_t p = 0; p < k; ++p) {
    const float* arow = a + p * m;
    const float* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      if (arow[i] != 0.0f) kt.axpy(arow[i], brow, c + i * n, n);
    }
  }
}

}  // namespace patcls::kernels
