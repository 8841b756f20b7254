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

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace patcls::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// One implementation set of the data-parallel primitives every tensor op is
// built from. The scalar table is the reference; vector tables must agree
// with it to rounding (summation order differs).
struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  float (*dot)(const float* a, const float* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(float alpha, const float* x, float* y, std::size_t n);
  // out = a + b
  void (*add)(const float* a, const float* b, float* out, std::size_t n);
  // out = a * b
  void (*mul)(const float* a, const float* b, float* out, std::size_t n);
  // x *= alpha
  void (*scale)(float alpha, float* x, std::size_t n);
  // out = max(x, 0)
  void (*relu)(const float* x, float* out, std::size_t n);
  // sum_i x[i], accumulated in double
  double (*sum)(const float* x, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(PATCLS_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(PATCLS_HAVE_NEON)
const KernelTable& neon_table();
#endif

// True when the ISA was compiled in and the host CPU can run it.
bool supported(Isa isa);

// Every ISA usable on this host, scalar first.
std::vector<Isa> available();

// Table for a specific ISA; throws std::invalid_argument if unsupported.
const KernelTable& table(Isa isa);

// The table used by tensor ops. Chosen once from the best supported ISA,
// unless PATCLS_ISA=scalar|avx2|neon overrides it.
const KernelTable& active();

// Switch the active table (tests, benchmarks). Not synchronized with
// in-flight tensor ops.
void select(Isa isa);

// Row-major dense products built on the active table. All accumulate into c.
// c[m,n] += a[m,k] * b[k,n]
void gemm_nn(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n);
// c[m,n] += a[m,k] * b[n,k]^T
void gemm_nt(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n);
// c[m,n] += a[k,m]^T * b[k,n]
void gemm_tn(const float* a, const float* b, float* c, std::size_t m, std::size_t k, std::size_t n);

}  // namespace patcls::kernels
