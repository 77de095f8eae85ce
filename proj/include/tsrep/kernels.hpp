// Copyright 2026 The tsrep Authors.
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

namespace tsrep::kernels {

/// Flat fp64 array kernels used by the dense linear algebra layer.
///
/// Every entry has a scalar reference implementation and, where the target
/// CPU supports it, a SIMD variant (AVX2+FMA on x86-64, NEON on aarch64).
/// The variant is selected once at startup; elementwise kernels are
/// bit-identical to the scalar path, reductions may differ in the last few
/// ulps because the lane accumulators change the summation order.
struct Ops {
  const char* name;
  // dst[i] = a[i] + b[i]
  void (*add)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = a[i] - b[i]
  void (*sub)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = a[i] * b[i]
  void (*mul)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = c * a[i]
  void (*scale)(double* dst, const double* a, double c, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sumsq)(const double* a, std::size_t n);
  // sum_i w[i] * (a[i] - b[i])^2
  double (*wsqdiff)(const double* a, const double* b, const double* w,
                    std::size_t n);
};

enum class Isa { scalar, avx2, neon };

/// Kernel table chosen at startup: the best ISA the CPU supports, unless the
/// environment variable TSREP_KERNELS (scalar|avx2|neon|auto) forces a path.
const Ops& active();

const Ops& scalar_ops();

/// Table for a specific ISA, or nullptr when this build/CPU cannot run it.
const Ops* ops_for(Isa isa);

}  // namespace tsrep::kernels
