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

#include "tsrep/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace tsrep::kernels {

namespace {

void add_scalar(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub_scalar(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void mul_scalar(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void scale_scalar(double* dst, const double* a, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = c * a[i];
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double sumsq_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double wsqdiff_scalar(const double* a, const double* b, const double* w,
                      std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += w[i] * d * d;
  }
  return s;
}

constexpr Ops kScalarOps = {
    "scalar",     add_scalar, sub_scalar,   mul_scalar,    scale_scalar,
    axpy_scalar,  dot_scalar, sum_scalar,   sumsq_scalar,  wsqdiff_scalar,
};

#if defined(__aarch64__)

void add_neon(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub_neon(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void mul_neon(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void scale_neon(double* dst, const double* a, double c, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), vc));
  for (; i < n; ++i) dst[i] = c * a[i];
}

void axpy_neon(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double sumsq_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(a + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double wsqdiff_neon(const double* a, const double* b, const double* w,
                    std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), d), d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += w[i] * d * d;
  }
  return s;
}

constexpr Ops kNeonOps = {
    "neon",    add_neon, sub_neon,   mul_neon,    scale_neon,
    axpy_neon, dot_neon, sum_neon,   sumsq_neon,  wsqdiff_neon,
};

#endif  // __aarch64__

const Ops* detect_best() {
#if defined(TSREP_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return ops_for(Isa::avx2);
#endif
#if defined(__aarch64__)
  return &kNeonOps;
#endif
  return &kScalarOps;
}

const Ops* select_from_env() {
  const char* env = std::getenv("TSREP_KERNELS");
  if (env != nullptr && std::strcmp(env, "auto") != 0) {
    if (std::strcmp(env, "scalar") == 0) return &kScalarOps;
    if (std::strcmp(env, "avx2") == 0) {
      if (const Ops* ops = ops_for(Isa::avx2)) return ops;
    }
    if (std::strcmp(env, "neon") == 0) {
      if (const Ops* ops = ops_for(Isa::neon)) return ops;
    }
    // Unknown or unsupported request falls through to detection.
  }
  return detect_best();
}

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops* ops_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalarOps;
    case Isa::avx2:
#if defined(TSREP_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_ops();
#endif
      return nullptr;
    case Isa::neon:
#if defined(__aarch64__)
      return &kNeonOps;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Ops& active() {
  static const Ops* selected = select_from_env();
  return *selected;
}

}  // namespace tsrep::kernels
