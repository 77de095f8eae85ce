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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tsrep/kernels.hpp"
#include "tsrep/rng.hpp"

using namespace tsrep;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Sizes that cover full SIMD lanes, remainders, and tiny inputs.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 33, 100, 1001};

}  // namespace

TEST_CASE("every available kernel table agrees with the scalar reference") {
  const kernels::Ops& ref = kernels::scalar_ops();
  std::vector<const kernels::Ops*> variants;
  for (const auto isa :
       {kernels::Isa::scalar, kernels::Isa::avx2, kernels::Isa::neon})
    if (const kernels::Ops* ops = kernels::ops_for(isa))
      variants.push_back(ops);
  CHECK(!variants.empty());

  Rng rng(7);
  for (const kernels::Ops* ops : variants) {
    INFO("variant ", ops->name);
    for (const std::size_t n : kSizes) {
      const auto a = random_vec(n, rng);
      const auto b = random_vec(n, rng);
      auto w = random_vec(n, rng);
      for (auto& x : w) x = std::abs(x);

      // Elementwise kernels are lane-independent: results are bit-exact.
      std::vector<double> got(n), want(n);
      ops->add(got.data(), a.data(), b.data(), n);
      ref.add(want.data(), a.data(), b.data(), n);
      CHECK(got == want);
      ops->sub(got.data(), a.data(), b.data(), n);
      ref.sub(want.data(), a.data(), b.data(), n);
      CHECK(got == want);
      ops->mul(got.data(), a.data(), b.data(), n);
      ref.mul(want.data(), a.data(), b.data(), n);
      CHECK(got == want);
      ops->scale(got.data(), a.data(), 1.7, n);
      ref.scale(want.data(), a.data(), 1.7, n);
      CHECK(got == want);

      // Reductions and fused updates may differ by accumulation order
      // (and FMA contraction), so compare to a tight relative tolerance.
      const double tol = 1e-13 * (1.0 + static_cast<double>(n));
      CHECK(ops->dot(a.data(), b.data(), n) ==
            doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(tol));
      CHECK(ops->sum(a.data(), n) ==
            doctest::Approx(ref.sum(a.data(), n)).epsilon(tol));
      CHECK(ops->sumsq(a.data(), n) ==
            doctest::Approx(ref.sumsq(a.data(), n)).epsilon(tol));
      CHECK(ops->wsqdiff(a.data(), b.data(), w.data(), n) ==
            doctest::Approx(ref.wsqdiff(a.data(), b.data(), w.data(), n))
                .epsilon(tol));

      std::vector<double> y1 = b, y2 = b;
      ops->axpy(y1.data(), 0.37, a.data(), n);
      ref.axpy(y2.data(), 0.37, a.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("scalar reference kernels compute the obvious things") {
  const kernels::Ops& ops = kernels::scalar_ops();
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, 5.0, 6.0};
  const double w[] = {1.0, 0.0, 2.0};
  CHECK(ops.dot(a, b, 3) == 32.0);
  CHECK(ops.sum(a, 3) == 6.0);
  CHECK(ops.sumsq(a, 3) == 14.0);
  // (1-4)^2*1 + 0 + (3-6)^2*2 = 9 + 18
  CHECK(ops.wsqdiff(a, b, w, 3) == 27.0);
}

TEST_CASE("active table is one of the registered variants") {
  const kernels::Ops& active = kernels::active();
  bool found = false;
  for (const auto isa :
       {kernels::Isa::scalar, kernels::Isa::avx2, kernels::Isa::neon})
    if (const kernels::Ops* ops = kernels::ops_for(isa))
      if (ops == &active) found = true;
  CHECK(found);
}
