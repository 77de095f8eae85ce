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

#include "tsrep/generators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsrep::data {

namespace {

MtsSample make_full_sample(std::int64_t id, Matrix values,
                           std::optional<int> label = std::nullopt) {
  MtsSample s;
  s.id = id;
  s.length = values.cols();
  s.mask = Matrix(values.rows(), values.cols(), 1.0);
  s.values = std::move(values);
  s.label = label;
  return s;
}

Dataset make_split(std::size_t v, const char* split) {
  Dataset ds;
  ds.v = v;
  ds.split = split;
  return ds;
}

}  // namespace

std::pair<Dataset, Dataset> gen_sines(const SineGenConfig& cfg) {
  if (cfg.t < 2) throw std::invalid_argument("gen_sines: t < 2");
  Rng rng(cfg.seed);
  const double dt = 100.0 / static_cast<double>(cfg.t - 1);

  auto gen = [&](Dataset& ds, std::size_t n, std::int64_t id0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rng.normal();
      const double b = rng.normal();
      Matrix values(1, cfg.t);
      for (std::size_t k = 0; k < cfg.t; ++k)
        values(0, k) = std::sin(a * (static_cast<double>(k) * dt) + b);
      ds.samples.push_back(
          make_full_sample(id0 + static_cast<std::int64_t>(i),
                           std::move(values)));
    }
  };

  Dataset train = make_split(1, "train");
  Dataset test = make_split(1, "test");
  gen(train, cfg.n_train, 0);
  gen(test, cfg.n_test, static_cast<std::int64_t>(cfg.n_train));
  return {std::move(train), std::move(test)};
}

OdeGenResult gen_ode(const OdeGenConfig& cfg) {
  if (cfg.v == 0 || cfg.t_min == 0 || cfg.t_min > cfg.t_max)
    throw std::invalid_argument("gen_ode: bad dimensions");
  Rng rng(cfg.seed);

  // Draw the system matrix; resample on (numerically) zero radius.
  Matrix a(cfg.v, cfg.v);
  double rho = 0.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const bool zero = rng.bernoulli(cfg.sparsity);
      const double val =
          rng.uniform(-cfg.element_range, cfg.element_range);
      a.data()[i] = zero ? 0.0 : val;
    }
    rho = spectral_radius(a, 1e-12);
    if (rho > 1e-9) break;
  }
  if (rho <= 1e-9)
    throw std::runtime_error("gen_ode: could not draw a usable A");
  a = scale(a, cfg.spectral_radius / rho);

  auto integrate = [&](std::size_t t_steps) {
    Matrix values(cfg.v, t_steps);
    std::vector<double> y(cfg.v);
    for (auto& yi : y) yi = rng.normal();
    for (std::size_t t = 0; t < t_steps; ++t) {
      for (std::size_t i = 0; i < cfg.v; ++i) values(i, t) = y[i];
      std::vector<double> dy(cfg.v, 0.0);
      for (std::size_t i = 0; i < cfg.v; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cfg.v; ++j)
          s += a(i, j) * std::tanh(y[j]);
        dy[i] = s;
      }
      for (std::size_t i = 0; i < cfg.v; ++i) y[i] += cfg.step * dy[i];
    }
    return values;
  };

  auto gen = [&](Dataset& ds, std::size_t n, std::int64_t id0) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t t = cfg.t_min;
      if (cfg.t_max > cfg.t_min)
        t = cfg.t_min + static_cast<std::size_t>(
                            rng.below(cfg.t_max - cfg.t_min + 1));
      ds.samples.push_back(make_full_sample(
          id0 + static_cast<std::int64_t>(i), integrate(t)));
    }
  };

  OdeGenResult out{make_split(cfg.v, "train"), make_split(cfg.v, "test"),
                   std::move(a)};
  gen(out.train, cfg.n_train, 0);
  gen(out.test, cfg.n_test, static_cast<std::int64_t>(cfg.n_train));
  return out;
}

std::pair<Dataset, Dataset> gen_classes(const ClassGenConfig& cfg) {
  if (cfg.n_classes == 0 || cfg.v == 0 || cfg.t_min < 2 ||
      cfg.t_min > cfg.t_max)
    throw std::invalid_argument("gen_classes: bad dimensions");
  Rng rng(cfg.seed);

  // Class-conditional mean curves over normalized time tau in [0, 1]:
  // mu_kv(tau) = a1 sin(w1 tau + p1) + a2 sin(w2 tau + p2).
  struct Tone {
    double a1, w1, p1, a2, w2, p2;
  };
  std::vector<std::vector<Tone>> curves(cfg.n_classes);
  for (auto& per_variate : curves) {
    per_variate.resize(cfg.v);
    for (auto& tone : per_variate) {
      tone.a1 = rng.uniform(0.6, 1.4);
      tone.w1 = rng.uniform(0.5, 3.0) * std::numbers::pi;
      tone.p1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
      tone.a2 = rng.uniform(0.2, 0.8);
      tone.w2 = rng.uniform(2.0, 6.0) * std::numbers::pi;
      tone.p2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
  }

  auto gen = [&](Dataset& ds, std::size_t n_total, std::int64_t id0) {
    const std::size_t per_class = n_total / cfg.n_classes;
    const std::size_t remainder = n_total % cfg.n_classes;
    std::int64_t id = id0;
    for (std::size_t k = 0; k < cfg.n_classes; ++k) {
      const std::size_t count = per_class + (k < remainder ? 1 : 0);
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t t = cfg.t_min;
        if (cfg.t_max > cfg.t_min)
          t = cfg.t_min + static_cast<std::size_t>(
                              rng.below(cfg.t_max - cfg.t_min + 1));
        Matrix values(cfg.v, t);
        for (std::size_t v = 0; v < cfg.v; ++v) {
          const Tone& tone = curves[k][v];
          for (std::size_t s = 0; s < t; ++s) {
            const double tau =
                static_cast<double>(s) / static_cast<double>(t - 1);
            const double mean =
                tone.a1 * std::sin(tone.w1 * tau + tone.p1) +
                tone.a2 * std::sin(tone.w2 * tau + tone.p2);
            values(v, s) = mean + cfg.noise * rng.normal();
          }
        }
        ds.samples.push_back(make_full_sample(
            id++, std::move(values), static_cast<int>(k)));
      }
    }
  };

  Dataset train = make_split(cfg.v, "train");
  Dataset test = make_split(cfg.v, "test");
  gen(train, cfg.n_train, 0);
  gen(test, cfg.n_test,
      static_cast<std::int64_t>(cfg.n_train));
  return {std::move(train), std::move(test)};
}

}  // namespace tsrep::data
