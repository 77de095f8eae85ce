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

#include <cstdint>
#include <utility>

#include "tsrep/dataset.hpp"

namespace tsrep::data {

/// Univariate sinusoids y(t) = sin(a*t + b), a and b standard normal per
/// sample, sampled on `t` equally spaced points over [0, 100].
struct SineGenConfig {
  std::size_t n_train = 200;
  std::size_t n_test = 1000;
  std::size_t t = 100;
  std::uint64_t seed = 0;
};

std::pair<Dataset, Dataset> gen_sines(const SineGenConfig& cfg);

/// Trajectories of dy/dt = A tanh(y) integrated with forward Euler
/// (step 0.1, one recorded value per step starting at y(0) ~ N(0, I)).
/// A has the configured sparsity, uniform entries, and is rescaled to the
/// target spectral radius. Fixed length when t_min == t_max, otherwise
/// lengths are drawn uniformly from [t_min, t_max] per sample.
struct OdeGenConfig {
  std::size_t v = 10;
  std::size_t t_min = 90;
  std::size_t t_max = 90;
  std::size_t n_train = 400;
  std::size_t n_test = 1000;
  double sparsity = 0.5;          // probability an entry of A is zero
  double element_range = 0.5;     // entries uniform in [-range, range]
  double spectral_radius = 0.8;
  double step = 0.1;
  std::uint64_t seed = 0;
};

struct OdeGenResult {
  Dataset train;
  Dataset test;
  Matrix a;  // the rescaled system matrix actually used
};

OdeGenResult gen_ode(const OdeGenConfig& cfg);

/// Labeled set drawn from class-conditional Gaussians: each class has
/// per-variate smooth mean curves (random two-tone sinusoids on normalized
/// time), samples add i.i.d. Gaussian noise. Lengths uniform in
/// [t_min, t_max]. Classes are balanced in both splits.
struct ClassGenConfig {
  std::size_t n_classes = 9;
  std::size_t v = 12;
  std::size_t t_min = 15;
  std::size_t t_max = 25;
  std::size_t n_train = 270;  // remainders spread over the first classes
  std::size_t n_test = 270;
  double noise = 0.4;
  std::uint64_t seed = 0;
};

std::pair<Dataset, Dataset> gen_classes(const ClassGenConfig& cfg);

}  // namespace tsrep::data
