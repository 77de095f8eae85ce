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

#include "test_support.hpp"
#include "tsrep/rnn.hpp"

using namespace tsrep;
using namespace tsrep::nn;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Independent gate-by-gate scalar oracle for a batch row.
std::vector<double> gru_oracle(const CellParams& p,
                               const std::vector<double>& x,
                               const std::vector<double>& h) {
  const std::size_t d = p.hidden_size;
  auto gate = [&](std::size_t g, const std::vector<double>& hh) {
    std::vector<double> pre(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      double s = p.b[g](0, j);
      for (std::size_t i = 0; i < p.input_size; ++i)
        s += x[i] * p.w[g](i, j);
      for (std::size_t i = 0; i < d; ++i) s += hh[i] * p.u[g](i, j);
      pre[j] = s;
    }
    return pre;
  };
  std::vector<double> z = gate(0, h), r = gate(1, h);
  for (auto& v : z) v = sigmoid(v);
  for (auto& v : r) v = sigmoid(v);
  std::vector<double> rh(d);
  for (std::size_t i = 0; i < d; ++i) rh[i] = r[i] * h[i];
  std::vector<double> cand(d);
  for (std::size_t j = 0; j < d; ++j) {
    double s = p.b[2](0, j);
    for (std::size_t i = 0; i < p.input_size; ++i) s += x[i] * p.w[2](i, j);
    for (std::size_t i = 0; i < d; ++i) s += rh[i] * p.u[2](i, j);
    cand[j] = std::tanh(s);
  }
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j)
    out[j] = (1.0 - z[j]) * h[j] + z[j] * cand[j];
  return out;
}

}  // namespace

TEST_CASE("all-zero GRU maps zero state to zero") {
  CellParams p;
  p.kind = CellKind::gru;
  p.input_size = 3;
  p.hidden_size = 4;
  for (int g = 0; g < 3; ++g) {
    p.w.emplace_back(3, 4);
    p.u.emplace_back(4, 4);
    p.b.emplace_back(1, 4);
  }
  CellState prev;
  const CellState next = cell_step(p, Matrix(1, 3, 0.5), prev);
  for (std::size_t j = 0; j < 4; ++j) CHECK(next.h(0, j) == 0.0);
}

TEST_CASE("all-zero LSTM maps zero state to zero") {
  CellParams p;
  p.kind = CellKind::lstm;
  p.input_size = 2;
  p.hidden_size = 3;
  for (int g = 0; g < 4; ++g) {
    p.w.emplace_back(2, 3);
    p.u.emplace_back(3, 3);
    p.b.emplace_back(1, 3);
  }
  CellState prev;
  const CellState next = cell_step(p, Matrix(1, 2, 1.0), prev);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(next.h(0, j) == 0.0);
    CHECK(next.c(0, j) == 0.0);
  }
}

TEST_CASE("random GRU step matches the gate-by-gate oracle to 1e-12") {
  Rng rng(51);
  const CellParams p = CellParams::init(CellKind::gru, 3, 5, rng);
  Matrix x(1, 3);
  for (std::size_t i = 0; i < 3; ++i) x(0, i) = rng.normal();
  CellState prev;
  prev.h = Matrix(1, 5);
  for (std::size_t i = 0; i < 5; ++i) prev.h(0, i) = rng.normal();

  std::vector<double> xv{x(0, 0), x(0, 1), x(0, 2)};
  std::vector<double> hv(5);
  for (std::size_t i = 0; i < 5; ++i) hv[i] = prev.h(0, i);
  const auto want = gru_oracle(p, xv, hv);
  const CellState next = cell_step(p, x, prev);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(next.h(0, j) == doctest::Approx(want[j]).epsilon(1e-12));
}

TEST_CASE("random LSTM step matches a hand-computed transition") {
  Rng rng(52);
  const CellParams p = CellParams::init(CellKind::lstm, 2, 3, rng);
  Matrix x(1, 2);
  x(0, 0) = 0.4;
  x(0, 1) = -1.1;
  CellState prev;
  prev.h = Matrix(1, 3);
  prev.c = Matrix(1, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    prev.h(0, i) = rng.normal();
    prev.c(0, i) = rng.normal();
  }

  const CellState next = cell_step(p, x, prev);
  for (std::size_t j = 0; j < 3; ++j) {
    auto pre = [&](std::size_t g) {
      double s = p.b[g](0, j);
      for (std::size_t i = 0; i < 2; ++i) s += x(0, i) * p.w[g](i, j);
      for (std::size_t i = 0; i < 3; ++i) s += prev.h(0, i) * p.u[g](i, j);
      return s;
    };
    const double i_g = sigmoid(pre(0));
    const double f_g = sigmoid(pre(1));
    const double o_g = sigmoid(pre(2));
    const double g_g = std::tanh(pre(3));
    const double c = f_g * prev.c(0, j) + i_g * g_g;
    CHECK(next.c(0, j) == doctest::Approx(c).epsilon(1e-12));
    CHECK(next.h(0, j) == doctest::Approx(o_g * std::tanh(c)).epsilon(1e-12));
  }
}

TEST_CASE("initialization: bounds and the LSTM forget bias") {
  Rng rng(53);
  const CellParams gru = CellParams::init(CellKind::gru, 4, 6, rng);
  CHECK(gru.w.size() == 3);
  const double sw = 1.0 / std::sqrt(4.0);
  for (const auto& w : gru.w)
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w.data()[i] <= sw);
      CHECK(w.data()[i] >= -sw);
    }
  const CellParams lstm = CellParams::init(CellKind::lstm, 4, 6, rng);
  CHECK(lstm.w.size() == 4);
  for (std::size_t j = 0; j < 6; ++j) CHECK(lstm.b[1](0, j) == 1.0);

  CellParams bad = gru;
  CHECK_THROWS_AS(cell_step(bad, Matrix(1, 7, 0.0), CellState{}),
                  std::invalid_argument);
}
