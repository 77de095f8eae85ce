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

#include "tsrep/rnn.hpp"

#include <cmath>
#include <stdexcept>

namespace tsrep::nn {

CellParams CellParams::init(CellKind kind, std::size_t input_size,
                            std::size_t hidden_size, Rng& rng) {
  CellParams p;
  p.kind = kind;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  const std::size_t gates = gate_count(kind);
  const double sw = 1.0 / std::sqrt(static_cast<double>(input_size));
  const double su = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  for (std::size_t g = 0; g < gates; ++g) {
    Matrix w(input_size, hidden_size);
    for (std::size_t i = 0; i < w.size(); ++i)
      w.data()[i] = rng.uniform(-sw, sw);
    Matrix u(hidden_size, hidden_size);
    for (std::size_t i = 0; i < u.size(); ++i)
      u.data()[i] = rng.uniform(-su, su);
    Matrix b(1, hidden_size);
    if (kind == CellKind::lstm && g == 1)  // forget gate opens at start
      for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = 1.0;
    p.w.push_back(std::move(w));
    p.u.push_back(std::move(u));
    p.b.push_back(std::move(b));
  }
  return p;
}

CellNodes register_cell(Tape& tape, const CellParams& p) {
  CellNodes n;
  for (const auto& m : p.w) n.w.push_back(tape.leaf(m));
  for (const auto& m : p.u) n.u.push_back(tape.leaf(m));
  for (const auto& m : p.b) n.b.push_back(tape.leaf(m));
  return n;
}

namespace {

// x W_g + h U_g + b_g for gate g.
Tape::NodeId gate_preact(Tape& tape, const CellNodes& n, std::size_t g,
                         Tape::NodeId x, Tape::NodeId h) {
  const auto xw = tape.matmul(x, n.w[g]);
  const auto hu = tape.matmul(h, n.u[g]);
  return tape.add_rowvec(tape.add(xw, hu), n.b[g]);
}

}  // namespace

CellStateNodes cell_step_on_tape(Tape& tape, const CellParams& p,
                                 const CellNodes& nodes, Tape::NodeId x_t,
                                 const CellStateNodes& prev) {
  if (tape.value(x_t).cols() != p.input_size)
    throw std::invalid_argument("cell_step: input size mismatch");
  if (tape.value(prev.h).cols() != p.hidden_size)
    throw std::invalid_argument("cell_step: state size mismatch");

  if (p.kind == CellKind::gru) {
    const auto z = tape.sigmoid(gate_preact(tape, nodes, 0, x_t, prev.h));
    const auto r = tape.sigmoid(gate_preact(tape, nodes, 1, x_t, prev.h));
    const auto rh = tape.hadamard(r, prev.h);
    const auto cand = tape.tanh(tape.add_rowvec(
        tape.add(tape.matmul(x_t, nodes.w[2]), tape.matmul(rh, nodes.u[2])),
        nodes.b[2]));
    // h' = (1 - z) . h + z . cand
    const auto keep = tape.hadamard(tape.affine(z, -1.0, 1.0), prev.h);
    CellStateNodes next;
    next.h = tape.add(keep, tape.hadamard(z, cand));
    return next;
  }

  const auto i = tape.sigmoid(gate_preact(tape, nodes, 0, x_t, prev.h));
  const auto f = tape.sigmoid(gate_preact(tape, nodes, 1, x_t, prev.h));
  const auto o = tape.sigmoid(gate_preact(tape, nodes, 2, x_t, prev.h));
  const auto g = tape.tanh(gate_preact(tape, nodes, 3, x_t, prev.h));
  CellStateNodes next;
  next.c = tape.add(tape.hadamard(f, prev.c), tape.hadamard(i, g));
  next.h = tape.hadamard(o, tape.tanh(next.c));
  return next;
}

CellState cell_step(const CellParams& p, const Matrix& x_t,
                    const CellState& prev) {
  Tape tape;
  CellNodes nodes = register_cell(tape, p);
  const std::size_t batch = x_t.rows();
  CellStateNodes prev_nodes;
  prev_nodes.h = tape.constant(
      prev.h.empty() ? Matrix(batch, p.hidden_size) : prev.h);
  if (p.kind == CellKind::lstm)
    prev_nodes.c = tape.constant(
        prev.c.empty() ? Matrix(batch, p.hidden_size) : prev.c);
  const auto x = tape.constant(x_t);
  const CellStateNodes next = cell_step_on_tape(tape, p, nodes, x, prev_nodes);
  CellState out;
  out.h = tape.value(next.h);
  if (p.kind == CellKind::lstm) out.c = tape.value(next.c);
  return out;
}

}  // namespace tsrep::nn
