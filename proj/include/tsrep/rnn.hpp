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

#include <vector>

#include "tsrep/matrix.hpp"
#include "tsrep/rng.hpp"
#include "tsrep/tape.hpp"

namespace tsrep::nn {

enum class CellKind { gru, lstm };

/// Gate parameters of one recurrent layer. Inputs are batches with one row
/// per sample. Gate order: GRU {update, reset, candidate}; LSTM {input,
/// forget, output, candidate}.
///
/// GRU transition:  h' = (1 - z) . h + z . tanh(x Wc + (r . h) Uc + bc)
/// LSTM transition: c' = f . c + i . tanh(x Wg + h Ug + bg),
///                  h' = o . tanh(c')
struct CellParams {
  CellKind kind = CellKind::gru;
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  std::vector<Matrix> w;  // per gate: input_size x hidden_size
  std::vector<Matrix> u;  // per gate: hidden_size x hidden_size
  std::vector<Matrix> b;  // per gate: 1 x hidden_size

  static std::size_t gate_count(CellKind kind) {
    return kind == CellKind::gru ? 3 : 4;
  }

  /// Uniform [-s, s] with s = 1/sqrt(fan-in); LSTM forget-gate bias 1.
  static CellParams init(CellKind kind, std::size_t input_size,
                         std::size_t hidden_size, Rng& rng);
};

struct CellState {
  Matrix h;
  Matrix c;  // empty for GRU
};

/// Parameter leaves of one cell registered on a tape.
struct CellNodes {
  std::vector<Tape::NodeId> w, u, b;
};

struct CellStateNodes {
  Tape::NodeId h = -1;
  Tape::NodeId c = -1;
};

CellNodes register_cell(Tape& tape, const CellParams& p);

/// One recurrent transition on the tape. x_t is a batch (B x input_size),
/// states are B x hidden_size.
CellStateNodes cell_step_on_tape(Tape& tape, const CellParams& p,
                                 const CellNodes& nodes, Tape::NodeId x_t,
                                 const CellStateNodes& prev);

/// Value-level transition (no gradients). Shapes as above; empty prev
/// states are treated as zeros.
CellState cell_step(const CellParams& p, const Matrix& x_t,
                    const CellState& prev);

}  // namespace tsrep::nn
