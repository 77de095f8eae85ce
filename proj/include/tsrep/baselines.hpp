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
#include <vector>

#include "tsrep/dataset.hpp"
#include "tsrep/matrix.hpp"
#include "tsrep/rng.hpp"

namespace tsrep::nn {

/// PCA over padded-and-unrolled sample rows, computed by eigendecomposition
/// of the covariance (or the Gram matrix when n < d).
struct PcaModel {
  std::vector<double> mean;       // per feature
  Matrix components;              // d_x x d_z, orthonormal columns
  std::vector<double> explained;  // eigenvalue per kept component
  bool rank_deficient = false;    // d_z exceeded the data rank
  data::Standardizer scaler;
  std::size_t t_pad = 0;          // unroll length the model was fit with
};

PcaModel pca_fit(const Matrix& rows, std::size_t dz);
Matrix pca_encode(const PcaModel& m, const Matrix& rows);
Matrix pca_reconstruct(const PcaModel& m, const Matrix& codes);
/// Mean reconstruction error per cell on `rows`.
double pca_reconstruction_mse(const PcaModel& m, const Matrix& rows);

/// Feed-forward autoencoder {d_x, hidden, d_z, hidden, d_x}. The code layer
/// is linear; the encoder hidden layer uses `hidden_act`; the decoder
/// hidden layer uses sigmoid or identity; the output is linear. Tied
/// weights share storage (decoder multiplies by transposes).
struct FfAeConfig {
  std::size_t d_x = 0;
  std::size_t dz = 10;
  std::size_t hidden = 30;
  enum class Act { linear, tanh, sigmoid };
  Act hidden_act = Act::tanh;
  Act decoder_act = Act::linear;
  bool tied = false;
};

struct FfAeModel {
  FfAeConfig cfg;
  Matrix w1, b1;  // d_x x hidden
  Matrix w2, b2;  // hidden x d_z
  Matrix w3, b3;  // d_z x hidden (unused storage when tied)
  Matrix w4, b4;  // hidden x d_x (unused storage when tied)
  data::Standardizer scaler;
  std::size_t t_pad = 0;

  static FfAeModel init(const FfAeConfig& cfg, Rng& rng);
  std::vector<Matrix*> parameters();
  Matrix encode(const Matrix& rows) const;
  Matrix forward(const Matrix& rows) const;
  double reconstruction_mse(const Matrix& rows) const;
};

struct FfTrainConfig {
  double lambda = 0.0;
  double lr = 1e-3;
  std::size_t batch = 32;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;
};

struct FfTrainResult {
  std::vector<double> epoch_loss;
  std::size_t skipped_steps = 0;
};

/// Plain reconstruction training: MSE + lambda * ||W||^2 via Adam.
FfTrainResult ffae_train(FfAeModel& model, const Matrix& rows,
                         const FfTrainConfig& cfg);

/// Denoising variant: every presented input has cells independently zeroed
/// with probability `corruption`; the loss targets the uncorrupted row.
/// corruption = 0 reproduces ffae_train exactly (same draw stream).
FfTrainResult dae_train(FfAeModel& model, const Matrix& rows,
                        double corruption, const FfTrainConfig& cfg);

/// Missing cells take the DAE reconstruction of the zero-imputed row;
/// observed cells are kept.
data::MtsSample dae_impute(const FfAeModel& model,
                           const data::MtsSample& sample);

}  // namespace tsrep::nn
