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
#include <optional>
#include <vector>

#include "tsrep/dataset.hpp"
#include "tsrep/rnn.hpp"
#include "tsrep/tck.hpp"

namespace tsrep::nn {

struct TkaeArch {
  CellKind cell = CellKind::lstm;
  std::size_t layers = 1;  // stacked layers M in encoder and decoder
  std::size_t dz = 10;     // representation size and cell width
  std::size_t v = 1;       // input variates
  bool bidirectional = true;
};

/// Recurrent autoencoder: stacked (optionally bidirectional) encoder, a
/// dense tanh combine layer producing the fixed-size code z, and a stacked
/// generative decoder initialized with h_0 = z, x_0 = 0, closed by a linear
/// output projection. The unidirectional single-layer configuration with no
/// kernel alignment is the EncDec-AD setup.
struct TkaeModel {
  TkaeArch arch;
  std::vector<CellParams> enc_fwd;
  std::vector<CellParams> enc_bwd;  // empty when not bidirectional
  std::vector<CellParams> dec;
  Matrix combine_w;  // (dz or 2*dz) x dz
  Matrix combine_b;  // 1 x dz
  Matrix out_w;      // dz x v
  Matrix out_b;      // 1 x v
  data::Standardizer scaler;  // persisted so model files are self-contained

  static TkaeModel init(const TkaeArch& arch, Rng& rng);

  /// All trainable matrices in a fixed order (cells gate-major, then
  /// combine, then projection).
  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;
  /// The l2-penalized subset: weight matrices only, biases excluded.
  std::vector<const Matrix*> penalized_weights() const;
};

struct TrainConfig {
  double lambda = 0.0;  // l2 penalty weight
  double alpha = 0.0;   // kernel alignment weight
  double ps = 1.0;      // scheduled sampling: P(feed own previous output)
  double lr = 1e-3;
  std::size_t batch = 32;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
  bool masked_loss = false;  // restrict the reconstruction loss to mask=1
  double clip_norm = 5.0;
};

/// Mini-batch tensors in time-major layout (one B x V matrix per step).
struct Batch {
  std::size_t size = 0;
  std::size_t v = 0;
  std::size_t t_max = 0;
  bool uniform_length = true;
  std::vector<std::size_t> lengths;
  std::vector<std::int64_t> ids;
  std::vector<Matrix> x;          // values as fed (imputed)
  std::vector<Matrix> obs_mask;   // observation masks
  std::vector<Matrix> len_mask_v; // 1 while t < length, B x V
  std::vector<Matrix> len_mask_h; // same, B x dz (state freezing)
};

Batch make_batch(const data::Dataset& ds,
                 const std::vector<std::size_t>& indices, std::size_t dz);

struct LossParts {
  double total = 0.0;
  double recon = 0.0;
  double l2 = 0.0;
  double align = 0.0;
  bool recon_degenerate = false;  // all-zero loss mask
  bool align_degenerate = false;  // zero Frobenius norm on either side
};

struct ForwardSpec {
  double lambda = 0.0;
  double alpha = 0.0;
  bool masked_loss = false;
  // Per-step scheduled-sampling coins, true = feed the model's own previous
  // output. Must cover [0, t_max); index 0 is unused (first input is 0).
  std::vector<bool> generative;
  const Matrix* k_batch = nullptr;  // required when alpha > 0
};

/// Full forward pass (encoder, combine, decoder, composite loss) with an
/// optional backward pass. `grads` (when non-null) receives d loss / d p
/// aligned with TkaeModel::parameters(). Optional taps: the code matrix Z
/// and the per-step decoder outputs.
LossParts tkae_batch_pass(const TkaeModel& model, const Batch& batch,
                          const ForwardSpec& spec,
                          std::vector<Matrix>* grads,
                          Matrix* z_out = nullptr,
                          std::vector<Matrix>* outputs = nullptr);

/// Fixed-size code of one sample (1 x dz).
Matrix encode(const TkaeModel& model, const data::MtsSample& sample);
/// Codes for a whole dataset, one row per sample in dataset order.
Matrix encode_dataset(const TkaeModel& model, const data::Dataset& ds,
                      std::size_t batch_size = 64);
/// Final forward/backward encoder states of one sample (pre-combine).
std::pair<Matrix, Matrix> encode_states(const TkaeModel& model,
                                        const data::MtsSample& sample);

/// Decode T steps from a code z (1 x dz). With ps < 1 a teacher sample is
/// required; ps = 1 is fully generative and deterministic.
Matrix decode(const TkaeModel& model, const Matrix& z, std::size_t t,
              double ps, const data::MtsSample* teacher, Rng& rng);

/// Reconstruction loss on one sample. masked_mode false: plain MSE over all
/// cells. masked_mode true: sum of masked squared errors over the mask
/// count. An all-zero mask returns 0 and sets the flag.
double loss_reconstruction(const Matrix& x, const Matrix& xhat,
                           const Matrix& mask, bool masked_mode,
                           bool* degenerate = nullptr);

/// || ZZ^T/||ZZ^T||_F - K/||K||_F ||_F. Degenerate batches (zero norm on
/// either side) return sqrt(2) and set the flag.
double loss_alignment(const Matrix& z, const Matrix& k_batch,
                      bool* degenerate = nullptr);

struct TrainResult {
  std::vector<double> epoch_loss;
  std::size_t skipped_steps = 0;  // non-finite gradients reported by Adam
};

/// Mini-batch Adam training of the composite loss. Requires `kernel` when
/// cfg.alpha > 0 (the batch sub-blocks are gathered from it by sample id,
/// never recomputed). Deterministic per seed. Throws on non-finite loss.
TrainResult train(TkaeModel& model, const data::Dataset& data,
                  const tck::KernelMatrix* kernel, const TrainConfig& cfg);

/// Fully generative reconstruction (ps = 1), V x T.
Matrix reconstruct(const TkaeModel& model, const data::MtsSample& sample);
/// MSE between a sample (as fed) and its generative reconstruction.
double reconstruction_error(const TkaeModel& model,
                            const data::MtsSample& sample);
/// Copies the sample, replacing missing cells with the decoder's
/// reconstruction; observed cells are kept verbatim.
data::MtsSample impute_with_decoder(const TkaeModel& model,
                                    const data::MtsSample& sample);

}  // namespace tsrep::nn
