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

#include "tsrep/tkae.hpp"

#include <cmath>
#include <stdexcept>

#include "tsrep/adam.hpp"
#include "tsrep/kernels.hpp"

namespace tsrep::nn {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void append_cell_params(std::vector<Matrix*>& out, CellParams& p) {
  for (auto& m : p.w) out.push_back(&m);
  for (auto& m : p.u) out.push_back(&m);
  for (auto& m : p.b) out.push_back(&m);
}

}  // namespace

TkaeModel TkaeModel::init(const TkaeArch& arch, Rng& rng) {
  if (arch.layers < 1 || arch.dz < 1 || arch.v < 1)
    throw std::invalid_argument("TkaeModel: bad architecture");
  TkaeModel m;
  m.arch = arch;
  for (std::size_t l = 0; l < arch.layers; ++l) {
    const std::size_t in = l == 0 ? arch.v : arch.dz;
    m.enc_fwd.push_back(CellParams::init(arch.cell, in, arch.dz, rng));
  }
  if (arch.bidirectional)
    for (std::size_t l = 0; l < arch.layers; ++l) {
      const std::size_t in = l == 0 ? arch.v : arch.dz;
      m.enc_bwd.push_back(CellParams::init(arch.cell, in, arch.dz, rng));
    }
  for (std::size_t l = 0; l < arch.layers; ++l) {
    const std::size_t in = l == 0 ? arch.v : arch.dz;
    m.dec.push_back(CellParams::init(arch.cell, in, arch.dz, rng));
  }
  const std::size_t combine_in = arch.bidirectional ? 2 * arch.dz : arch.dz;
  const double sc = 1.0 / std::sqrt(static_cast<double>(combine_in));
  m.combine_w = Matrix(combine_in, arch.dz);
  for (std::size_t i = 0; i < m.combine_w.size(); ++i)
    m.combine_w.data()[i] = rng.uniform(-sc, sc);
  m.combine_b = Matrix(1, arch.dz);
  const double so = 1.0 / std::sqrt(static_cast<double>(arch.dz));
  m.out_w = Matrix(arch.dz, arch.v);
  for (std::size_t i = 0; i < m.out_w.size(); ++i)
    m.out_w.data()[i] = rng.uniform(-so, so);
  m.out_b = Matrix(1, arch.v);
  m.scaler.mean.assign(arch.v, 0.0);
  m.scaler.stddev.assign(arch.v, 1.0);
  return m;
}

std::vector<Matrix*> TkaeModel::parameters() {
  std::vector<Matrix*> out;
  for (auto& c : enc_fwd) append_cell_params(out, c);
  for (auto& c : enc_bwd) append_cell_params(out, c);
  for (auto& c : dec) append_cell_params(out, c);
  out.push_back(&combine_w);
  out.push_back(&combine_b);
  out.push_back(&out_w);
  out.push_back(&out_b);
  return out;
}

std::vector<const Matrix*> TkaeModel::parameters() const {
  auto mutable_params = const_cast<TkaeModel*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

std::vector<const Matrix*> TkaeModel::penalized_weights() const {
  std::vector<const Matrix*> out;
  auto add_cell = [&](const CellParams& c) {
    for (const auto& m : c.w) out.push_back(&m);
    for (const auto& m : c.u) out.push_back(&m);
  };
  for (const auto& c : enc_fwd) add_cell(c);
  for (const auto& c : enc_bwd) add_cell(c);
  for (const auto& c : dec) add_cell(c);
  out.push_back(&combine_w);
  out.push_back(&out_w);
  return out;
}

Batch make_batch(const data::Dataset& ds,
                 const std::vector<std::size_t>& indices, std::size_t dz) {
  if (indices.empty()) throw std::invalid_argument("make_batch: empty batch");
  Batch b;
  b.size = indices.size();
  b.v = ds.v;
  for (std::size_t i : indices) {
    const auto& s = ds.samples[i];
    if (s.variates() != ds.v)
      throw std::invalid_argument("make_batch: variate mismatch");
    b.lengths.push_back(s.length);
    b.ids.push_back(s.id);
    b.t_max = std::max(b.t_max, s.length);
  }
  for (std::size_t len : b.lengths)
    if (len != b.t_max) b.uniform_length = false;

  b.x.assign(b.t_max, Matrix(b.size, b.v));
  b.obs_mask.assign(b.t_max, Matrix(b.size, b.v));
  if (!b.uniform_length) {
    b.len_mask_v.assign(b.t_max, Matrix(b.size, b.v));
    b.len_mask_h.assign(b.t_max, Matrix(b.size, dz));
  }
  for (std::size_t row = 0; row < indices.size(); ++row) {
    const auto& s = ds.samples[indices[row]];
    for (std::size_t t = 0; t < s.length; ++t) {
      for (std::size_t v = 0; v < b.v; ++v) {
        b.x[t](row, v) = s.values(v, t);
        b.obs_mask[t](row, v) = s.mask(v, t);
      }
      if (!b.uniform_length) {
        for (std::size_t v = 0; v < b.v; ++v) b.len_mask_v[t](row, v) = 1.0;
        for (std::size_t d = 0; d < dz; ++d) b.len_mask_h[t](row, d) = 1.0;
      }
    }
  }
  return b;
}

namespace {

struct TapeLeaves {
  std::vector<CellNodes> enc_fwd, enc_bwd, dec;
  Tape::NodeId combine_w = -1, combine_b = -1, out_w = -1, out_b = -1;
  std::vector<Tape::NodeId> flat;  // aligned with TkaeModel::parameters()
};

CellNodes register_cell_tracked(Tape& tape, const CellParams& p,
                                std::vector<Tape::NodeId>& flat) {
  CellNodes n = register_cell(tape, p);
  for (auto id : n.w) flat.push_back(id);
  for (auto id : n.u) flat.push_back(id);
  for (auto id : n.b) flat.push_back(id);
  return n;
}

TapeLeaves register_model(Tape& tape, const TkaeModel& m) {
  TapeLeaves l;
  for (const auto& c : m.enc_fwd)
    l.enc_fwd.push_back(register_cell_tracked(tape, c, l.flat));
  for (const auto& c : m.enc_bwd)
    l.enc_bwd.push_back(register_cell_tracked(tape, c, l.flat));
  for (const auto& c : m.dec)
    l.dec.push_back(register_cell_tracked(tape, c, l.flat));
  l.combine_w = tape.leaf(m.combine_w);
  l.combine_b = tape.leaf(m.combine_b);
  l.out_w = tape.leaf(m.out_w);
  l.out_b = tape.leaf(m.out_b);
  l.flat.push_back(l.combine_w);
  l.flat.push_back(l.combine_b);
  l.flat.push_back(l.out_w);
  l.flat.push_back(l.out_b);
  return l;
}

// Runs one encoder direction over the batch, freezing each sample's state
// once its own length is exhausted. Returns the final top-layer state.
Tape::NodeId run_encoder_direction(Tape& tape, const TkaeModel& model,
                                   const std::vector<CellNodes>& cells,
                                   const std::vector<CellParams>& params,
                                   const Batch& batch,
                                   const std::vector<Tape::NodeId>& x_nodes,
                                   const std::vector<Tape::NodeId>& m_nodes,
                                   const std::vector<Tape::NodeId>& im_nodes,
                                   bool forward) {
  const std::size_t layers = params.size();
  const bool lstm = model.arch.cell == CellKind::lstm;
  std::vector<CellStateNodes> states(layers);
  const Tape::NodeId zero_state =
      tape.constant(Matrix(batch.size, model.arch.dz));
  for (auto& st : states) {
    st.h = zero_state;
    if (lstm) st.c = zero_state;
  }

  for (std::size_t k = 0; k < batch.t_max; ++k) {
    const std::size_t t = forward ? k : batch.t_max - 1 - k;
    Tape::NodeId input = x_nodes[t];
    for (std::size_t l = 0; l < layers; ++l) {
      CellStateNodes next =
          cell_step_on_tape(tape, params[l], cells[l], input, states[l]);
      if (!batch.uniform_length) {
        // h = m . h_new + (1 - m) . h_old
        next.h = tape.add(tape.hadamard(next.h, m_nodes[t]),
                          tape.hadamard(states[l].h, im_nodes[t]));
        if (lstm)
          next.c = tape.add(tape.hadamard(next.c, m_nodes[t]),
                            tape.hadamard(states[l].c, im_nodes[t]));
      }
      states[l] = next;
      input = states[l].h;
    }
  }
  return states[layers - 1].h;
}

}  // namespace

LossParts tkae_batch_pass(const TkaeModel& model, const Batch& batch,
                          const ForwardSpec& spec,
                          std::vector<Matrix>* grads, Matrix* z_out,
                          std::vector<Matrix>* outputs) {
  if (batch.v != model.arch.v)
    throw std::invalid_argument("tkae_batch_pass: variate mismatch");
  if (spec.alpha > 0.0 && spec.k_batch == nullptr)
    throw std::invalid_argument("tkae_batch_pass: alpha > 0 without kernel");
  if (spec.generative.size() < batch.t_max)
    throw std::invalid_argument("tkae_batch_pass: missing sampling coins");

  Tape tape;
  const TapeLeaves leaves = register_model(tape, model);

  std::vector<Tape::NodeId> x_nodes(batch.t_max);
  std::vector<Tape::NodeId> m_nodes(batch.t_max, -1);
  std::vector<Tape::NodeId> im_nodes(batch.t_max, -1);
  for (std::size_t t = 0; t < batch.t_max; ++t) {
    x_nodes[t] = tape.constant(batch.x[t]);
    if (!batch.uniform_length) {
      m_nodes[t] = tape.constant(batch.len_mask_h[t]);
      Matrix inv(batch.size, model.arch.dz, 1.0);
      for (std::size_t i = 0; i < inv.size(); ++i)
        inv.data()[i] -= batch.len_mask_h[t].data()[i];
      im_nodes[t] = tape.constant(std::move(inv));
    }
  }

  // Encoder and combine layer.
  const Tape::NodeId hf =
      run_encoder_direction(tape, model, leaves.enc_fwd, model.enc_fwd,
                            batch, x_nodes, m_nodes, im_nodes, true);
  Tape::NodeId hcat = hf;
  if (model.arch.bidirectional) {
    const Tape::NodeId hb =
        run_encoder_direction(tape, model, leaves.enc_bwd, model.enc_bwd,
                              batch, x_nodes, m_nodes, im_nodes, false);
    hcat = tape.concat_cols(hf, hb);
  }
  const Tape::NodeId z = tape.tanh(
      tape.add_rowvec(tape.matmul(hcat, leaves.combine_w), leaves.combine_b));
  if (z_out != nullptr) *z_out = tape.value(z);

  LossParts parts;

  // Kernel alignment on the batch codes.
  Tape::NodeId align_node = -1;
  if (spec.alpha > 0.0) {
    const Matrix& kb = *spec.k_batch;
    if (kb.rows() != batch.size || kb.cols() != batch.size)
      throw std::invalid_argument("tkae_batch_pass: kernel block shape");
    const double k_norm = frobenius_norm(kb);
    const Tape::NodeId zzt = tape.matmul(z, tape.transpose(z));
    const double zzt_norm = frobenius_norm(tape.value(zzt));
    if (k_norm == 0.0 || zzt_norm == 0.0) {
      parts.align_degenerate = true;
      parts.align = kSqrt2;
    } else {
      const Tape::NodeId zn =
          tape.div_scalar(zzt, tape.sqrt(tape.sumsq(zzt)));
      const Tape::NodeId diff =
          tape.sub(zn, tape.constant(scale(kb, 1.0 / k_norm)));
      align_node = tape.sqrt(tape.sumsq(diff));
      parts.align = tape.value(align_node)(0, 0);
    }
  }

  // Decoder: h_0 = z on every layer, first input 0, scheduled sampling.
  const bool lstm = model.arch.cell == CellKind::lstm;
  std::vector<CellStateNodes> dstates(model.dec.size());
  const Tape::NodeId zero_cell =
      tape.constant(Matrix(batch.size, model.arch.dz));
  for (auto& st : dstates) {
    st.h = z;
    if (lstm) st.c = zero_cell;
  }

  if (outputs != nullptr) outputs->clear();
  Tape::NodeId recon_sum = -1;
  double weight_total = 0.0;
  Tape::NodeId prev_out = -1;
  const Tape::NodeId zero_in = tape.constant(Matrix(batch.size, batch.v));
  for (std::size_t t = 0; t < batch.t_max; ++t) {
    Tape::NodeId input;
    if (t == 0)
      input = zero_in;
    else if (spec.generative[t])
      input = prev_out;
    else
      input = x_nodes[t - 1];
    for (std::size_t l = 0; l < model.dec.size(); ++l) {
      dstates[l] = cell_step_on_tape(tape, model.dec[l], leaves.dec[l],
                                     input, dstates[l]);
      input = dstates[l].h;
    }
    const Tape::NodeId out_t = tape.add_rowvec(
        tape.matmul(dstates.back().h, leaves.out_w), leaves.out_b);
    prev_out = out_t;
    if (outputs != nullptr) outputs->push_back(tape.value(out_t));

    // Loss weights: inside the sample's own length, optionally only where
    // observed (Eq.-style masked reconstruction).
    Matrix w = spec.masked_loss ? batch.obs_mask[t]
                                : Matrix(batch.size, batch.v, 1.0);
    if (!batch.uniform_length) w = hadamard(w, batch.len_mask_v[t]);
    weight_total += sum(w);
    const Tape::NodeId err = tape.sub(out_t, x_nodes[t]);
    const Tape::NodeId term = tape.sum(
        tape.hadamard(tape.hadamard(err, err), tape.constant(std::move(w))));
    recon_sum = recon_sum < 0 ? term : tape.add(recon_sum, term);
  }

  Tape::NodeId recon_node = -1;
  if (weight_total > 0.0) {
    recon_node = tape.affine(recon_sum, 1.0 / weight_total, 0.0);
    parts.recon = tape.value(recon_node)(0, 0);
  } else {
    parts.recon_degenerate = true;
  }

  // l2 on weight matrices (biases excluded). The leaf order of
  // penalized_weights within parameters is stable, so find them by pointer.
  Tape::NodeId l2_node = -1;
  if (spec.lambda > 0.0) {
    const auto penalized = model.penalized_weights();
    auto params = model.parameters();
    for (const Matrix* w : penalized) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] == w) {
          const Tape::NodeId s = tape.sumsq(leaves.flat[i]);
          l2_node = l2_node < 0 ? s : tape.add(l2_node, s);
          break;
        }
      }
    }
    parts.l2 = tape.value(l2_node)(0, 0);
  }

  Tape::NodeId total = recon_node >= 0 ? recon_node : tape.scalar(0.0);
  if (l2_node >= 0) total = tape.add(total, tape.affine(l2_node, spec.lambda, 0.0));
  if (align_node >= 0)
    total = tape.add(total, tape.affine(align_node, spec.alpha, 0.0));
  parts.total = tape.value(total)(0, 0);

  if (grads != nullptr) {
    tape.backward(total);
    grads->clear();
    grads->reserve(leaves.flat.size());
    for (const Tape::NodeId id : leaves.flat) grads->push_back(tape.grad(id));
  }
  return parts;
}

namespace {

Batch single_sample_batch(const TkaeModel& model,
                          const data::MtsSample& sample) {
  data::Dataset tmp;
  tmp.v = sample.variates();
  tmp.samples.push_back(sample);
  return make_batch(tmp, {0}, model.arch.dz);
}

}  // namespace

Matrix encode(const TkaeModel& model, const data::MtsSample& sample) {
  data::Dataset tmp;
  tmp.v = sample.variates();
  tmp.samples.push_back(sample);
  return encode_dataset(model, tmp, 1);
}

Matrix encode_dataset(const TkaeModel& model, const data::Dataset& ds,
                      std::size_t batch_size) {
  if (ds.v != model.arch.v)
    throw std::invalid_argument("encode_dataset: variate mismatch");
  Matrix out(ds.size(), model.arch.dz);
  for (std::size_t start = 0; start < ds.size(); start += batch_size) {
    const std::size_t stop = std::min(ds.size(), start + batch_size);
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < stop; ++i) idx.push_back(i);
    const Batch batch = make_batch(ds, idx, model.arch.dz);

    Tape tape;
    const TapeLeaves leaves = register_model(tape, model);
    std::vector<Tape::NodeId> x_nodes(batch.t_max);
    std::vector<Tape::NodeId> m_nodes(batch.t_max, -1);
    std::vector<Tape::NodeId> im_nodes(batch.t_max, -1);
    for (std::size_t t = 0; t < batch.t_max; ++t) {
      x_nodes[t] = tape.constant(batch.x[t]);
      if (!batch.uniform_length) {
        m_nodes[t] = tape.constant(batch.len_mask_h[t]);
        Matrix inv(batch.size, model.arch.dz, 1.0);
        for (std::size_t i = 0; i < inv.size(); ++i)
          inv.data()[i] -= batch.len_mask_h[t].data()[i];
        im_nodes[t] = tape.constant(std::move(inv));
      }
    }
    const Tape::NodeId hf =
        run_encoder_direction(tape, model, leaves.enc_fwd, model.enc_fwd,
                              batch, x_nodes, m_nodes, im_nodes, true);
    Tape::NodeId hcat = hf;
    if (model.arch.bidirectional) {
      const Tape::NodeId hb =
          run_encoder_direction(tape, model, leaves.enc_bwd, model.enc_bwd,
                                batch, x_nodes, m_nodes, im_nodes, false);
      hcat = tape.concat_cols(hf, hb);
    }
    const Tape::NodeId z = tape.tanh(tape.add_rowvec(
        tape.matmul(hcat, leaves.combine_w), leaves.combine_b));
    const Matrix& zv = tape.value(z);
    for (std::size_t i = 0; i < batch.size; ++i)
      for (std::size_t d = 0; d < model.arch.dz; ++d)
        out(start + i, d) = zv(i, d);
  }
  return out;
}

std::pair<Matrix, Matrix> encode_states(const TkaeModel& model,
                                        const data::MtsSample& sample) {
  const Batch batch = single_sample_batch(model, sample);
  Tape tape;
  const TapeLeaves leaves = register_model(tape, model);
  std::vector<Tape::NodeId> x_nodes(batch.t_max);
  std::vector<Tape::NodeId> m_nodes(batch.t_max, -1);
  std::vector<Tape::NodeId> im_nodes(batch.t_max, -1);
  for (std::size_t t = 0; t < batch.t_max; ++t)
    x_nodes[t] = tape.constant(batch.x[t]);
  const Tape::NodeId hf =
      run_encoder_direction(tape, model, leaves.enc_fwd, model.enc_fwd,
                            batch, x_nodes, m_nodes, im_nodes, true);
  Matrix hb_val(1, model.arch.dz);
  if (model.arch.bidirectional) {
    const Tape::NodeId hb =
        run_encoder_direction(tape, model, leaves.enc_bwd, model.enc_bwd,
                              batch, x_nodes, m_nodes, im_nodes, false);
    hb_val = tape.value(hb);
  }
  return {tape.value(hf), hb_val};
}

Matrix decode(const TkaeModel& model, const Matrix& z, std::size_t t,
              double ps, const data::MtsSample* teacher, Rng& rng) {
  if (t < 1) throw std::invalid_argument("decode: t < 1");
  if (z.rows() != 1 || z.cols() != model.arch.dz)
    throw std::invalid_argument("decode: z must be 1 x dz");
  if (ps < 1.0 && teacher == nullptr)
    throw std::invalid_argument("decode: ps < 1 requires a teacher sample");

  Tape tape;
  const TapeLeaves leaves = register_model(tape, model);
  const bool lstm = model.arch.cell == CellKind::lstm;
  std::vector<CellStateNodes> states(model.dec.size());
  const Tape::NodeId z_node = tape.constant(z);
  const Tape::NodeId zero_cell = tape.constant(Matrix(1, model.arch.dz));
  for (auto& st : states) {
    st.h = z_node;
    if (lstm) st.c = zero_cell;
  }

  Matrix out(model.arch.v, t);
  Tape::NodeId prev_out = -1;
  const Tape::NodeId zero_in = tape.constant(Matrix(1, model.arch.v));
  for (std::size_t step = 0; step < t; ++step) {
    Tape::NodeId input;
    if (step == 0) {
      input = zero_in;
    } else if (ps >= 1.0 || rng.bernoulli(ps)) {
      input = prev_out;
    } else {
      Matrix teach(1, model.arch.v);
      for (std::size_t v = 0; v < model.arch.v; ++v)
        teach(0, v) = teacher->values(v, step - 1);
      input = tape.constant(std::move(teach));
    }
    for (std::size_t l = 0; l < model.dec.size(); ++l) {
      states[l] = cell_step_on_tape(tape, model.dec[l], leaves.dec[l], input,
                                    states[l]);
      input = states[l].h;
    }
    prev_out = tape.add_rowvec(tape.matmul(states.back().h, leaves.out_w),
                               leaves.out_b);
    const Matrix& ov = tape.value(prev_out);
    for (std::size_t v = 0; v < model.arch.v; ++v) out(v, step) = ov(0, v);
  }
  return out;
}

double loss_reconstruction(const Matrix& x, const Matrix& xhat,
                           const Matrix& mask, bool masked_mode,
                           bool* degenerate) {
  if (!x.same_shape(xhat) || !x.same_shape(mask))
    throw std::invalid_argument("loss_reconstruction: shape mismatch");
  if (degenerate != nullptr) *degenerate = false;
  const auto& k = kernels::active();
  if (!masked_mode) {
    Matrix ones(x.rows(), x.cols(), 1.0);
    return k.wsqdiff(x.data(), xhat.data(), ones.data(), x.size()) /
           static_cast<double>(x.size());
  }
  const double count = k.sum(mask.data(), mask.size());
  if (count == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  return k.wsqdiff(x.data(), xhat.data(), mask.data(), x.size()) / count;
}

double loss_alignment(const Matrix& z, const Matrix& k_batch,
                      bool* degenerate) {
  if (k_batch.rows() != z.rows() || k_batch.cols() != z.rows())
    throw std::invalid_argument("loss_alignment: kernel block shape");
  if (degenerate != nullptr) *degenerate = false;
  const Matrix zzt = matmul_nt(z, z);
  const double zn = frobenius_norm(zzt);
  const double kn = frobenius_norm(k_batch);
  if (zn == 0.0 || kn == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    return kSqrt2;
  }
  const Matrix diff = sub(scale(zzt, 1.0 / zn), scale(k_batch, 1.0 / kn));
  return frobenius_norm(diff);
}

TrainResult train(TkaeModel& model, const data::Dataset& data,
                  const tck::KernelMatrix* kernel, const TrainConfig& cfg) {
  if (cfg.alpha > 0.0 && kernel == nullptr)
    throw std::invalid_argument("train: alpha > 0 requires a kernel");
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");

  TrainResult result;
  Rng rng(cfg.seed);
  auto params = model.parameters();
  AdamState adam(params, {.lr = cfg.lr});

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng ep_rng = rng.derive(epoch);
    ep_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch);
      const std::vector<std::size_t> idx(order.begin() + start,
                                         order.begin() + stop);
      const Batch batch = make_batch(data, idx, model.arch.dz);

      ForwardSpec spec;
      spec.lambda = cfg.lambda;
      spec.alpha = cfg.alpha;
      spec.masked_loss = cfg.masked_loss;
      spec.generative.resize(batch.t_max);
      for (std::size_t t = 0; t < batch.t_max; ++t)
        spec.generative[t] = ep_rng.bernoulli(cfg.ps);
      Matrix k_batch;
      if (cfg.alpha > 0.0) {
        k_batch = kernel->gather(batch.ids);
        spec.k_batch = &k_batch;
      }

      std::vector<Matrix> grads;
      const LossParts parts = tkae_batch_pass(model, batch, spec, &grads);
      if (!std::isfinite(parts.total))
        throw std::runtime_error(
            "train: non-finite loss at epoch " + std::to_string(epoch) +
            " (recon " + std::to_string(parts.recon) + ", align " +
            std::to_string(parts.align) + ")");
      clip_global_norm(grads, cfg.clip_norm);
      if (!adam.step(params, grads)) ++result.skipped_steps;
      loss_sum += parts.total * static_cast<double>(idx.size());
    }
    result.epoch_loss.push_back(loss_sum /
                                static_cast<double>(order.size()));
  }
  return result;
}

Matrix reconstruct(const TkaeModel& model, const data::MtsSample& sample) {
  const Matrix z = encode(model, sample);
  Rng unused(0);
  return decode(model, z, sample.length, 1.0, nullptr, unused);
}

double reconstruction_error(const TkaeModel& model,
                            const data::MtsSample& sample) {
  const Matrix recon = reconstruct(model, sample);
  Matrix ones(sample.values.rows(), sample.values.cols(), 1.0);
  return loss_reconstruction(sample.values, recon, ones, false);
}

data::MtsSample impute_with_decoder(const TkaeModel& model,
                                    const data::MtsSample& sample) {
  const Matrix recon = reconstruct(model, sample);
  data::MtsSample out = sample;
  for (std::size_t v = 0; v < sample.variates(); ++v)
    for (std::size_t t = 0; t < sample.length; ++t)
      if (!sample.observed(v, t)) out.values(v, t) = recon(v, t);
  return out;
}

}  // namespace tsrep::nn
