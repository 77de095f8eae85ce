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

#include "tsrep/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "tsrep/adam.hpp"
#include "tsrep/tape.hpp"

namespace tsrep::nn {

namespace {

Matrix center_rows(const Matrix& rows, const std::vector<double>& mean) {
  Matrix out = rows;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) -= mean[j];
  return out;
}

// Extends `components` (d x k, orthonormal columns) to d columns total with
// arbitrary orthonormal directions via Gram-Schmidt over unit vectors.
void complete_basis(Matrix& components, std::size_t want) {
  const std::size_t d = components.rows();
  std::size_t have = 0;
  Matrix full(d, want);
  for (std::size_t j = 0; j < components.cols() && have < want; ++j, ++have)
    for (std::size_t i = 0; i < d; ++i) full(i, have) = components(i, j);
  for (std::size_t e = 0; e < d && have < want; ++e) {
    std::vector<double> v(d, 0.0);
    v[e] = 1.0;
    for (std::size_t j = 0; j < have; ++j) {
      double proj = 0.0;
      for (std::size_t i = 0; i < d; ++i) proj += v[i] * full(i, j);
      for (std::size_t i = 0; i < d; ++i) v[i] -= proj * full(i, j);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (std::size_t i = 0; i < d; ++i) full(i, have) = v[i] / norm;
    ++have;
  }
  components = std::move(full);
}

}  // namespace

PcaModel pca_fit(const Matrix& rows, std::size_t dz) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  if (n == 0 || d == 0) throw std::invalid_argument("pca_fit: empty data");
  if (dz == 0 || dz > d)
    throw std::invalid_argument("pca_fit: d_z must be in [1, d_x]");

  PcaModel m;
  m.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) m.mean[j] += rows(i, j);
  for (double& v : m.mean) v /= static_cast<double>(n);
  const Matrix xc = center_rows(rows, m.mean);

  const double rank_tol = 1e-10;
  std::vector<double> values;
  Matrix directions;
  if (d <= n) {
    const Matrix cov = scale(matmul_tn(xc, xc), 1.0 / static_cast<double>(n));
    const SymmetricEigen eig = eigen_symmetric(cov);
    values = eig.values;
    directions = eig.vectors;  // columns already in feature space
  } else {
    // Gram trick: eigenvectors u of X X^T/n map to directions
    // X^T u / sqrt(n * lambda).
    const Matrix gram =
        scale(matmul_nt(xc, xc), 1.0 / static_cast<double>(n));
    const SymmetricEigen eig = eigen_symmetric(gram);
    values = eig.values;
    directions = Matrix(d, eig.values.size());
    for (std::size_t j = 0; j < eig.values.size(); ++j) {
      if (eig.values[j] <= rank_tol) break;
      const double inv = 1.0 / std::sqrt(static_cast<double>(n) *
                                         eig.values[j]);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = eig.vectors(i, j);
        for (std::size_t f = 0; f < d; ++f)
          directions(f, j) += xc(i, f) * u * inv;
      }
    }
  }

  std::size_t usable = 0;
  for (std::size_t j = 0; j < values.size() && j < dz; ++j)
    if (values[j] > rank_tol) ++usable;

  m.components = Matrix(d, usable);
  m.explained.assign(dz, 0.0);
  for (std::size_t j = 0; j < usable; ++j) {
    m.explained[j] = values[j];
    for (std::size_t i = 0; i < d; ++i)
      m.components(i, j) = directions(i, j);
  }
  if (usable < dz) {
    m.rank_deficient = true;  // trailing directions arbitrary orthonormal
    complete_basis(m.components, dz);
  }
  return m;
}

Matrix pca_encode(const PcaModel& m, const Matrix& rows) {
  if (rows.cols() != m.mean.size())
    throw std::invalid_argument("pca_encode: feature mismatch");
  return matmul(center_rows(rows, m.mean), m.components);
}

Matrix pca_reconstruct(const PcaModel& m, const Matrix& codes) {
  Matrix out = matmul(codes, transpose(m.components));
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += m.mean[j];
  return out;
}

double pca_reconstruction_mse(const PcaModel& m, const Matrix& rows) {
  const Matrix recon = pca_reconstruct(m, pca_encode(m, rows));
  const Matrix diff = sub(rows, recon);
  return sumsq(diff) / static_cast<double>(diff.size());
}

FfAeModel FfAeModel::init(const FfAeConfig& cfg, Rng& rng) {
  if (cfg.d_x == 0 || cfg.dz == 0 || cfg.hidden == 0)
    throw std::invalid_argument("FfAeModel: bad layer sizes");
  FfAeModel m;
  m.cfg = cfg;
  auto uniform_init = [&rng](std::size_t r, std::size_t c) {
    Matrix w(r, c);
    const double s = 1.0 / std::sqrt(static_cast<double>(r));
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-s, s);
    return w;
  };
  m.w1 = uniform_init(cfg.d_x, cfg.hidden);
  m.b1 = Matrix(1, cfg.hidden);
  m.w2 = uniform_init(cfg.hidden, cfg.dz);
  m.b2 = Matrix(1, cfg.dz);
  if (!cfg.tied) {
    m.w3 = uniform_init(cfg.dz, cfg.hidden);
    m.w4 = uniform_init(cfg.hidden, cfg.d_x);
  }
  m.b3 = Matrix(1, cfg.hidden);
  m.b4 = Matrix(1, cfg.d_x);
  m.scaler.mean.assign(1, 0.0);
  m.scaler.stddev.assign(1, 1.0);
  return m;
}

std::vector<Matrix*> FfAeModel::parameters() {
  std::vector<Matrix*> out{&w1, &b1, &w2, &b2};
  if (!cfg.tied) {
    out.push_back(&w3);
    out.push_back(&w4);
  }
  out.push_back(&b3);
  out.push_back(&b4);
  return out;
}

namespace {

Tape::NodeId apply_act(Tape& tape, Tape::NodeId x, FfAeConfig::Act act) {
  switch (act) {
    case FfAeConfig::Act::linear:
      return x;
    case FfAeConfig::Act::tanh:
      return tape.tanh(x);
    case FfAeConfig::Act::sigmoid:
      return tape.sigmoid(x);
  }
  return x;
}

struct FfLeaves {
  Tape::NodeId w1, b1, w2, b2, w3, b3, w4, b4;
  std::vector<Tape::NodeId> flat;
};

FfLeaves register_ffae(Tape& tape, const FfAeModel& m) {
  FfLeaves l{};
  l.w1 = tape.leaf(m.w1);
  l.b1 = tape.leaf(m.b1);
  l.w2 = tape.leaf(m.w2);
  l.b2 = tape.leaf(m.b2);
  l.flat = {l.w1, l.b1, l.w2, l.b2};
  if (!m.cfg.tied) {
    l.w3 = tape.leaf(m.w3);
    l.w4 = tape.leaf(m.w4);
    l.flat.push_back(l.w3);
    l.flat.push_back(l.w4);
  } else {
    l.w3 = tape.transpose(l.w2);
    l.w4 = tape.transpose(l.w1);
  }
  l.b3 = tape.leaf(m.b3);
  l.b4 = tape.leaf(m.b4);
  l.flat.push_back(l.b3);
  l.flat.push_back(l.b4);
  return l;
}

Tape::NodeId ffae_forward_on_tape(Tape& tape, const FfAeModel& m,
                                  const FfLeaves& l, Tape::NodeId x) {
  const auto h1 = apply_act(
      tape, tape.add_rowvec(tape.matmul(x, l.w1), l.b1), m.cfg.hidden_act);
  const auto z = tape.add_rowvec(tape.matmul(h1, l.w2), l.b2);
  const auto h2 = apply_act(
      tape, tape.add_rowvec(tape.matmul(z, l.w3), l.b3), m.cfg.decoder_act);
  return tape.add_rowvec(tape.matmul(h2, l.w4), l.b4);
}

}  // namespace

Matrix FfAeModel::encode(const Matrix& rows) const {
  Tape tape;
  const FfLeaves l = register_ffae(tape, *this);
  const auto x = tape.constant(rows);
  const auto h1 = apply_act(
      tape, tape.add_rowvec(tape.matmul(x, l.w1), l.b1), cfg.hidden_act);
  return tape.value(tape.add_rowvec(tape.matmul(h1, l.w2), l.b2));
}

Matrix FfAeModel::forward(const Matrix& rows) const {
  Tape tape;
  const FfLeaves l = register_ffae(tape, *this);
  return tape.value(ffae_forward_on_tape(tape, *this, l, tape.constant(rows)));
}

double FfAeModel::reconstruction_mse(const Matrix& rows) const {
  const Matrix recon = forward(rows);
  const Matrix diff = sub(rows, recon);
  return sumsq(diff) / static_cast<double>(diff.size());
}

FfTrainResult dae_train(FfAeModel& model, const Matrix& rows,
                        double corruption, const FfTrainConfig& cfg) {
  if (corruption < 0.0 || corruption > 1.0)
    throw std::invalid_argument("dae_train: corruption outside [0, 1]");
  if (rows.cols() != model.cfg.d_x)
    throw std::invalid_argument("dae_train: feature mismatch");
  const std::size_t n = rows.rows();
  if (n == 0) throw std::invalid_argument("dae_train: empty data");

  FfTrainResult result;
  Rng rng(cfg.seed);
  auto params = model.parameters();
  AdamState adam(params, {.lr = cfg.lr});

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng ep_rng = rng.derive(epoch);
    ep_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch) {
      const std::size_t stop = std::min(n, start + cfg.batch);
      const std::size_t b = stop - start;
      Matrix target(b, model.cfg.d_x);
      for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < model.cfg.d_x; ++j)
          target(i, j) = rows(order[start + i], j);
      Matrix input = target;
      if (corruption > 0.0)
        for (std::size_t i = 0; i < input.size(); ++i)
          if (ep_rng.bernoulli(corruption)) input.data()[i] = 0.0;

      Tape tape;
      const FfLeaves leaves = register_ffae(tape, model);
      const auto recon =
          ffae_forward_on_tape(tape, model, leaves, tape.constant(input));
      const auto err = tape.sub(recon, tape.constant(target));
      Tape::NodeId loss = tape.affine(
          tape.sumsq(err), 1.0 / static_cast<double>(target.size()), 0.0);
      if (cfg.lambda > 0.0) {
        Tape::NodeId l2 = tape.add(tape.sumsq(leaves.w1),
                                   tape.sumsq(leaves.w2));
        if (!model.cfg.tied) {
          l2 = tape.add(l2, tape.sumsq(leaves.w3));
          l2 = tape.add(l2, tape.sumsq(leaves.w4));
        }
        loss = tape.add(loss, tape.affine(l2, cfg.lambda, 0.0));
      }
      const double loss_value = tape.value(loss)(0, 0);
      if (!std::isfinite(loss_value))
        throw std::runtime_error("dae_train: non-finite loss at epoch " +
                                 std::to_string(epoch));
      tape.backward(loss);
      std::vector<Matrix> grads;
      grads.reserve(leaves.flat.size());
      for (const auto id : leaves.flat) grads.push_back(tape.grad(id));
      clip_global_norm(grads, cfg.clip_norm);
      if (!adam.step(params, grads)) ++result.skipped_steps;
      loss_sum += loss_value * static_cast<double>(b);
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(n));
  }
  return result;
}

FfTrainResult ffae_train(FfAeModel& model, const Matrix& rows,
                         const FfTrainConfig& cfg) {
  return dae_train(model, rows, 0.0, cfg);
}

data::MtsSample dae_impute(const FfAeModel& model,
                           const data::MtsSample& sample) {
  const std::size_t v = sample.variates();
  if (model.t_pad == 0 || v * model.t_pad != model.cfg.d_x)
    throw std::invalid_argument("dae_impute: model t_pad/d_x mismatch");
  if (sample.length > model.t_pad)
    throw std::invalid_argument("dae_impute: sample longer than t_pad");
  Matrix row(1, model.cfg.d_x);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t t = 0; t < sample.length; ++t)
      row(0, i * model.t_pad + t) =
          sample.observed(i, t) ? sample.values(i, t) : 0.0;
  const Matrix recon = model.forward(row);
  data::MtsSample out = sample;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t t = 0; t < sample.length; ++t)
      if (!sample.observed(i, t))
        out.values(i, t) = recon(0, i * model.t_pad + t);
  return out;
}

}  // namespace tsrep::nn
