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

// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL]
// line; the process exits nonzero if any requested criterion fails.
// Usage: acceptance [c1 .. c10 | all]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "tsrep/baselines.hpp"
#include "tsrep/gradcheck.hpp"
#include "tsrep/generators.hpp"
#include "tsrep/metrics.hpp"
#include "tsrep/pipelines.hpp"
#include "tsrep/serialize.hpp"
#include "tsrep/tck.hpp"
#include "tsrep/tkae.hpp"

using namespace tsrep;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  const char* id;
  const char* title;
  std::function<bool(std::string&)> run;  // fills a detail message
};

// ---------------------------------------------------------------------------
// c1: gradient correctness of the full composite loss on a tiny model.
// ---------------------------------------------------------------------------
bool run_c1(std::string& detail) {
  Rng data_rng(1);
  data::Dataset ds;
  ds.v = 2;
  for (int i = 0; i < 4; ++i) {
    data::MtsSample s;
    s.id = i;
    s.values = Matrix(2, 5);
    s.mask = Matrix(2, 5, 1.0);
    s.length = 5;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
      s.values.data()[j] = data_rng.normal();
      if (data_rng.bernoulli(0.25)) {
        s.mask.data()[j] = 0.0;
        s.values.data()[j] = 0.0;
      }
    }
    ds.samples.push_back(std::move(s));
  }
  nn::TkaeArch arch;
  arch.cell = nn::CellKind::lstm;
  arch.layers = 1;
  arch.dz = 3;
  arch.v = 2;
  arch.bidirectional = true;
  Rng init_rng(7);
  nn::TkaeModel model = nn::TkaeModel::init(arch, init_rng);
  const nn::Batch batch = nn::make_batch(ds, {0, 1, 2, 3}, 3);

  Rng krng(3);
  Matrix base(4, 4);
  for (std::size_t i = 0; i < base.size(); ++i)
    base.data()[i] = krng.normal();
  Matrix k = matmul_nt(base, base);
  for (int i = 0; i < 4; ++i) k(i, i) += 1.0;

  double worst = 0.0;
  for (const bool masked : {false, true}) {
    nn::ForwardSpec spec;
    spec.lambda = 0.001;
    spec.alpha = 0.1;
    spec.masked_loss = masked;
    spec.generative = {true, false, true, true, false};
    spec.k_batch = &k;
    auto params = model.parameters();
    std::vector<Matrix> grads;
    nn::tkae_batch_pass(model, batch, spec, &grads);
    auto forward = [&]() {
      return nn::tkae_batch_pass(model, batch, spec, nullptr).total;
    };
    worst = std::max(worst, gradient_check(forward, params, grads, 1e-5));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "max relative gradient error %.3e (threshold 1e-4)", worst);
  detail = buf;
  return worst < 1e-4;
}

// ---------------------------------------------------------------------------
// c2: TCK structural properties on a 30-sample synthetic set.
// ---------------------------------------------------------------------------
bool run_c2(std::string& detail) {
  data::ClassGenConfig gc;
  gc.n_classes = 3;
  gc.v = 3;
  gc.t_min = 20;
  gc.t_max = 20;
  gc.n_train = 30;
  gc.n_test = 0;
  gc.seed = 11;
  auto [train, test] = data::gen_classes(gc);
  Rng inj(12);
  data::inject_missing(train, 0.3, inj);

  const tck::TckConfig cfg;  // Q = 30, C = 10: the full default ensemble
  const tck::TckResult result = tck::build_kernel(train, cfg, 13);
  const Matrix& k = result.kernel.k;

  double max_asym = 0.0;
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      max_asym = std::max(max_asym, std::abs(k(i, j) - k(j, i)));

  double trace = 0.0;
  for (std::size_t i = 0; i < k.rows(); ++i) trace += k(i, i);
  const SymmetricEigen eig = eigen_symmetric(k);
  const double min_eig = eig.values.back();

  bool monotone = true;
  for (const auto& inst : result.model.instances)
    for (std::size_t i = 1; i < inst.trace.objective.size(); ++i)
      monotone = monotone &&
                 inst.trace.objective[i] >= inst.trace.objective[i - 1] - 1e-8;

  double worst_simplex = 0.0;
  bool nonneg = true;
  for (const auto& inst : result.model.instances)
    for (std::size_t i = 0; i < inst.train_posteriors.rows(); ++i) {
      double total = 0.0;
      for (std::size_t g = 0; g < inst.train_posteriors.cols(); ++g) {
        total += inst.train_posteriors(i, g);
        nonneg = nonneg && inst.train_posteriors(i, g) >= 0.0;
      }
      worst_simplex = std::max(worst_simplex, std::abs(total - 1.0));
    }

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "asym %.2e, min eig %.3e (>= %.3e), EM monotone %d, "
                "posterior sum dev %.2e",
                max_asym, min_eig, -1e-8 * trace, monotone ? 1 : 0,
                worst_simplex);
  detail = buf;
  return max_asym < 1e-12 && min_eig >= -1e-8 * trace && monotone &&
         nonneg && worst_simplex < 1e-12;
}

// ---------------------------------------------------------------------------
// c3: marginalization equals the observed-cells brute force, 100 cases.
// ---------------------------------------------------------------------------
bool run_c3(std::string& detail) {
  Rng rng(21);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t v = 1 + static_cast<std::size_t>(rng.below(4));
    const std::size_t t = 2 + static_cast<std::size_t>(rng.below(10));
    const std::size_t g_count = 1 + static_cast<std::size_t>(rng.below(4));
    tck::DiagGmm gmm;
    gmm.components = g_count;
    gmm.theta.assign(g_count, 1.0 / static_cast<double>(g_count));
    gmm.stdev = Matrix(g_count, v);
    for (std::size_t g = 0; g < g_count; ++g) {
      Matrix mu(v, t);
      for (std::size_t i = 0; i < mu.size(); ++i) mu.data()[i] = rng.normal();
      gmm.mean.push_back(std::move(mu));
      for (std::size_t i = 0; i < v; ++i)
        gmm.stdev(g, i) = rng.uniform(0.3, 2.0);
    }
    tck::RestrictedView rv;
    rv.x = Matrix(v, t);
    rv.r = Matrix(v, t);
    for (std::size_t i = 0; i < rv.x.size(); ++i) {
      rv.r.data()[i] = rng.bernoulli(0.6) ? 1.0 : 0.0;
      if (rv.r.data()[i] != 0.0) rv.x.data()[i] = rng.normal();
    }
    const std::size_t g = static_cast<std::size_t>(rng.below(g_count));
    double want = 0.0;
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < t; ++j)
        if (rv.r(i, j) != 0.0) {
          const double sd = gmm.stdev(g, i);
          const double d = (rv.x(i, j) - gmm.mean[g](i, j)) / sd;
          want += -0.5 * (std::log(2.0 * 3.14159265358979323846) +
                          2.0 * std::log(sd) + d * d);
        }
    const double got = tck::marginal_log_pdf(rv, gmm, g);
    worst = std::max(worst, std::abs(got - want) /
                                std::max(1.0, std::abs(want)));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max relative deviation %.3e (<= 1e-12)",
                worst);
  detail = buf;
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// Shared helpers for the study criteria.
// ---------------------------------------------------------------------------

double generative_mse(const nn::TkaeModel& model, const data::Dataset& ds) {
  double se = 0.0;
  std::size_t cells = 0;
  for (const auto& s : ds.samples) {
    const Matrix recon = nn::reconstruct(model, s);
    const Matrix diff = sub(s.values, recon);
    se += sumsq(diff);
    cells += diff.size();
  }
  return se / static_cast<double>(cells);
}

double folded_mse(const Matrix& rows, const Matrix& recon,
                  const data::Dataset& ds, std::size_t t_pad) {
  double se = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& s = ds.samples[i];
    for (std::size_t v = 0; v < ds.v; ++v)
      for (std::size_t t = 0; t < s.length; ++t) {
        const double d =
            rows(i, v * t_pad + t) - recon(i, v * t_pad + t);
        se += d * d;
        ++cells;
      }
  }
  return se / static_cast<double>(cells);
}

struct RecurrentRun {
  nn::TkaeModel model;
  double test_mse = 0.0;
};

RecurrentRun train_recurrent(const pipe::PreparedData& prepared,
                             const nn::TkaeArch& arch_in,
                             nn::TrainConfig tc,
                             const tck::KernelMatrix* kernel,
                             std::uint64_t run_seed) {
  nn::TkaeArch arch = arch_in;
  arch.v = prepared.train.v;
  Rng init_rng(Rng(run_seed).derive(1).seed());
  RecurrentRun run{nn::TkaeModel::init(arch, init_rng), 0.0};
  run.model.scaler = prepared.scaler;
  tc.seed = Rng(run_seed).derive(2).seed();
  nn::train(run.model, prepared.train, kernel, tc);
  run.test_mse = generative_mse(run.model, prepared.test);
  return run;
}

double train_ffae_mse(const pipe::PreparedData& prepared,
                      nn::FfAeConfig cfg, const nn::FfTrainConfig& tc_in,
                      double corruption, std::uint64_t run_seed,
                      nn::FfAeModel* model_out = nullptr) {
  const std::size_t t_pad =
      std::max(prepared.train.t_max(), prepared.test.t_max());
  const Matrix train_rows = data::pad_and_unroll(prepared.train, t_pad);
  const Matrix test_rows = data::pad_and_unroll(prepared.test, t_pad);
  cfg.d_x = train_rows.cols();
  Rng init_rng(Rng(run_seed).derive(1).seed());
  nn::FfAeModel model = nn::FfAeModel::init(cfg, init_rng);
  model.t_pad = t_pad;
  model.scaler = prepared.scaler;
  nn::FfTrainConfig tc = tc_in;
  tc.seed = Rng(run_seed).derive(2).seed();
  nn::dae_train(model, train_rows, corruption, tc);
  const double mse =
      folded_mse(test_rows, model.forward(test_rows), prepared.test, t_pad);
  if (model_out != nullptr) *model_out = std::move(model);
  return mse;
}

double pca_test_mse(const pipe::PreparedData& prepared, std::size_t dz) {
  const std::size_t t_pad =
      std::max(prepared.train.t_max(), prepared.test.t_max());
  const Matrix train_rows = data::pad_and_unroll(prepared.train, t_pad);
  const Matrix test_rows = data::pad_and_unroll(prepared.test, t_pad);
  const nn::PcaModel pca = nn::pca_fit(train_rows, dz);
  return folded_mse(test_rows,
                    nn::pca_reconstruct(pca, nn::pca_encode(pca, test_rows)),
                    prepared.test, t_pad);
}

// ---------------------------------------------------------------------------
// c4: sinusoid study. 200 train / 1000 test, D_z = 5, 500 epochs:
// strict ordering TAE < AE < PCA with TAE < 0.1 and PCA > 0.3.
// ---------------------------------------------------------------------------
bool run_c4(std::string& detail) {
  data::SineGenConfig gc;
  gc.n_train = 200;
  gc.n_test = 1000;
  gc.t = 100;
  gc.seed = 401;
  auto [train, test] = data::gen_sines(gc);
  const pipe::PreparedData prepared =
      pipe::prepare(std::move(train), std::move(test), 0.0, 402);

  nn::TkaeArch arch;
  arch.cell = nn::CellKind::gru;
  arch.layers = 1;
  arch.dz = 5;
  arch.bidirectional = true;
  nn::TrainConfig tc;
  tc.lambda = 0.0;
  tc.alpha = 0.0;
  tc.ps = 1.0;
  tc.lr = 0.001;
  tc.batch = 32;
  tc.epochs = 500;
  const RecurrentRun tae = train_recurrent(prepared, arch, tc, nullptr, 403);

  nn::FfAeConfig ae_cfg;
  ae_cfg.dz = 5;
  ae_cfg.hidden = 30;
  ae_cfg.hidden_act = nn::FfAeConfig::Act::tanh;
  ae_cfg.decoder_act = nn::FfAeConfig::Act::sigmoid;
  nn::FfTrainConfig ae_tc;
  ae_tc.lambda = 0.001;
  ae_tc.epochs = 500;
  const double ae_mse = train_ffae_mse(prepared, ae_cfg, ae_tc, 0.0, 404);

  const double pca_mse = pca_test_mse(prepared, 5);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "TAE %.4f (< 0.1), AE %.4f, PCA %.4f (> 0.3)", tae.test_mse,
                ae_mse, pca_mse);
  detail = buf;
  return tae.test_mse < ae_mse && ae_mse < pca_mse && tae.test_mse < 0.1 &&
         pca_mse > 0.3;
}

// ---------------------------------------------------------------------------
// c5: ODEfix (FF-AE < TAE) and ODEvar (TAE < FF-AE, TAE < PCA), 5 seeds.
// ---------------------------------------------------------------------------
bool run_c5(std::string& detail) {
  auto study = [&](bool variable, double& tae_avg, double& ae_avg,
                   double& pca_avg) {
    tae_avg = ae_avg = pca_avg = 0.0;
    const int seeds = 5;
    for (int s = 0; s < seeds; ++s) {
      data::OdeGenConfig gc;
      gc.v = 10;
      gc.t_min = variable ? 30 : 90;
      gc.t_max = 90;
      gc.n_train = 150;
      gc.n_test = 200;
      gc.seed = 500 + static_cast<std::uint64_t>(s) * 17 + (variable ? 7 : 0);
      auto result = data::gen_ode(gc);
      const pipe::PreparedData prepared = pipe::prepare(
          std::move(result.train), std::move(result.test), 0.0, gc.seed + 1);

      nn::TkaeArch arch;
      arch.cell = nn::CellKind::lstm;
      arch.layers = 1;
      arch.dz = 10;
      arch.bidirectional = true;
      nn::TrainConfig tc;
      tc.lambda = 0.001;
      tc.ps = 0.9;
      tc.epochs = 150;
      tc.batch = 32;
      tae_avg +=
          train_recurrent(prepared, arch, tc, nullptr, gc.seed + 2).test_mse;

      nn::FfAeConfig ae_cfg;
      ae_cfg.dz = 10;
      ae_cfg.hidden = 30;
      ae_cfg.decoder_act = nn::FfAeConfig::Act::linear;
      nn::FfTrainConfig ae_tc;
      ae_tc.lambda = 0.001;
      ae_tc.epochs = 500;
      ae_avg += train_ffae_mse(prepared, ae_cfg, ae_tc, 0.0, gc.seed + 3);

      pca_avg += pca_test_mse(prepared, 10);
    }
    tae_avg /= seeds;
    ae_avg /= seeds;
    pca_avg /= seeds;
  };

  double fix_tae, fix_ae, fix_pca;
  study(false, fix_tae, fix_ae, fix_pca);
  double var_tae, var_ae, var_pca;
  study(true, var_tae, var_ae, var_pca);

  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "ODEfix: AE %.4f < TAE %.4f (PCA %.4f); "
                "ODEvar: TAE %.4f < AE %.4f, TAE < PCA %.4f",
                fix_ae, fix_tae, fix_pca, var_tae, var_ae, var_pca);
  detail = buf;
  return fix_ae < fix_tae && var_tae < var_ae && var_tae < var_pca;
}

// ---------------------------------------------------------------------------
// Shared setup for c6/c7: 9-class set, 80% missing, TCK prior.
// ---------------------------------------------------------------------------
struct AlignmentStudy {
  pipe::PreparedData prepared;
  tck::KernelMatrix kernel;
  std::vector<int> train_labels;
  std::vector<int> test_labels;
};

AlignmentStudy make_alignment_study() {
  data::ClassGenConfig gc;
  gc.n_classes = 9;
  gc.v = 12;
  gc.t_min = 15;
  gc.t_max = 25;
  gc.n_train = 270;
  gc.n_test = 270;
  gc.seed = 601;
  auto [train, test] = data::gen_classes(gc);
  AlignmentStudy study{
      pipe::prepare(std::move(train), std::move(test), 0.8, 602), {}, {}, {}};
  tck::TckConfig tcfg;
  study.kernel = tck::build_kernel(study.prepared.train, tcfg, 603).kernel;
  for (const auto& s : study.prepared.train.samples)
    study.train_labels.push_back(*s.label);
  for (const auto& s : study.prepared.test.samples)
    study.test_labels.push_back(*s.label);
  return study;
}

nn::TkaeArch alignment_arch() {
  nn::TkaeArch arch;
  arch.cell = nn::CellKind::lstm;
  arch.layers = 2;
  arch.dz = 10;
  arch.bidirectional = true;
  return arch;
}

nn::TrainConfig alignment_train(double alpha) {
  nn::TrainConfig tc;
  tc.lambda = 0.001;
  tc.alpha = alpha;
  tc.ps = 0.8;
  tc.epochs = 300;
  tc.batch = 32;
  return tc;
}

double knn_accuracy(const nn::TkaeModel& model, const AlignmentStudy& study) {
  const Matrix train_z = nn::encode_dataset(model, study.prepared.train);
  const Matrix test_z = nn::encode_dataset(model, study.prepared.test);
  const auto pred =
      eval::knn_classify(train_z, study.train_labels, test_z, 3);
  return eval::accuracy(study.test_labels, pred);
}

// c6: kNN accuracy of TKAE (alpha = 0.1) exceeds TAE (alpha = 0) by >= 10
// percentage points at 80% missing, averaged over 5 seeds.
bool run_c6(std::string& detail) {
  const AlignmentStudy study = make_alignment_study();
  const int seeds = 5;
  double tkae_acc = 0.0, tae_acc = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const RecurrentRun tkae =
        train_recurrent(study.prepared, alignment_arch(),
                        alignment_train(0.1), &study.kernel, 610 + s);
    const RecurrentRun tae =
        train_recurrent(study.prepared, alignment_arch(),
                        alignment_train(0.0), nullptr, 650 + s);
    tkae_acc += knn_accuracy(tkae.model, study);
    tae_acc += knn_accuracy(tae.model, study);
  }
  tkae_acc /= seeds;
  tae_acc /= seeds;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "kNN accuracy: TKAE %.3f vs TAE %.3f (gap %.1f pp, need >= 10)",
                tkae_acc, tae_acc, 100.0 * (tkae_acc - tae_acc));
  detail = buf;
  return tkae_acc - tae_acc >= 0.10;
}

// c7: reconstruction MSE at alpha = 0.5 within 25% of alpha = 0.
bool run_c7(std::string& detail) {
  const AlignmentStudy study = make_alignment_study();
  const int seeds = 3;
  double aligned = 0.0, plain = 0.0;
  for (int s = 0; s < seeds; ++s) {
    aligned += train_recurrent(study.prepared, alignment_arch(),
                               alignment_train(0.5), &study.kernel, 670 + s)
                   .test_mse;
    plain += train_recurrent(study.prepared, alignment_arch(),
                             alignment_train(0.0), nullptr, 680 + s)
                 .test_mse;
  }
  aligned /= seeds;
  plain /= seeds;
  const double rel = std::abs(aligned - plain) / plain;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "recon MSE: alpha=0.5 %.4f vs alpha=0 %.4f (rel dev %.1f%%, "
                "need <= 25%%)",
                aligned, plain, 100.0 * rel);
  detail = buf;
  return rel <= 0.25;
}

// ---------------------------------------------------------------------------
// c8: imputation orderings at 50% missing on the sine and ODE toys.
// ---------------------------------------------------------------------------
struct ImputationOutcome {
  double mean_mse = 0.0, mean_corr = 0.0;
  double locf_mse = 0.0;
  double dae_mse = 0.0;
  double tkae_mse = 0.0, tkae_corr = 0.0;
};

ImputationOutcome imputation_toy(bool sine_toy, std::uint64_t seed) {
  data::Dataset train, test;
  if (sine_toy) {
    data::SineGenConfig gc;
    gc.n_train = 150;
    gc.n_test = 200;
    gc.t = 100;
    gc.seed = seed;
    std::tie(train, test) = data::gen_sines(gc);
  } else {
    data::OdeGenConfig gc;
    gc.v = 10;
    gc.t_min = gc.t_max = 50;
    gc.n_train = 150;
    gc.n_test = 200;
    gc.seed = seed;
    auto result = data::gen_ode(gc);
    train = std::move(result.train);
    test = std::move(result.test);
  }
  pipe::PreparedData prepared =
      pipe::prepare(std::move(train), std::move(test), 0.5, seed + 1);

  ImputationOutcome out;
  {
    data::Dataset imputed = prepared.test;
    data::impute_simple(imputed, data::ImputeMode::zero);  // standardized mean
    const auto s = eval::imputation_score(prepared.test_injected_std, imputed);
    out.mean_mse = s.mse;
    out.mean_corr = s.corr;
  }
  {
    data::Dataset imputed = prepared.test;
    data::impute_simple(imputed, data::ImputeMode::locf);
    out.locf_mse =
        eval::imputation_score(prepared.test_injected_std, imputed).mse;
  }
  {
    nn::FfAeConfig cfg;
    cfg.dz = 10;
    cfg.hidden = 30;
    nn::FfTrainConfig tc;
    tc.epochs = 400;
    nn::FfAeModel dae;
    train_ffae_mse(prepared, cfg, tc, 0.5, seed + 2, &dae);
    data::Dataset imputed = prepared.test;
    for (auto& s : imputed.samples) s = nn::dae_impute(dae, s);
    out.dae_mse =
        eval::imputation_score(prepared.test_injected_std, imputed).mse;
  }
  {
    tck::TckConfig tcfg;
    const tck::KernelMatrix kernel =
        tck::build_kernel(prepared.train, tcfg, seed + 3).kernel;
    nn::TkaeArch arch;
    arch.cell = sine_toy ? nn::CellKind::gru : nn::CellKind::lstm;
    arch.layers = 1;
    arch.dz = sine_toy ? 5 : 10;
    arch.bidirectional = true;
    nn::TrainConfig tc;
    tc.lambda = 0.0;
    tc.alpha = 0.1;
    tc.ps = sine_toy ? 1.0 : 0.9;
    tc.epochs = 400;
    tc.masked_loss = true;
    const RecurrentRun run =
        train_recurrent(prepared, arch, tc, &kernel, seed + 4);
    data::Dataset imputed = prepared.test;
    for (auto& s : imputed.samples)
      s = nn::impute_with_decoder(run.model, s);
    const auto score =
        eval::imputation_score(prepared.test_injected_std, imputed);
    out.tkae_mse = score.mse;
    out.tkae_corr = score.corr;
  }
  return out;
}

bool run_c8(std::string& detail) {
  const ImputationOutcome sine = imputation_toy(true, 801);
  const ImputationOutcome ode = imputation_toy(false, 851);
  char buf[360];
  std::snprintf(
      buf, sizeof(buf),
      "sine: tkae %.3f/%.3f mean %.3f/%.3f locf %.3f dae %.3f | "
      "ode: tkae %.3f/%.3f mean %.3f/%.3f dae %.3f",
      sine.tkae_mse, sine.tkae_corr, sine.mean_mse, sine.mean_corr,
      sine.locf_mse, sine.dae_mse, ode.tkae_mse, ode.tkae_corr, ode.mean_mse,
      ode.mean_corr, ode.dae_mse);
  detail = buf;
  const bool sine_ok = sine.tkae_mse < sine.mean_mse &&
                       sine.tkae_corr > sine.mean_corr &&
                       sine.tkae_mse < sine.locf_mse &&
                       sine.dae_mse < sine.mean_mse;
  const bool ode_ok = ode.tkae_mse < ode.mean_mse &&
                      ode.tkae_corr > ode.mean_corr &&
                      ode.dae_mse < ode.mean_mse;
  return sine_ok && ode_ok;
}

// ---------------------------------------------------------------------------
// c9: one-class scoring. Nominal = one ODE generator; anomalies come from a
// differently seeded generator. Trained AUC > 0.8; untrained ~ 0.5.
// ---------------------------------------------------------------------------
bool run_c9(std::string& detail) {
  data::OdeGenConfig nominal_cfg;
  nominal_cfg.v = 10;
  nominal_cfg.t_min = nominal_cfg.t_max = 40;
  nominal_cfg.n_train = 150;
  nominal_cfg.n_test = 100;
  nominal_cfg.seed = 901;
  auto nominal = data::gen_ode(nominal_cfg);

  data::OdeGenConfig anomaly_cfg = nominal_cfg;
  anomaly_cfg.n_train = 0;
  anomaly_cfg.n_test = 100;
  anomaly_cfg.seed = 902;  // a different system matrix A
  auto anomaly = data::gen_ode(anomaly_cfg);

  data::Dataset test = std::move(nominal.test);
  std::vector<int> labels(test.size(), 0);
  for (auto& s : anomaly.test.samples) {
    s.id += 100000;
    test.samples.push_back(std::move(s));
    labels.push_back(1);
  }

  pipe::PreparedData prepared =
      pipe::prepare(std::move(nominal.train), std::move(test), 0.0, 903);

  tck::TckConfig tcfg;
  const tck::KernelMatrix kernel =
      tck::build_kernel(prepared.train, tcfg, 904).kernel;

  nn::TkaeArch arch;
  arch.cell = nn::CellKind::gru;
  arch.layers = 1;
  arch.dz = 10;
  arch.bidirectional = true;

  auto auc_for = [&](std::size_t epochs) {
    nn::TrainConfig tc;
    tc.lambda = 0.0;
    tc.alpha = 0.2;
    tc.ps = 0.9;
    tc.epochs = epochs;
    const RecurrentRun run =
        train_recurrent(prepared, arch, tc, &kernel, 905);
    std::vector<double> scores;
    for (const auto& s : prepared.test.samples)
      scores.push_back(nn::reconstruction_error(run.model, s));
    return eval::roc_auc(scores, labels, 1);
  };

  const double auc_untrained = auc_for(0);
  const double auc_trained = auc_for(300);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "AUC trained %.3f (> 0.8), untrained %.3f (within 0.5 +- 0.1)",
                auc_trained, auc_untrained);
  detail = buf;
  return auc_trained > 0.8 && std::abs(auc_untrained - 0.5) <= 0.1;
}

// ---------------------------------------------------------------------------
// c10: every CLI command, rerun with the same config and seed, reproduces
// byte-identical outputs.
// ---------------------------------------------------------------------------
bool directories_identical(const fs::path& a, const fs::path& b,
                           std::string& why) {
  std::vector<fs::path> rel;
  for (const auto& entry : fs::recursive_directory_iterator(a))
    if (entry.is_regular_file())
      rel.push_back(fs::relative(entry.path(), a));
  for (const auto& r : rel) {
    std::ifstream fa(a / r, std::ios::binary);
    std::ifstream fb(b / r, std::ios::binary);
    if (!fb) {
      why = "missing " + r.string();
      return false;
    }
    const std::string da((std::istreambuf_iterator<char>(fa)),
                         std::istreambuf_iterator<char>());
    const std::string db((std::istreambuf_iterator<char>(fb)),
                         std::istreambuf_iterator<char>());
    if (da != db) {
      why = "differs: " + r.string();
      return false;
    }
  }
  return true;
}

bool run_c10(std::string& detail) {
  const char* cli = std::getenv("TSREP_CLI");
  if (cli == nullptr) {
    detail = "TSREP_CLI is not set";
    return false;
  }
  const fs::path base = fs::temp_directory_path() / "tsrep_acceptance_c10";
  fs::remove_all(base);
  fs::create_directories(base);

  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(base / name);
    out << text;
    return (base / name).string();
  };
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };

  const std::string gen_cfg = write(
      "gen.cfg",
      "gen.kind = classes\ngen.classes = 3\ngen.v = 4\n"
      "gen.t_min = 10\ngen.t_max = 14\ngen.n_train = 18\ngen.n_test = 12\n");
  const std::string data_dir = (base / "data").string();
  if (!run("gen --config " + gen_cfg + " --seed 4 --out " + data_dir)) {
    detail = "gen failed";
    return false;
  }
  const std::string data_lines =
      "data.train = " + data_dir + "/train.csv\n" +
      "data.test = " + data_dir + "/test.csv\ndata.missing_rate = 0.3\n";

  const std::string tck_cfg =
      write("tck.cfg", "data.train = " + data_dir +
                           "/train.csv\ndata.missing_rate = 0.3\n"
                           "tck.q = 2\ntck.c = 3\n");
  const std::string train_cfg = write(
      "train.cfg", data_lines +
                       "model.kind = tkae\nmodel.cell = gru\nmodel.dz = 4\n"
                       "train.alpha = 0.1\ntrain.epochs = 3\n"
                       "train.kernel = " +
                       (base / "tck_a/kernel.bin").string() + "\n");
  const std::string impute_cfg = write(
      "impute.cfg", data_lines +
                        "model.cell = gru\nmodel.dz = 4\ntrain.epochs = 3\n"
                        "train.alpha = 0.1\ntck.q = 2\ntck.c = 3\n"
                        "ffae.hidden = 8\n");
  const std::string oneclass_cfg = write(
      "oneclass.cfg", data_lines +
                          "model.kind = tae\nmodel.cell = gru\nmodel.dz = 4\n"
                          "train.epochs = 3\noneclass.anomaly_label = 2\n");

  struct Step {
    const char* name;
    std::string args;
  };
  std::vector<Step> steps;
  steps.push_back({"gen", "gen --config " + gen_cfg + " --seed 4 --out "});
  steps.push_back({"tck", "tck --config " + tck_cfg + " --seed 4 --out "});
  steps.push_back(
      {"train", "train --config " + train_cfg + " --seed 4 --out "});
  steps.push_back(
      {"impute", "impute --config " + impute_cfg + " --seed 4 --out "});
  steps.push_back({"oneclass",
                   "oneclass --config " + oneclass_cfg + " --seed 4 --out "});

  for (const auto& step : steps) {
    const fs::path dir_a = base / (std::string(step.name) + "_a");
    const fs::path dir_b = base / (std::string(step.name) + "_b");
    if (!run(step.args + dir_a.string()) ||
        !run(step.args + dir_b.string())) {
      detail = std::string(step.name) + " failed to run";
      return false;
    }
    std::string why;
    if (!directories_identical(dir_a, dir_b, why)) {
      detail = std::string(step.name) + ": " + why;
      return false;
    }
  }

  // classify needs a trained model; reuse the train output
  const std::string classify_cfg = write(
      "classify.cfg",
      data_lines + "model.path = " + (base / "train_a/model_run0.bin").string() +
          "\neval.knn_k = 3\n");
  const fs::path ca = base / "classify_a";
  const fs::path cb = base / "classify_b";
  if (!run("classify --config " + classify_cfg + " --seed 4 --out " +
           ca.string()) ||
      !run("classify --config " + classify_cfg + " --seed 4 --out " +
           cb.string())) {
    detail = "classify failed to run";
    return false;
  }
  std::string why;
  if (!directories_identical(ca, cb, why)) {
    detail = "classify: " + why;
    return false;
  }

  fs::remove_all(base);
  detail = "gen/tck/train/impute/oneclass/classify byte-identical on rerun";
  return true;
}

const Criterion kCriteria[] = {
    {"c1", "gradient correctness of the composite loss", run_c1},
    {"c2", "TCK kernel structural properties", run_c2},
    {"c3", "missing-data marginalization oracle", run_c3},
    {"c4", "sinusoid study: TAE < AE < PCA", run_c4},
    {"c5", "ODEfix/ODEvar orderings", run_c5},
    {"c6", "kernel alignment benefit at 80% missing", run_c6},
    {"c7", "alignment does not compromise reconstruction", run_c7},
    {"c8", "imputation orderings at 50% missing", run_c8},
    {"c9", "one-class AUC on mixed generators", run_c9},
    {"c10", "CLI byte-determinism", run_c10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted;
  for (int i = 1; i < argc; ++i) wanted.emplace_back(argv[i]);
  if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
    wanted.clear();
    for (const auto& c : kCriteria) wanted.push_back(c.id);
  }

  int failures = 0;
  for (const std::string& id : wanted) {
    const Criterion* found = nullptr;
    for (const auto& c : kCriteria)
      if (id == c.id) found = &c;
    if (found == nullptr) {
      std::printf("[FAIL] %s: unknown criterion\n", id.c_str());
      ++failures;
      continue;
    }
    std::string detail;
    bool ok = false;
    try {
      ok = found->run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s%s%s\n", ok ? "PASS" : "FAIL", found->id,
                found->title, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
