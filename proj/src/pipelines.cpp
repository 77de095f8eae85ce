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

#include "tsrep/pipelines.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "tsrep/baselines.hpp"
#include "tsrep/metrics.hpp"
#include "tsrep/serialize.hpp"

namespace tsrep::pipe {

namespace {

namespace fs = std::filesystem;

// Salts for the derived random streams, so every command reproduces the
// same draws from the same base seed.
constexpr std::uint64_t kSaltInjectTrain = 1001;
constexpr std::uint64_t kSaltInjectTest = 1002;
constexpr std::uint64_t kSaltTck = 2000;
constexpr std::uint64_t kSaltModelInit = 3000;
constexpr std::uint64_t kSaltTrainLoop = 4000;

bool verbose() {
  const char* env = std::getenv("TSREP_LOG");
  return env != nullptr && std::string(env) == "debug";
}

void log_line(const std::string& msg) {
  if (verbose()) std::cerr << "[tsrep] " << msg << "\n";
}

std::string out_dir(cli::Config& cfg) {
  const std::string out = cfg.require_str("out");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw DataError("cannot create output directory " + out);
  return out;
}

data::Dataset load_dataset(const std::string& path, const char* split) {
  try {
    data::Dataset ds = data::load_csv(path);
    ds.split = split;
    return ds;
  } catch (const std::exception& e) {
    throw DataError(std::string("failed to load dataset: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

void write_loss_trace(const std::string& path,
                      const std::vector<double>& loss) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "epoch,loss\n";
  char buf[32];
  for (std::size_t i = 0; i < loss.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", loss[i]);
    out << i << "," << buf << "\n";
  }
}

std::map<std::string, std::string> config_snapshot(const cli::Config& cfg) {
  return cfg.values();
}

// Mean squared reconstruction error over the actual cells of every sample
// (padding beyond a sample's length excluded).
double recurrent_test_mse(const nn::TkaeModel& model,
                          const data::Dataset& ds) {
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

double folded_rows_mse(const Matrix& rows, const Matrix& recon,
                       const data::Dataset& ds, std::size_t t_pad) {
  double se = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& s = ds.samples[i];
    for (std::size_t v = 0; v < ds.v; ++v)
      for (std::size_t t = 0; t < s.length; ++t) {
        const std::size_t col = v * t_pad + t;
        const double d = rows(i, col) - recon(i, col);
        se += d * d;
        ++cells;
      }
  }
  return se / static_cast<double>(cells);
}

struct RecurrentSpec {
  nn::TkaeArch arch;
  nn::TrainConfig train;
  bool needs_kernel = false;
};

nn::CellKind parse_cell(const std::string& name) {
  if (name == "gru") return nn::CellKind::gru;
  if (name == "lstm") return nn::CellKind::lstm;
  throw cli::ConfigError("model.cell must be gru or lstm, got " + name);
}

RecurrentSpec recurrent_spec(cli::Config& cfg, ModelKind kind,
                             std::size_t v) {
  RecurrentSpec spec;
  spec.arch.cell = parse_cell(cfg.get_str("model.cell", "lstm"));
  spec.arch.layers =
      static_cast<std::size_t>(cfg.get_i64("model.layers", 1));
  spec.arch.dz = static_cast<std::size_t>(cfg.get_i64("model.dz", 10));
  spec.arch.v = v;
  spec.arch.bidirectional = cfg.get_bool("model.bidirectional", true);

  spec.train.lambda = cfg.get_f64("train.lambda", 0.001);
  spec.train.alpha = cfg.get_f64("train.alpha", kind == ModelKind::tkae
                                                    ? 0.1
                                                    : 0.0);
  spec.train.ps = cfg.get_f64("train.ps", 0.9);
  spec.train.lr = cfg.get_f64("train.lr", 0.001);
  spec.train.batch =
      static_cast<std::size_t>(cfg.get_i64("train.batch", 32));
  spec.train.epochs =
      static_cast<std::size_t>(cfg.get_i64("train.epochs", 500));
  spec.train.masked_loss = cfg.get_bool("train.masked_loss", false);

  if (kind == ModelKind::tae) spec.train.alpha = 0.0;
  if (kind == ModelKind::encdec_ad) {
    // EncDec-AD is the unidirectional single-layer no-alignment setup.
    spec.arch.bidirectional = false;
    spec.arch.layers = 1;
    spec.train.alpha = 0.0;
  }
  spec.needs_kernel = spec.train.alpha > 0.0;
  return spec;
}

nn::FfAeConfig::Act parse_act(const std::string& name) {
  if (name == "linear") return nn::FfAeConfig::Act::linear;
  if (name == "tanh") return nn::FfAeConfig::Act::tanh;
  if (name == "sigmoid") return nn::FfAeConfig::Act::sigmoid;
  throw cli::ConfigError("activation must be linear|tanh|sigmoid, got " +
                         name);
}

nn::FfAeConfig ffae_spec(cli::Config& cfg, std::size_t d_x) {
  nn::FfAeConfig spec;
  spec.d_x = d_x;
  spec.dz = static_cast<std::size_t>(cfg.get_i64("model.dz", 10));
  spec.hidden = static_cast<std::size_t>(cfg.get_i64("ffae.hidden", 30));
  spec.hidden_act = parse_act(cfg.get_str("ffae.hidden_act", "tanh"));
  spec.decoder_act = parse_act(cfg.get_str("ffae.decoder_act", "linear"));
  spec.tied = cfg.get_bool("ffae.tied", false);
  return spec;
}

nn::FfTrainConfig ff_train_spec(cli::Config& cfg) {
  nn::FfTrainConfig tc;
  tc.lambda = cfg.get_f64("train.lambda", 0.001);
  tc.lr = cfg.get_f64("train.lr", 0.001);
  tc.batch = static_cast<std::size_t>(cfg.get_i64("train.batch", 32));
  tc.epochs = static_cast<std::size_t>(cfg.get_i64("train.epochs", 500));
  return tc;
}

tck::TckConfig tck_spec(cli::Config& cfg) {
  tck::TckConfig tc;
  tc.q = static_cast<int>(cfg.get_i64("tck.q", 30));
  tc.c = static_cast<int>(cfg.get_i64("tck.c", 10));
  tc.n_min_frac = cfg.get_f64("tck.nmin_frac", 0.8);
  tc.seg_min = static_cast<std::size_t>(cfg.get_i64("tck.seg_min", 0));
  tc.v_min = static_cast<std::size_t>(cfg.get_i64("tck.v_min", 0));
  tc.em.max_iters = static_cast<int>(cfg.get_i64("tck.em_iters", 20));
  tc.em.tol = cfg.get_f64("tck.em_tol", 1e-6);
  return tc;
}

data::InjectionRecord standardized_record(
    const data::InjectionRecord& record, const data::Standardizer& scaler) {
  data::InjectionRecord out = record;
  for (auto& cell : out.cells)
    cell.original =
        (cell.original - scaler.mean[cell.v]) / scaler.stddev[cell.v];
  return out;
}

const std::set<std::string> kGenKeys = {
    "out",       "seed",       "gen.kind",  "gen.n_train", "gen.n_test",
    "gen.t",     "gen.t_min",  "gen.t_max", "gen.v",       "gen.classes",
    "gen.noise", "gen.sparsity", "gen.range", "gen.radius", "gen.step",
};

const std::set<std::string> kTckKeys = {
    "out",        "seed",          "data.train",  "data.missing_rate",
    "tck.q",      "tck.c",         "tck.nmin_frac", "tck.seg_min",
    "tck.v_min",  "tck.em_iters",  "tck.em_tol",
};

const std::set<std::string> kModelKeys = {
    "model.kind",     "model.cell",   "model.layers", "model.dz",
    "model.bidirectional",
};

const std::set<std::string> kTrainLoopKeys = {
    "train.lambda", "train.alpha",  "train.ps",     "train.lr",
    "train.batch",  "train.epochs", "train.masked_loss", "train.kernel",
};

const std::set<std::string> kFfKeys = {
    "ffae.hidden", "ffae.hidden_act", "ffae.decoder_act", "ffae.tied",
    "dae.corruption",
};

std::set<std::string> merge_keys(std::initializer_list<
                                 const std::set<std::string>*> sets,
                                 std::initializer_list<const char*> extra) {
  std::set<std::string> out;
  for (const auto* s : sets) out.insert(s->begin(), s->end());
  for (const char* e : extra) out.insert(e);
  return out;
}

}  // namespace

PreparedData prepare(data::Dataset train, data::Dataset test,
                     double missing_rate, std::uint64_t seed) {
  PreparedData p;
  p.train = std::move(train);
  p.test = std::move(test);
  if (missing_rate > 0.0) {
    Rng base(seed);
    Rng rng_train = base.derive(kSaltInjectTrain);
    Rng rng_test = base.derive(kSaltInjectTest);
    p.train_injected = data::inject_missing(p.train, missing_rate, rng_train);
    p.test_injected = data::inject_missing(p.test, missing_rate, rng_test);
  }
  p.scaler = data::standardize_fit_transform(p.train, p.test);
  data::impute_simple(p.train, data::ImputeMode::zero);
  data::impute_simple(p.test, data::ImputeMode::zero);
  p.train_injected_std = standardized_record(p.train_injected, p.scaler);
  p.test_injected_std = standardized_record(p.test_injected, p.scaler);
  return p;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "tkae") return ModelKind::tkae;
  if (name == "tae") return ModelKind::tae;
  if (name == "encdec-ad") return ModelKind::encdec_ad;
  if (name == "ffae") return ModelKind::ffae;
  if (name == "dae") return ModelKind::dae;
  if (name == "pca") return ModelKind::pca;
  throw cli::ConfigError(
      "model.kind must be tkae|tae|encdec-ad|ffae|dae|pca, got " + name);
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::tkae: return "tkae";
    case ModelKind::tae: return "tae";
    case ModelKind::encdec_ad: return "encdec-ad";
    case ModelKind::ffae: return "ffae";
    case ModelKind::dae: return "dae";
    case ModelKind::pca: return "pca";
  }
  return "?";
}

void cmd_gen(cli::Config& cfg) {
  cfg.reject_unknown(kGenKeys);
  const std::string out = out_dir(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const std::string kind = cfg.require_str("gen.kind");

  data::Dataset train, test;
  if (kind == "sine") {
    data::SineGenConfig gc;
    gc.n_train = static_cast<std::size_t>(cfg.get_i64("gen.n_train", 200));
    gc.n_test = static_cast<std::size_t>(cfg.get_i64("gen.n_test", 1000));
    gc.t = static_cast<std::size_t>(cfg.get_i64("gen.t", 100));
    gc.seed = seed;
    std::tie(train, test) = data::gen_sines(gc);
  } else if (kind == "ode") {
    data::OdeGenConfig gc;
    gc.v = static_cast<std::size_t>(cfg.get_i64("gen.v", 10));
    gc.t_min = static_cast<std::size_t>(cfg.get_i64("gen.t_min", 90));
    gc.t_max = static_cast<std::size_t>(cfg.get_i64("gen.t_max", 90));
    gc.n_train = static_cast<std::size_t>(cfg.get_i64("gen.n_train", 400));
    gc.n_test = static_cast<std::size_t>(cfg.get_i64("gen.n_test", 1000));
    gc.sparsity = cfg.get_f64("gen.sparsity", 0.5);
    gc.element_range = cfg.get_f64("gen.range", 0.5);
    gc.spectral_radius = cfg.get_f64("gen.radius", 0.8);
    gc.step = cfg.get_f64("gen.step", 0.1);
    gc.seed = seed;
    auto result = data::gen_ode(gc);
    train = std::move(result.train);
    test = std::move(result.test);
  } else if (kind == "classes") {
    data::ClassGenConfig gc;
    gc.n_classes = static_cast<std::size_t>(cfg.get_i64("gen.classes", 9));
    gc.v = static_cast<std::size_t>(cfg.get_i64("gen.v", 12));
    gc.t_min = static_cast<std::size_t>(cfg.get_i64("gen.t_min", 15));
    gc.t_max = static_cast<std::size_t>(cfg.get_i64("gen.t_max", 25));
    gc.n_train = static_cast<std::size_t>(cfg.get_i64("gen.n_train", 270));
    gc.n_test = static_cast<std::size_t>(cfg.get_i64("gen.n_test", 270));
    gc.noise = cfg.get_f64("gen.noise", 0.4);
    gc.seed = seed;
    std::tie(train, test) = data::gen_classes(gc);
  } else {
    throw cli::ConfigError("gen.kind must be sine|ode|classes, got " + kind);
  }

  data::save_csv(train, out + "/train.csv");
  data::save_metadata(train, out + "/train.csv");
  data::save_csv(test, out + "/test.csv");
  data::save_metadata(test, out + "/test.csv");
  cfg.write_resolved(out + "/config.resolved");
  log_line("gen: wrote " + out + "/train.csv (" +
           std::to_string(train.size()) + " samples)");
}

void cmd_tck(cli::Config& cfg) {
  cfg.reject_unknown(kTckKeys);
  const std::string out = out_dir(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  data::Dataset train = load_dataset(cfg.require_str("data.train"), "train");
  data::Dataset empty_test;
  empty_test.v = train.v;
  PreparedData prepared =
      prepare(std::move(train), std::move(empty_test),
              cfg.get_f64("data.missing_rate", 0.0), seed);

  const tck::TckConfig tc = tck_spec(cfg);
  tck::TckResult result;
  try {
    result = tck::build_kernel(prepared.train, tc, Rng(seed).derive(kSaltTck).seed());
  } catch (const std::invalid_argument& e) {
    throw cli::ConfigError(e.what());
  }
  io::save_kernel(result.kernel, out + "/kernel.bin");
  io::save_kernel_csv(result.kernel, out + "/kernel.csv");
  io::save_tck(result.model, out + "/tck_model.bin");
  cfg.write_resolved(out + "/config.resolved");
  log_line("tck: wrote kernel over " +
           std::to_string(result.kernel.ids.size()) + " samples");
}

namespace {

void train_recurrent_runs(cli::Config& cfg, ModelKind kind,
                          const PreparedData& prepared,
                          const std::string& out, std::uint64_t seed,
                          std::size_t runs) {
  RecurrentSpec spec = recurrent_spec(cfg, kind, prepared.train.v);
  tck::KernelMatrix kernel;
  if (spec.needs_kernel) {
    const std::string kernel_path = cfg.get_str("train.kernel", "");
    if (kernel_path.empty())
      throw cli::ConfigError(
          "model.kind=" + model_kind_name(kind) +
          " with train.alpha > 0 needs a TCK kernel: run the tck command "
          "on the same data/seed and pass train.kernel=<out>/kernel.bin");
    try {
      kernel = io::load_kernel(kernel_path);
    } catch (const std::exception& e) {
      throw DataError(std::string("failed to load kernel: ") + e.what());
    }
  }

  eval::MetricReport report;
  report.config = config_snapshot(cfg);
  Rng base(seed);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng init_rng = base.derive(kSaltModelInit + r);
    nn::TkaeModel model = nn::TkaeModel::init(spec.arch, init_rng);
    model.scaler = prepared.scaler;
    nn::TrainConfig tc = spec.train;
    tc.seed = base.derive(kSaltTrainLoop + r).seed();
    nn::TrainResult tr;
    try {
      tr = nn::train(model, prepared.train,
                     spec.needs_kernel ? &kernel : nullptr, tc);
    } catch (const std::runtime_error& e) {
      throw NumericError(e.what());
    }
    const std::string tag = "_run" + std::to_string(r);
    io::save_tkae(model, out + "/model" + tag + ".bin");
    write_loss_trace(out + "/loss" + tag + ".csv", tr.epoch_loss);
    report.seeds.push_back(tc.seed);
    if (!tr.epoch_loss.empty())
      report.add("train_loss_final", tr.epoch_loss.back());
    report.add("test_recon_mse", recurrent_test_mse(model, prepared.test));
    log_line("train: run " + std::to_string(r) + " done");
  }
  write_text(out + "/report.json", report.to_json());
}

void train_ff_runs(cli::Config& cfg, ModelKind kind,
                   const PreparedData& prepared, const std::string& out,
                   std::uint64_t seed, std::size_t runs) {
  const std::size_t t_pad =
      std::max(prepared.train.t_max(), prepared.test.t_max());
  const Matrix train_rows = data::pad_and_unroll(prepared.train, t_pad);
  const Matrix test_rows = data::pad_and_unroll(prepared.test, t_pad);
  const double corruption =
      kind == ModelKind::dae ? cfg.get_f64("dae.corruption", 0.5) : 0.0;

  eval::MetricReport report;
  report.config = config_snapshot(cfg);
  Rng base(seed);
  for (std::size_t r = 0; r < runs; ++r) {
    const std::string tag = "_run" + std::to_string(r);
    if (kind == ModelKind::pca) {
      nn::PcaModel model = nn::pca_fit(
          train_rows,
          static_cast<std::size_t>(cfg.get_i64("model.dz", 10)));
      model.scaler = prepared.scaler;
      model.t_pad = t_pad;
      io::save_pca(model, out + "/model" + tag + ".bin");
      report.seeds.push_back(seed);
      report.add("test_recon_mse",
                 folded_rows_mse(test_rows,
                                 nn::pca_reconstruct(model,
                                                 nn::pca_encode(model, test_rows)),
                                 prepared.test, t_pad));
      continue;
    }
    Rng init_rng = base.derive(kSaltModelInit + r);
    nn::FfAeModel model =
        nn::FfAeModel::init(ffae_spec(cfg, train_rows.cols()), init_rng);
    model.scaler = prepared.scaler;
    model.t_pad = t_pad;
    nn::FfTrainConfig tc = ff_train_spec(cfg);
    tc.seed = base.derive(kSaltTrainLoop + r).seed();
    nn::FfTrainResult tr;
    try {
      tr = nn::dae_train(model, train_rows, corruption, tc);
    } catch (const std::runtime_error& e) {
      throw NumericError(e.what());
    }
    io::save_ffae(model, out + "/model" + tag + ".bin");
    write_loss_trace(out + "/loss" + tag + ".csv", tr.epoch_loss);
    report.seeds.push_back(tc.seed);
    if (!tr.epoch_loss.empty())
      report.add("train_loss_final", tr.epoch_loss.back());
    report.add("test_recon_mse",
               folded_rows_mse(test_rows, model.forward(test_rows),
                               prepared.test, t_pad));
    log_line("train: run " + std::to_string(r) + " done");
  }
  write_text(out + "/report.json", report.to_json());
}

}  // namespace

void cmd_train(cli::Config& cfg) {
  cfg.reject_unknown(merge_keys(
      {&kModelKeys, &kTrainLoopKeys, &kFfKeys},
      {"out", "seed", "runs", "data.train", "data.test",
       "data.missing_rate"}));
  const std::string out = out_dir(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const std::size_t runs =
      static_cast<std::size_t>(cfg.get_i64("runs", 1));
  const ModelKind kind = parse_model_kind(cfg.require_str("model.kind"));

  data::Dataset train = load_dataset(cfg.require_str("data.train"), "train");
  data::Dataset test = load_dataset(cfg.require_str("data.test"), "test");
  PreparedData prepared =
      prepare(std::move(train), std::move(test),
              cfg.get_f64("data.missing_rate", 0.0), seed);

  if (kind == ModelKind::tkae || kind == ModelKind::tae ||
      kind == ModelKind::encdec_ad) {
    train_recurrent_runs(cfg, kind, prepared, out, seed, runs);
  } else {
    train_ff_runs(cfg, kind, prepared, out, seed, runs);
  }
  cfg.write_resolved(out + "/config.resolved");
}

void cmd_classify(cli::Config& cfg) {
  cfg.reject_unknown({"out", "seed", "model.path", "data.train", "data.test",
                      "data.missing_rate", "eval.knn_k",
                      "eval.positive_label"});
  const std::string out = out_dir(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const std::string model_path = cfg.require_str("model.path");

  data::Dataset train = load_dataset(cfg.require_str("data.train"), "train");
  data::Dataset test = load_dataset(cfg.require_str("data.test"), "test");
  if (!train.has_labels() || !test.has_labels())
    throw DataError("classify needs labeled train and test datasets");
  PreparedData prepared =
      prepare(std::move(train), std::move(test),
              cfg.get_f64("data.missing_rate", 0.0), seed);

  Matrix train_z, test_z;
  io::FileType type;
  try {
    type = io::peek_type(model_path);
  } catch (const std::exception& e) {
    throw DataError(std::string("failed to read model: ") + e.what());
  }
  switch (type) {
    case io::FileType::tkae: {
      const nn::TkaeModel model = io::load_tkae(model_path);
      train_z = nn::encode_dataset(model, prepared.train);
      test_z = nn::encode_dataset(model, prepared.test);
      break;
    }
    case io::FileType::ffae: {
      const nn::FfAeModel model = io::load_ffae(model_path);
      if (prepared.train.t_max() > model.t_pad ||
          prepared.test.t_max() > model.t_pad)
        throw DataError("classify: samples longer than the model's t_pad");
      train_z = model.encode(data::pad_and_unroll(prepared.train, model.t_pad));
      test_z = model.encode(data::pad_and_unroll(prepared.test, model.t_pad));
      break;
    }
    case io::FileType::pca: {
      const nn::PcaModel model = io::load_pca(model_path);
      if (prepared.train.t_max() > model.t_pad ||
          prepared.test.t_max() > model.t_pad)
        throw DataError("classify: samples longer than the model's t_pad");
      train_z = nn::pca_encode(model, data::pad_and_unroll(prepared.train,
                                                       model.t_pad));
      test_z = nn::pca_encode(model, data::pad_and_unroll(prepared.test,
                                                      model.t_pad));
      break;
    }
    default:
      throw DataError("classify: model file is not an encoder model");
  }

  std::vector<int> train_labels, test_labels;
  for (const auto& s : prepared.train.samples) train_labels.push_back(*s.label);
  for (const auto& s : prepared.test.samples) test_labels.push_back(*s.label);
  const std::size_t k =
      static_cast<std::size_t>(cfg.get_i64("eval.knn_k", 3));
  const std::vector<int> pred =
      eval::knn_classify(train_z, train_labels, test_z, k);

  eval::MetricReport report;
  report.config = config_snapshot(cfg);
  report.seeds.push_back(seed);
  report.add("accuracy", eval::accuracy(test_labels, pred));
  if (cfg.has("eval.positive_label")) {
    report.add("f1", eval::f1_score(
                         test_labels, pred,
                         static_cast<int>(cfg.get_i64("eval.positive_label",
                                                      1))));
  } else {
    report.add("f1_macro", eval::f1_macro(test_labels, pred));
  }

  std::vector<std::int64_t> train_ids, test_ids;
  for (const auto& s : prepared.train.samples) train_ids.push_back(s.id);
  for (const auto& s : prepared.test.samples) test_ids.push_back(s.id);
  io::save_representations_csv(train_ids, train_z, out + "/train_repr.csv");
  io::save_representations_csv(test_ids, test_z, out + "/test_repr.csv");
  // 2-component projection of the test codes, for external plotting.
  if (test_z.cols() >= 2) {
    const nn::PcaModel proj = nn::pca_fit(test_z, 2);
    io::save_representations_csv(test_ids, nn::pca_encode(proj, test_z),
                                 out + "/test_repr_pca2.csv");
  }
  write_text(out + "/report.json", report.to_json());
  cfg.write_resolved(out + "/config.resolved");
}

void cmd_impute(cli::Config& cfg) {
  cfg.reject_unknown(merge_keys(
      {&kModelKeys, &kTrainLoopKeys, &kFfKeys, &kTckKeys},
      {"data.test", "runs"}));
  const std::string out = out_dir(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const double rate = cfg.get_f64("data.missing_rate", 0.5);

  data::Dataset train = load_dataset(cfg.require_str("data.train"), "train");
  data::Dataset test = load_dataset(cfg.require_str("data.test"), "test");
  PreparedData prepared =
      prepare(std::move(train), std::move(test), rate, seed);

  nlohmann::json scores;
  std::ofstream score_csv(out + "/scores.csv");
  score_csv << "method,mse,corr,cells\n";
  auto add_score = [&](const std::string& method,
                       const data::Dataset& imputed) {
    const eval::ImputationScore s =
        eval::imputation_score(prepared.test_injected_std, imputed);
    scores[method]["mse"] = s.mse;
    scores[method]["corr"] = s.corr;
    scores[method]["cells"] = s.cells;
    scores[method]["empty"] = s.empty;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%zu\n", method.c_str(),
                  s.mse, s.corr, s.cells);
    score_csv << buf;
    log_line("impute: " + method + " mse " + std::to_string(s.mse));
  };

  // Per-variate means of the observed standardized training entries.
  std::vector<double> means(prepared.train.v, 0.0);
  std::vector<std::size_t> counts(prepared.train.v, 0);
  for (const auto& s : prepared.train.samples)
    for (std::size_t v = 0; v < s.variates(); ++v)
      for (std::size_t t = 0; t < s.length; ++t)
        if (s.observed(v, t)) {
          means[v] += s.values(v, t);
          ++counts[v];
        }
  for (std::size_t v = 0; v < means.size(); ++v)
    if (counts[v] > 0) means[v] /= static_cast<double>(counts[v]);

  {
    data::Dataset imputed = prepared.test;
    data::impute_simple(imputed, data::ImputeMode::mean, &means);
    add_score("mean", imputed);
    data::save_csv(imputed, out + "/imputed_mean.csv");
  }
  {
    data::Dataset imputed = prepared.test;
    data::impute_simple(imputed, data::ImputeMode::locf);
    add_score("locf", imputed);
    data::save_csv(imputed, out + "/imputed_locf.csv");
  }
  {
    const std::size_t t_pad =
        std::max(prepared.train.t_max(), prepared.test.t_max());
    const Matrix rows = data::pad_and_unroll(prepared.train, t_pad);
    Rng init_rng = Rng(seed).derive(kSaltModelInit);
    nn::FfAeModel model = nn::FfAeModel::init(ffae_spec(cfg, rows.cols()),
                                              init_rng);
    model.scaler = prepared.scaler;
    model.t_pad = t_pad;
    nn::FfTrainConfig tc = ff_train_spec(cfg);
    tc.seed = Rng(seed).derive(kSaltTrainLoop).seed();
    try {
      nn::dae_train(model, rows, cfg.get_f64("dae.corruption", 0.5), tc);
    } catch (const std::runtime_error& e) {
      throw NumericError(e.what());
    }
    data::Dataset imputed = prepared.test;
    for (auto& s : imputed.samples) s = nn::dae_impute(model, s);
    add_score("dae", imputed);
    data::save_csv(imputed, out + "/imputed_dae.csv");
    io::save_ffae(model, out + "/model_dae.bin");
  }
  {
    RecurrentSpec spec = recurrent_spec(cfg, ModelKind::tkae,
                                        prepared.train.v);
    spec.train.masked_loss = true;
    tck::KernelMatrix kernel;
    if (spec.train.alpha > 0.0) {
      const tck::TckResult result = tck::build_kernel(
          prepared.train, tck_spec(cfg), Rng(seed).derive(kSaltTck).seed());
      kernel = result.kernel;
    }
    Rng init_rng = Rng(seed).derive(kSaltModelInit + 1);
    nn::TkaeModel model = nn::TkaeModel::init(spec.arch, init_rng);
    model.scaler = prepared.scaler;
    nn::TrainConfig tc = spec.train;
    tc.seed = Rng(seed).derive(kSaltTrainLoop + 1).seed();
    try {
      nn::train(model, prepared.train,
                spec.train.alpha > 0.0 ? &kernel : nullptr, tc);
    } catch (const std::runtime_error& e) {
      throw NumericError(e.what());
    }
    data::Dataset imputed = prepared.test;
    for (auto& s : imputed.samples) s = nn::impute_with_decoder(model, s);
    add_score("tkae", imputed);
    data::save_csv(imputed, out + "/imputed_tkae.csv");
    io::save_tkae(model, out + "/model_tkae.bin");
  }

  write_text(out + "/scores.json", scores.dump(2));
  cfg.write_resolved(out + "/config.resolved");
}

void cmd_oneclass(cli::Config& cfg) {
  cfg.reject_unknown(merge_keys(
      {&kModelKeys, &kTrainLoopKeys, &kFfKeys, &kTckKeys},
      {"data.test", "runs", "oneclass.anomaly_label"}));
  const std::string out = out_dir(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const std::size_t runs = static_cast<std::size_t>(cfg.get_i64("runs", 1));
  const int anomaly =
      static_cast<int>(cfg.get_i64("oneclass.anomaly_label", 1));
  const ModelKind kind =
      parse_model_kind(cfg.get_str("model.kind", "tkae"));

  data::Dataset train = load_dataset(cfg.require_str("data.train"), "train");
  data::Dataset test = load_dataset(cfg.require_str("data.test"), "test");
  if (!test.has_labels())
    throw DataError("oneclass needs a labeled test dataset");
  PreparedData prepared =
      prepare(std::move(train), std::move(test),
              cfg.get_f64("data.missing_rate", 0.0), seed);

  std::vector<int> labels;
  std::size_t n_anomaly = 0;
  for (const auto& s : prepared.test.samples) {
    labels.push_back(*s.label == anomaly ? 1 : 0);
    if (labels.back() == 1) ++n_anomaly;
  }
  if (n_anomaly == 0 || n_anomaly == labels.size())
    throw DataError(
        "oneclass test split must contain both nominal and anomaly samples");

  tck::KernelMatrix kernel;
  bool kernel_ready = false;

  eval::MetricReport report;
  report.config = config_snapshot(cfg);
  Rng base(seed);
  for (std::size_t r = 0; r < runs; ++r) {
    std::vector<double> score;
    if (kind == ModelKind::tkae || kind == ModelKind::tae ||
        kind == ModelKind::encdec_ad) {
      RecurrentSpec spec = recurrent_spec(cfg, kind, prepared.train.v);
      if (spec.train.alpha > 0.0 && !kernel_ready) {
        kernel = tck::build_kernel(prepared.train, tck_spec(cfg),
                                   base.derive(kSaltTck).seed())
                     .kernel;
        kernel_ready = true;
      }
      Rng init_rng = base.derive(kSaltModelInit + r);
      nn::TkaeModel model = nn::TkaeModel::init(spec.arch, init_rng);
      model.scaler = prepared.scaler;
      nn::TrainConfig tc = spec.train;
      tc.seed = base.derive(kSaltTrainLoop + r).seed();
      try {
        nn::train(model, prepared.train,
                  spec.train.alpha > 0.0 ? &kernel : nullptr, tc);
      } catch (const std::runtime_error& e) {
        throw NumericError(e.what());
      }
      for (const auto& s : prepared.test.samples)
        score.push_back(nn::reconstruction_error(model, s));
      if (r == 0) io::save_tkae(model, out + "/model_run0.bin");
    } else {
      const std::size_t t_pad =
          std::max(prepared.train.t_max(), prepared.test.t_max());
      const Matrix rows = data::pad_and_unroll(prepared.train, t_pad);
      const Matrix test_rows = data::pad_and_unroll(prepared.test, t_pad);
      if (kind == ModelKind::pca) {
        nn::PcaModel model = nn::pca_fit(
            rows, static_cast<std::size_t>(cfg.get_i64("model.dz", 10)));
        const Matrix recon =
            nn::pca_reconstruct(model, nn::pca_encode(model, test_rows));
        for (std::size_t i = 0; i < test_rows.rows(); ++i) {
          double se = 0.0;
          for (std::size_t j = 0; j < test_rows.cols(); ++j) {
            const double d = test_rows(i, j) - recon(i, j);
            se += d * d;
          }
          score.push_back(se / static_cast<double>(test_rows.cols()));
        }
      } else {
        Rng init_rng = base.derive(kSaltModelInit + r);
        nn::FfAeModel model = nn::FfAeModel::init(
            ffae_spec(cfg, rows.cols()), init_rng);
        nn::FfTrainConfig tc = ff_train_spec(cfg);
        tc.seed = base.derive(kSaltTrainLoop + r).seed();
        const double corruption =
            kind == ModelKind::dae ? cfg.get_f64("dae.corruption", 0.5) : 0.0;
        try {
          nn::dae_train(model, rows, corruption, tc);
        } catch (const std::runtime_error& e) {
          throw NumericError(e.what());
        }
        const Matrix recon = model.forward(test_rows);
        for (std::size_t i = 0; i < test_rows.rows(); ++i) {
          double se = 0.0;
          for (std::size_t j = 0; j < test_rows.cols(); ++j) {
            const double d = test_rows(i, j) - recon(i, j);
            se += d * d;
          }
          score.push_back(se / static_cast<double>(test_rows.cols()));
        }
      }
    }
    report.seeds.push_back(base.derive(kSaltTrainLoop + r).seed());
    report.add("auc", eval::roc_auc(score, labels, 1));
    if (r == 0) {
      std::ofstream sc(out + "/scores_run0.csv");
      sc << "sample_id,score,label\n";
      char buf[64];
      for (std::size_t i = 0; i < score.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%d\n",
                      static_cast<long long>(prepared.test.samples[i].id),
                      score[i], labels[i]);
        sc << buf;
      }
    }
    log_line("oneclass: run " + std::to_string(r) + " auc " +
             std::to_string(report.runs.at("auc").back()));
  }
  write_text(out + "/report.json", report.to_json());
  cfg.write_resolved(out + "/config.resolved");
}

}  // namespace tsrep::pipe
