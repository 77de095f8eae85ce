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

#include "tsrep/serialize.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsrep::io {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'R', 'P'};

class Writer {
 public:
  Writer(const std::string& path, FileType type) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for write: " + path);
    out_.write(kMagic, 4);
    u32(kFormatVersion);
    u32(static_cast<std::uint32_t>(type));
  }

  void u32(std::uint32_t v) { raw(&v, sizeof(v)); }
  void u64(std::uint64_t v) { raw(&v, sizeof(v)); }
  void i64(std::int64_t v) { raw(&v, sizeof(v)); }
  void f64(double v) { raw(&v, sizeof(v)); }

  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }

  void matrix(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    raw(m.data(), m.size() * sizeof(double));
  }

  void doubles(const std::vector<double>& v) {
    u64(v.size());
    raw(v.data(), v.size() * sizeof(double));
  }

  void sizes(const std::vector<std::size_t>& v) {
    u64(v.size());
    for (std::size_t x : v) u64(x);
  }

 private:
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw std::runtime_error("write failure");
  }
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open for read: " + path);
    char magic[4];
    raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
      throw std::runtime_error("bad magic in " + path);
    const std::uint32_t version = u32();
    if (version != kFormatVersion)
      throw std::runtime_error("unsupported format version in " + path);
    type_ = static_cast<FileType>(u32());
  }

  FileType type() const { return type_; }

  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  std::int64_t i64() { return get<std::int64_t>(); }
  double f64() { return get<double>(); }

  std::string str() {
    const std::uint64_t n = u64();
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }

  Matrix matrix() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    Matrix m(rows, cols);
    raw(m.data(), m.size() * sizeof(double));
    return m;
  }

  std::vector<double> doubles() {
    const std::uint64_t n = u64();
    std::vector<double> v(n);
    raw(v.data(), n * sizeof(double));
    return v;
  }

  std::vector<std::size_t> sizes() {
    const std::uint64_t n = u64();
    std::vector<std::size_t> v(n);
    for (auto& x : v) x = u64();
    return v;
  }

 private:
  template <typename T>
  T get() {
    T v;
    raw(&v, sizeof(v));
    return v;
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n))
      throw std::runtime_error("truncated file");
  }
  std::ifstream in_;
  FileType type_;
};

void expect_type(const Reader& r, FileType want, const std::string& path) {
  if (r.type() != want)
    throw std::runtime_error("wrong file type in " + path);
}

void write_scaler(Writer& w, const data::Standardizer& s) {
  w.doubles(s.mean);
  w.doubles(s.stddev);
}

data::Standardizer read_scaler(Reader& r) {
  data::Standardizer s;
  s.mean = r.doubles();
  s.stddev = r.doubles();
  return s;
}

void write_cell(Writer& w, const nn::CellParams& p) {
  w.u32(p.kind == nn::CellKind::gru ? 0 : 1);
  w.u64(p.input_size);
  w.u64(p.hidden_size);
  for (const auto& m : p.w) w.matrix(m);
  for (const auto& m : p.u) w.matrix(m);
  for (const auto& m : p.b) w.matrix(m);
}

nn::CellParams read_cell(Reader& r) {
  nn::CellParams p;
  p.kind = r.u32() == 0 ? nn::CellKind::gru : nn::CellKind::lstm;
  p.input_size = r.u64();
  p.hidden_size = r.u64();
  const std::size_t gates = nn::CellParams::gate_count(p.kind);
  for (std::size_t g = 0; g < gates; ++g) p.w.push_back(r.matrix());
  for (std::size_t g = 0; g < gates; ++g) p.u.push_back(r.matrix());
  for (std::size_t g = 0; g < gates; ++g) p.b.push_back(r.matrix());
  return p;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FileType peek_type(const std::string& path) {
  Reader r(path);
  return r.type();
}

void save_tkae(const nn::TkaeModel& m, const std::string& path) {
  Writer w(path, FileType::tkae);
  w.u32(m.arch.cell == nn::CellKind::gru ? 0 : 1);
  w.u64(m.arch.layers);
  w.u64(m.arch.dz);
  w.u64(m.arch.v);
  w.u32(m.arch.bidirectional ? 1 : 0);
  for (const auto& c : m.enc_fwd) write_cell(w, c);
  for (const auto& c : m.enc_bwd) write_cell(w, c);
  for (const auto& c : m.dec) write_cell(w, c);
  w.matrix(m.combine_w);
  w.matrix(m.combine_b);
  w.matrix(m.out_w);
  w.matrix(m.out_b);
  write_scaler(w, m.scaler);
}

nn::TkaeModel load_tkae(const std::string& path) {
  Reader r(path);
  expect_type(r, FileType::tkae, path);
  nn::TkaeModel m;
  m.arch.cell = r.u32() == 0 ? nn::CellKind::gru : nn::CellKind::lstm;
  m.arch.layers = r.u64();
  m.arch.dz = r.u64();
  m.arch.v = r.u64();
  m.arch.bidirectional = r.u32() != 0;
  for (std::size_t l = 0; l < m.arch.layers; ++l)
    m.enc_fwd.push_back(read_cell(r));
  if (m.arch.bidirectional)
    for (std::size_t l = 0; l < m.arch.layers; ++l)
      m.enc_bwd.push_back(read_cell(r));
  for (std::size_t l = 0; l < m.arch.layers; ++l)
    m.dec.push_back(read_cell(r));
  m.combine_w = r.matrix();
  m.combine_b = r.matrix();
  m.out_w = r.matrix();
  m.out_b = r.matrix();
  m.scaler = read_scaler(r);
  return m;
}

void save_ffae(const nn::FfAeModel& m, const std::string& path) {
  Writer w(path, FileType::ffae);
  w.u64(m.cfg.d_x);
  w.u64(m.cfg.dz);
  w.u64(m.cfg.hidden);
  w.u32(static_cast<std::uint32_t>(m.cfg.hidden_act));
  w.u32(static_cast<std::uint32_t>(m.cfg.decoder_act));
  w.u32(m.cfg.tied ? 1 : 0);
  w.u64(m.t_pad);
  w.matrix(m.w1);
  w.matrix(m.b1);
  w.matrix(m.w2);
  w.matrix(m.b2);
  w.matrix(m.w3);
  w.matrix(m.b3);
  w.matrix(m.w4);
  w.matrix(m.b4);
  write_scaler(w, m.scaler);
}

nn::FfAeModel load_ffae(const std::string& path) {
  Reader r(path);
  expect_type(r, FileType::ffae, path);
  nn::FfAeModel m;
  m.cfg.d_x = r.u64();
  m.cfg.dz = r.u64();
  m.cfg.hidden = r.u64();
  m.cfg.hidden_act = static_cast<nn::FfAeConfig::Act>(r.u32());
  m.cfg.decoder_act = static_cast<nn::FfAeConfig::Act>(r.u32());
  m.cfg.tied = r.u32() != 0;
  m.t_pad = r.u64();
  m.w1 = r.matrix();
  m.b1 = r.matrix();
  m.w2 = r.matrix();
  m.b2 = r.matrix();
  m.w3 = r.matrix();
  m.b3 = r.matrix();
  m.w4 = r.matrix();
  m.b4 = r.matrix();
  m.scaler = read_scaler(r);
  return m;
}

void save_pca(const nn::PcaModel& m, const std::string& path) {
  Writer w(path, FileType::pca);
  w.doubles(m.mean);
  w.matrix(m.components);
  w.doubles(m.explained);
  w.u32(m.rank_deficient ? 1 : 0);
  w.u64(m.t_pad);
  write_scaler(w, m.scaler);
}

nn::PcaModel load_pca(const std::string& path) {
  Reader r(path);
  expect_type(r, FileType::pca, path);
  nn::PcaModel m;
  m.mean = r.doubles();
  m.components = r.matrix();
  m.explained = r.doubles();
  m.rank_deficient = r.u32() != 0;
  m.t_pad = r.u64();
  m.scaler = read_scaler(r);
  return m;
}

void save_tck(const tck::TckModel& m, const std::string& path) {
  Writer w(path, FileType::tck);
  w.u32(static_cast<std::uint32_t>(m.cfg.q));
  w.u32(static_cast<std::uint32_t>(m.cfg.c));
  w.f64(m.cfg.n_min_frac);
  w.u64(m.cfg.seg_min);
  w.u64(m.cfg.v_min);
  w.u32(static_cast<std::uint32_t>(m.cfg.em.max_iters));
  w.f64(m.cfg.em.tol);
  w.f64(m.cfg.a0_lo);
  w.f64(m.cfg.a0_hi);
  w.f64(m.cfg.b0_lo);
  w.f64(m.cfg.b0_hi);
  w.f64(m.cfg.n0_lo);
  w.f64(m.cfg.n0_hi);
  w.f64(m.cfg.c0_lo);
  w.f64(m.cfg.c0_hi);
  w.u64(m.seed);
  w.u64(m.v);
  w.u64(m.sample_ids.size());
  for (std::int64_t id : m.sample_ids) w.i64(id);
  w.u64(m.instances.size());
  for (const auto& inst : m.instances) {
    w.u64(inst.t0);
    w.u64(inst.seg_len);
    w.sizes(inst.variates);
    w.sizes(inst.train_subset);
    w.f64(inst.priors.a0);
    w.f64(inst.priors.b0);
    w.f64(inst.priors.n0);
    w.f64(inst.priors.c0);
    w.u64(inst.gmm.components);
    w.doubles(inst.gmm.theta);
    for (const auto& mu : inst.gmm.mean) w.matrix(mu);
    w.matrix(inst.gmm.stdev);
    w.matrix(inst.train_posteriors);
    w.doubles(inst.trace.objective);
    w.u32(inst.trace.reinitialized ? 1 : 0);
  }
}

tck::TckModel load_tck(const std::string& path) {
  Reader r(path);
  expect_type(r, FileType::tck, path);
  tck::TckModel m;
  m.cfg.q = static_cast<int>(r.u32());
  m.cfg.c = static_cast<int>(r.u32());
  m.cfg.n_min_frac = r.f64();
  m.cfg.seg_min = r.u64();
  m.cfg.v_min = r.u64();
  m.cfg.em.max_iters = static_cast<int>(r.u32());
  m.cfg.em.tol = r.f64();
  m.cfg.a0_lo = r.f64();
  m.cfg.a0_hi = r.f64();
  m.cfg.b0_lo = r.f64();
  m.cfg.b0_hi = r.f64();
  m.cfg.n0_lo = r.f64();
  m.cfg.n0_hi = r.f64();
  m.cfg.c0_lo = r.f64();
  m.cfg.c0_hi = r.f64();
  m.seed = r.u64();
  m.v = r.u64();
  const std::uint64_t n_ids = r.u64();
  for (std::uint64_t i = 0; i < n_ids; ++i) m.sample_ids.push_back(r.i64());
  const std::uint64_t n_inst = r.u64();
  for (std::uint64_t i = 0; i < n_inst; ++i) {
    tck::TckInstance inst;
    inst.t0 = r.u64();
    inst.seg_len = r.u64();
    inst.variates = r.sizes();
    inst.train_subset = r.sizes();
    inst.priors.a0 = r.f64();
    inst.priors.b0 = r.f64();
    inst.priors.n0 = r.f64();
    inst.priors.c0 = r.f64();
    inst.gmm.components = r.u64();
    inst.gmm.theta = r.doubles();
    for (std::size_t g = 0; g < inst.gmm.components; ++g)
      inst.gmm.mean.push_back(r.matrix());
    inst.gmm.stdev = r.matrix();
    inst.train_posteriors = r.matrix();
    inst.trace.objective = r.doubles();
    inst.trace.reinitialized = r.u32() != 0;
    m.instances.push_back(std::move(inst));
  }
  return m;
}

void save_kernel(const tck::KernelMatrix& k, const std::string& path) {
  Writer w(path, FileType::kernel);
  w.u64(k.ids.size());
  for (std::int64_t id : k.ids) w.i64(id);
  w.matrix(k.k);
}

tck::KernelMatrix load_kernel(const std::string& path) {
  Reader r(path);
  expect_type(r, FileType::kernel, path);
  tck::KernelMatrix k;
  const std::uint64_t n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) k.ids.push_back(r.i64());
  k.k = r.matrix();
  return k;
}

void save_kernel_csv(const tck::KernelMatrix& k, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  for (std::size_t i = 0; i < k.ids.size(); ++i)
    out << (i > 0 ? "," : "") << k.ids[i];
  out << "\n";
  for (std::size_t i = 0; i < k.k.rows(); ++i) {
    for (std::size_t j = 0; j < k.k.cols(); ++j)
      out << (j > 0 ? "," : "") << format_double(k.k(i, j));
    out << "\n";
  }
}

tck::KernelMatrix load_kernel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  tck::KernelMatrix k;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty kernel csv: " + path);
  std::stringstream header(line);
  std::string field;
  while (std::getline(header, field, ','))
    k.ids.push_back(std::stoll(field));
  const std::size_t n = k.ids.size();
  k.k = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated kernel csv: " + path);
    std::stringstream row(line);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(row, field, ','))
        throw std::runtime_error("short kernel csv row in " + path);
      k.k(i, j) = std::stod(field);
    }
  }
  return k;
}

void save_representations_csv(const std::vector<std::int64_t>& ids,
                              const Matrix& z, const std::string& path) {
  if (ids.size() != z.rows())
    throw std::invalid_argument("save_representations_csv: id count");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << "sample_id";
  for (std::size_t j = 0; j < z.cols(); ++j) out << ",z" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < z.rows(); ++i) {
    out << ids[i];
    for (std::size_t j = 0; j < z.cols(); ++j)
      out << "," << format_double(z(i, j));
    out << "\n";
  }
}

}  // namespace tsrep::io
