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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "tsrep/generators.hpp"
#include "tsrep/serialize.hpp"

using namespace tsrep;
using tsrep::test::max_abs_diff;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("tkae model round trip preserves every parameter and the scaler") {
  nn::TkaeArch arch;
  arch.cell = nn::CellKind::lstm;
  arch.layers = 2;
  arch.dz = 4;
  arch.v = 3;
  arch.bidirectional = true;
  Rng rng(1);
  nn::TkaeModel m = nn::TkaeModel::init(arch, rng);
  m.scaler.mean = {1.0, 2.0, 3.0};
  m.scaler.stddev = {0.5, 1.5, 2.5};

  const std::string path = temp_path("tsrep_model.bin");
  io::save_tkae(m, path);
  CHECK(io::peek_type(path) == io::FileType::tkae);
  const nn::TkaeModel back = io::load_tkae(path);
  CHECK(back.arch.layers == 2);
  CHECK(back.arch.bidirectional);
  auto pa = std::as_const(m).parameters();
  auto pb = std::as_const(back).parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i)
    CHECK(max_abs_diff(*pa[i], *pb[i]) == 0.0);
  CHECK(back.scaler.mean == m.scaler.mean);
  CHECK(back.scaler.stddev == m.scaler.stddev);
  std::remove(path.c_str());
}

TEST_CASE("ffae and pca round trips") {
  Rng rng(2);
  nn::FfAeConfig cfg;
  cfg.d_x = 8;
  cfg.dz = 3;
  cfg.hidden = 5;
  cfg.tied = true;
  nn::FfAeModel ff = nn::FfAeModel::init(cfg, rng);
  ff.t_pad = 4;
  const std::string fpath = temp_path("tsrep_ffae.bin");
  io::save_ffae(ff, fpath);
  const nn::FfAeModel ff2 = io::load_ffae(fpath);
  CHECK(ff2.cfg.tied);
  CHECK(ff2.t_pad == 4);
  CHECK(max_abs_diff(ff2.w1, ff.w1) == 0.0);
  std::remove(fpath.c_str());

  Matrix rows(20, 6);
  for (std::size_t i = 0; i < rows.size(); ++i) rows.data()[i] = rng.normal();
  nn::PcaModel pca = nn::pca_fit(rows, 2);
  pca.t_pad = 3;
  const std::string ppath = temp_path("tsrep_pca.bin");
  io::save_pca(pca, ppath);
  const nn::PcaModel pca2 = io::load_pca(ppath);
  CHECK(max_abs_diff(pca2.components, pca.components) == 0.0);
  CHECK(pca2.explained == pca.explained);
  CHECK(pca2.t_pad == 3);
  std::remove(ppath.c_str());
}

TEST_CASE("tck model and kernel round trips, plus the kernel csv") {
  data::ClassGenConfig gc;
  gc.n_classes = 2;
  gc.v = 3;
  gc.t_min = 8;
  gc.t_max = 8;
  gc.n_train = 12;
  gc.n_test = 0;
  gc.seed = 5;
  auto [train, test] = data::gen_classes(gc);
  tck::TckConfig tc;
  tc.q = 2;
  tc.c = 3;
  const tck::TckResult result = tck::build_kernel(train, tc, 17);

  const std::string mpath = temp_path("tsrep_tck.bin");
  io::save_tck(result.model, mpath);
  const tck::TckModel back = io::load_tck(mpath);
  REQUIRE(back.instances.size() == result.model.instances.size());
  CHECK(back.sample_ids == result.model.sample_ids);
  for (std::size_t i = 0; i < back.instances.size(); ++i) {
    const auto& a = back.instances[i];
    const auto& b = result.model.instances[i];
    CHECK(a.t0 == b.t0);
    CHECK(a.seg_len == b.seg_len);
    CHECK(a.variates == b.variates);
    CHECK(a.gmm.theta == b.gmm.theta);
    CHECK(max_abs_diff(a.train_posteriors, b.train_posteriors) == 0.0);
    CHECK(a.trace.objective == b.trace.objective);
  }
  // The reloaded model reproduces the kernel block exactly.
  const Matrix block = tck::kernel_out_of_sample(back, train, train);
  CHECK(max_abs_diff(block, result.kernel.k) < 1e-12);
  std::remove(mpath.c_str());

  const std::string kbin = temp_path("tsrep_kernel.bin");
  io::save_kernel(result.kernel, kbin);
  const tck::KernelMatrix kb = io::load_kernel(kbin);
  CHECK(kb.ids == result.kernel.ids);
  CHECK(max_abs_diff(kb.k, result.kernel.k) == 0.0);
  std::remove(kbin.c_str());

  const std::string kcsv = temp_path("tsrep_kernel.csv");
  io::save_kernel_csv(result.kernel, kcsv);
  const tck::KernelMatrix kc = io::load_kernel_csv(kcsv);
  CHECK(kc.ids == result.kernel.ids);
  CHECK(max_abs_diff(kc.k, result.kernel.k) == 0.0);  // %.17g round trips
  std::remove(kcsv.c_str());
}

TEST_CASE("wrong magic, truncation, and type confusion are rejected") {
  const std::string path = temp_path("tsrep_bogus.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE this is not a model";
  }
  CHECK_THROWS(io::peek_type(path));
  CHECK_THROWS(io::load_tkae(path));

  // a valid kernel file is not a tkae model
  tck::KernelMatrix k;
  k.ids = {1, 2};
  k.k = Matrix(2, 2, 1.0);
  io::save_kernel(k, path);
  CHECK(io::peek_type(path) == io::FileType::kernel);
  CHECK_THROWS(io::load_tkae(path));

  // truncated file
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "TSRP";
  }
  CHECK_THROWS(io::peek_type(path));
  std::remove(path.c_str());
}

TEST_CASE("representation csv export writes ids and code columns") {
  Matrix z(2, 3);
  z(0, 0) = 1.5;
  z(1, 2) = -2.25;
  const std::string path = temp_path("tsrep_repr.csv");
  io::save_representations_csv({10, 20}, z, path);
  std::ifstream in(path);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "sample_id,z1,z2,z3");
  CHECK(row1.substr(0, 6) == "10,1.5");
  CHECK(row2.find("-2.25") != std::string::npos);
  std::remove(path.c_str());
}
