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
#include <string>

#include "tsrep/baselines.hpp"
#include "tsrep/tck.hpp"
#include "tsrep/tkae.hpp"

namespace tsrep::io {

/// Binary container: magic "TSRP", format version, then a type tag.
/// Numeric payloads are raw little-endian fp64/ints.
enum class FileType : std::uint32_t {
  tkae = 1,
  ffae = 2,
  pca = 3,
  tck = 4,
  kernel = 5,
};

constexpr std::uint32_t kFormatVersion = 1;

/// Type tag of an existing file; throws on bad magic or version.
FileType peek_type(const std::string& path);

void save_tkae(const nn::TkaeModel& m, const std::string& path);
nn::TkaeModel load_tkae(const std::string& path);

void save_ffae(const nn::FfAeModel& m, const std::string& path);
nn::FfAeModel load_ffae(const std::string& path);

void save_pca(const nn::PcaModel& m, const std::string& path);
nn::PcaModel load_pca(const std::string& path);

void save_tck(const tck::TckModel& m, const std::string& path);
tck::TckModel load_tck(const std::string& path);

void save_kernel(const tck::KernelMatrix& k, const std::string& path);
tck::KernelMatrix load_kernel(const std::string& path);

/// Kernel as CSV: header row of sample ids, then the matrix rows.
void save_kernel_csv(const tck::KernelMatrix& k, const std::string& path);
tck::KernelMatrix load_kernel_csv(const std::string& path);

/// Representations as CSV: sample_id, z_1 .. z_dz.
void save_representations_csv(const std::vector<std::int64_t>& ids,
                              const Matrix& z, const std::string& path);

}  // namespace tsrep::io
