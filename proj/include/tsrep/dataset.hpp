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
#include <string>
#include <vector>

#include "tsrep/matrix.hpp"
#include "tsrep/rng.hpp"

namespace tsrep::data {

/// One multivariate time series: V variates over `length` steps, with a
/// binary observation mask (1 = observed). Cells with mask 0 hold a
/// placeholder value (0 until imputed) that mask-aware code never reads.
struct MtsSample {
  std::int64_t id = 0;
  Matrix values;  // V x T
  Matrix mask;    // V x T, entries in {0, 1}
  std::optional<int> label;
  std::size_t length = 0;  // == values.cols()

  std::size_t variates() const { return values.rows(); }
  bool observed(std::size_t v, std::size_t t) const {
    return mask(v, t) != 0.0;
  }
};

struct Dataset {
  std::vector<MtsSample> samples;
  std::size_t v = 0;  // shared variate count
  std::string split;  // "train" / "test" / free-form tag
  bool imputed = false;

  std::size_t size() const { return samples.size(); }
  std::size_t t_min() const;
  std::size_t t_max() const;
  bool has_labels() const;
  void validate() const;  // shared V, lengths >= 1, mask shape/domain
};

/// Per-variate affine transform fitted on observed training entries only.
/// Degenerate variates (zero variance) keep stddev 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  void apply(Dataset& ds) const;
  void invert(Dataset& ds) const;
};

/// Long-format CSV: header `sample_id,t,v1..vV[,label]`, one row per time
/// step, empty cells mark missing values. UTF-8, '.' decimal separator.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& ds, const std::string& path);

/// Sidecar `<path>.meta` with key=value lines (v, n_samples, labels, split).
void save_metadata(const Dataset& ds, const std::string& csv_path);

/// Fits per-variate statistics on observed train entries and transforms
/// both splits in place (masked entries untouched). Throws when a variate
/// has no observed training entry.
Standardizer standardize_fit_transform(Dataset& train, Dataset& test);

/// Cells removed by inject_missing, with their pre-removal values.
struct InjectionRecord {
  struct Cell {
    std::size_t sample;
    std::size_t v;
    std::size_t t;
    double original;
  };
  std::vector<Cell> cells;
};

/// Flips exactly round(rate * V * T_s) observed entries of each sample to
/// missing, chosen uniformly without replacement; flipped values are reset
/// to the 0 placeholder and recorded in the returned ground-truth record.
InjectionRecord inject_missing(Dataset& ds, double rate, Rng& rng);

enum class ImputeMode { zero, mean, locf };

/// Fills missing entries in place: zero -> 0, mean -> per-variate means
/// (pass the training means; defaults to 0 when absent), locf -> previous
/// observed value in the same variate, 0 when there is none. Masks are kept
/// so imputed cells stay distinguishable.
void impute_simple(Dataset& ds, ImputeMode mode,
                   const std::vector<double>* variate_means = nullptr);

/// Zero-pads every sample to t_pad steps and unrolls variate-major into one
/// row per sample: [x_1(0..t_pad), x_2(0..t_pad), ...]. Throws when t_pad
/// is shorter than some sample.
Matrix pad_and_unroll(const Dataset& ds, std::size_t t_pad);

/// Inverse of pad_and_unroll for a single row.
Matrix unroll_to_values(const double* row, std::size_t v, std::size_t t_pad);

}  // namespace tsrep::data
