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

namespace tsrep::tck {

/// Mixture of diagonal Gaussians over a (variate-subset x time-segment)
/// grid: per component a time-varying mean curve per variate and one
/// time-constant stddev per variate.
struct DiagGmm {
  std::size_t components = 0;         // G
  std::vector<double> theta;          // mixture weights, simplex
  std::vector<Matrix> mean;           // per g: v_sub x seg_len curves
  Matrix stdev;                       // G x v_sub, all > 0

  std::size_t v_sub() const { return stdev.cols(); }
  std::size_t seg_len() const {
    return mean.empty() ? 0 : mean.front().cols();
  }
};

/// A sample restricted to one instance's segment and variate subset.
/// The mask is additionally zero wherever the segment extends past the
/// sample's own length.
struct RestrictedView {
  Matrix x;  // v_sub x seg_len
  Matrix r;  // v_sub x seg_len, {0, 1}
};

RestrictedView restrict_sample(const data::MtsSample& s,
                               std::size_t t0, std::size_t seg_len,
                               const std::vector<std::size_t>& variates);

/// Per-instance hyperparameters drawn from the documented ranges.
struct MapPriors {
  double a0 = 0.1;   // temporal smoothing kernel decay
  double b0 = 0.1;   // temporal smoothing kernel scale
  double n0 = 0.1;   // variance prior strength (fraction of cell count)
  double c0 = 1.5;   // symmetric Dirichlet concentration, >= 1
};

/// log p(x | R, component g) with missing cells analytically marginalized:
/// the sum of observed-cell Gaussian log densities only. All entries
/// missing gives 0 (the empty product). Throws when some stddev <= 0.
double marginal_log_pdf(const RestrictedView& x, const DiagGmm& gmm,
                        std::size_t g);

/// Posterior over components, log-sum-exp stabilized. Sums to 1 and is
/// elementwise non-negative; a sample with no observed cells gets the
/// mixture weights back.
std::vector<double> posterior(const RestrictedView& x, const DiagGmm& gmm);

struct EmOptions {
  int max_iters = 20;
  double tol = 1e-6;
};

struct EmTrace {
  std::vector<double> objective;  // log-posterior after each iteration
  bool reinitialized = false;     // an empty component was reseeded
};

/// MAP expectation-maximization on a restricted subset. Means carry a
/// Gaussian prior N(m_v, s_v^2 K) with temporal smoothing kernel
/// K(t,t') = b0 exp(-a0 (t-t')^2); variances a scaled-inverse prior of
/// strength n0 centered on the empirical variance; weights a symmetric
/// Dirichlet(c0). n0 = 0 reduces the variance update to maximum likelihood.
DiagGmm fit_map_em(const std::vector<RestrictedView>& subset, std::size_t g,
                   const MapPriors& priors, Rng& rng,
                   const EmOptions& opts = {}, EmTrace* trace = nullptr);

struct TckConfig {
  int q = 30;               // ensemble initializations (q1 = 1..Q)
  int c = 10;               // max mixture components (q2 = 2..C)
  double n_min_frac = 0.8;  // subset floor as a fraction of N
  // 0 = auto: min(6, T_max) and min(2, V). Explicit values beyond the data
  // dimensions are rejected as infeasible.
  std::size_t seg_min = 0;
  std::size_t v_min = 0;
  EmOptions em;
  // Ranges for the per-instance hyperparameter draws.
  double a0_lo = 0.001, a0_hi = 1.0;
  double b0_lo = 0.005, b0_hi = 0.2;
  double n0_lo = 0.001, n0_hi = 0.2;
  double c0_lo = 1.1, c0_hi = 2.0;

  std::size_t ensemble_size() const {
    return static_cast<std::size_t>(q) * static_cast<std::size_t>(c - 1);
  }
};

struct TckInstance {
  DiagGmm gmm;
  std::size_t t0 = 0;
  std::size_t seg_len = 0;
  std::vector<std::size_t> variates;      // sorted subset of [0, V)
  std::vector<std::size_t> train_subset;  // sorted subset of [0, N)
  MapPriors priors;
  Matrix train_posteriors;  // N x G, posteriors of every training sample
  EmTrace trace;
};

struct TckModel {
  TckConfig cfg;
  std::uint64_t seed = 0;
  std::size_t v = 0;
  std::vector<std::int64_t> sample_ids;  // training order
  std::vector<TckInstance> instances;
};

/// Symmetric similarity matrix over a sample set; PSD up to roundoff by
/// construction (a sum of Gram matrices of normalized posterior vectors).
struct KernelMatrix {
  Matrix k;
  std::vector<std::int64_t> ids;

  /// Rows/columns of the entries for `ids_wanted`, in that order.
  Matrix gather(const std::vector<std::int64_t>& ids_wanted) const;
};

struct TckResult {
  TckModel model;
  KernelMatrix kernel;
};

/// Alg: draw per-instance subsets and hyperparameters, fit a DiagGmm per
/// instance, accumulate the cosine of posterior vectors over the ensemble.
/// Deterministic per seed (per-instance derived streams, fixed reduction
/// order).
TckResult build_kernel(const data::Dataset& train, const TckConfig& cfg,
                       std::uint64_t seed);

/// Kernel block between new samples (rows) and the training samples
/// (columns) using the stored per-instance models and training posteriors.
/// Segments extending past a short new sample are handled by the mask.
Matrix kernel_out_of_sample(const TckModel& model, const data::Dataset& fresh,
                            const data::Dataset& train);

}  // namespace tsrep::tck
