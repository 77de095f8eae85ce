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

#include "tsrep/tck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsrep::tck {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

struct EmpiricalStats {
  std::vector<double> mean;      // per variate, observed cells
  std::vector<double> variance;  // per variate, >= degenerate floor 1.0
  Matrix mean_vt;                // per (variate, local t); fallback mean[v]
};

EmpiricalStats subset_stats(const std::vector<RestrictedView>& subset,
                            std::size_t v_sub, std::size_t seg_len) {
  EmpiricalStats st;
  st.mean.assign(v_sub, 0.0);
  st.variance.assign(v_sub, 1.0);
  st.mean_vt = Matrix(v_sub, seg_len);
  Matrix count_vt(v_sub, seg_len);
  for (std::size_t v = 0; v < v_sub; ++v) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& rv : subset)
      for (std::size_t t = 0; t < seg_len; ++t)
        if (rv.r(v, t) != 0.0) {
          s += rv.x(v, t);
          st.mean_vt(v, t) += rv.x(v, t);
          count_vt(v, t) += 1.0;
          ++n;
        }
    if (n == 0) continue;  // keep defaults: mean 0, variance 1
    st.mean[v] = s / static_cast<double>(n);
    double s2 = 0.0;
    for (const auto& rv : subset)
      for (std::size_t t = 0; t < seg_len; ++t)
        if (rv.r(v, t) != 0.0) {
          const double d = rv.x(v, t) - st.mean[v];
          s2 += d * d;
        }
    const double var = s2 / static_cast<double>(n);
    st.variance[v] = var < 1e-12 ? 1.0 : var;
  }
  for (std::size_t v = 0; v < v_sub; ++v)
    for (std::size_t t = 0; t < seg_len; ++t)
      st.mean_vt(v, t) = count_vt(v, t) > 0.0
                             ? st.mean_vt(v, t) / count_vt(v, t)
                             : st.mean[v];
  return st;
}

// Smoothing kernel K(t,t') = b0 exp(-a0 (t-t')^2), ridge-jittered so the
// Cholesky stays well posed for slowly decaying kernels.
Matrix smoothing_kernel_inverse(std::size_t seg_len, double a0, double b0) {
  Matrix k(seg_len, seg_len);
  for (std::size_t t = 0; t < seg_len; ++t)
    for (std::size_t u = 0; u < seg_len; ++u) {
      const double d = static_cast<double>(t) - static_cast<double>(u);
      k(t, u) = b0 * std::exp(-a0 * d * d);
    }
  for (std::size_t t = 0; t < seg_len; ++t) k(t, t) += 1e-5 * b0;
  return cholesky_inverse(k);
}

double log_prior(const DiagGmm& gmm, const EmpiricalStats& st,
                 const Matrix& kinv, const MapPriors& priors,
                 double pseudo_cells) {
  double lp = 0.0;
  for (std::size_t g = 0; g < gmm.components; ++g) {
    if (priors.c0 > 1.0 && gmm.theta[g] > 0.0)
      lp += (priors.c0 - 1.0) * std::log(gmm.theta[g]);
    for (std::size_t v = 0; v < gmm.v_sub(); ++v) {
      // Gaussian prior on the mean curve.
      const std::size_t L = gmm.seg_len();
      std::vector<double> d(L);
      for (std::size_t t = 0; t < L; ++t)
        d[t] = gmm.mean[g](v, t) - st.mean[v];
      double quad = 0.0;
      for (std::size_t t = 0; t < L; ++t) {
        double row = 0.0;
        for (std::size_t u = 0; u < L; ++u) row += kinv(t, u) * d[u];
        quad += d[t] * row;
      }
      lp -= 0.5 * quad / st.variance[v];
      // Scaled-inverse prior on the variance.
      const double nu = priors.n0 * pseudo_cells;
      const double var = gmm.stdev(g, v) * gmm.stdev(g, v);
      lp -= 0.5 * nu * (std::log(var) + st.variance[v] / var);
    }
  }
  return lp;
}

}  // namespace

RestrictedView restrict_sample(const data::MtsSample& s, std::size_t t0,
                               std::size_t seg_len,
                               const std::vector<std::size_t>& variates) {
  RestrictedView rv;
  rv.x = Matrix(variates.size(), seg_len);
  rv.r = Matrix(variates.size(), seg_len);
  for (std::size_t i = 0; i < variates.size(); ++i) {
    const std::size_t v = variates[i];
    for (std::size_t t = 0; t < seg_len; ++t) {
      const std::size_t tt = t0 + t;
      if (tt < s.length && s.observed(v, tt)) {
        rv.x(i, t) = s.values(v, tt);
        rv.r(i, t) = 1.0;
      }
    }
  }
  return rv;
}

double marginal_log_pdf(const RestrictedView& x, const DiagGmm& gmm,
                        std::size_t g) {
  if (g >= gmm.components)
    throw std::invalid_argument("marginal_log_pdf: component out of range");
  if (x.x.rows() != gmm.v_sub() || x.x.cols() != gmm.seg_len())
    throw std::invalid_argument("marginal_log_pdf: shape mismatch");
  const Matrix& mu = gmm.mean[g];
  double ll = 0.0;
  for (std::size_t v = 0; v < gmm.v_sub(); ++v) {
    const double sd = gmm.stdev(g, v);
    if (sd <= 0.0)
      throw std::invalid_argument("marginal_log_pdf: stddev <= 0");
    const double inv_var = 1.0 / (sd * sd);
    const double log_norm = -0.5 * (kLog2Pi + 2.0 * std::log(sd));
    for (std::size_t t = 0; t < x.x.cols(); ++t) {
      if (x.r(v, t) == 0.0) continue;
      const double d = x.x(v, t) - mu(v, t);
      ll += log_norm - 0.5 * d * d * inv_var;
    }
  }
  return ll;
}

std::vector<double> posterior(const RestrictedView& x, const DiagGmm& gmm) {
  const std::size_t g_count = gmm.components;
  std::vector<double> logw(g_count);
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < g_count; ++g) {
    logw[g] = std::log(gmm.theta[g]) + marginal_log_pdf(x, gmm, g);
    max_logw = std::max(max_logw, logw[g]);
  }
  double denom = 0.0;
  for (std::size_t g = 0; g < g_count; ++g) {
    logw[g] = std::exp(logw[g] - max_logw);
    denom += logw[g];
  }
  if (!(denom > 0.0))
    throw std::runtime_error("posterior: degenerate normalization");
  for (double& w : logw) w /= denom;
  return logw;
}

DiagGmm fit_map_em(const std::vector<RestrictedView>& subset, std::size_t g,
                   const MapPriors& priors, Rng& rng, const EmOptions& opts,
                   EmTrace* trace) {
  if (subset.empty()) throw std::invalid_argument("fit_map_em: empty subset");
  if (g < 1) throw std::invalid_argument("fit_map_em: g < 1");
  const std::size_t v_sub = subset.front().x.rows();
  const std::size_t seg_len = subset.front().x.cols();
  const std::size_t n = subset.size();
  const double pseudo_cells =
      static_cast<double>(n) * static_cast<double>(seg_len);

  const EmpiricalStats st = subset_stats(subset, v_sub, seg_len);
  const Matrix kinv = smoothing_kernel_inverse(seg_len, priors.a0, priors.b0);

  DiagGmm gmm;
  gmm.components = g;
  gmm.theta.assign(g, 1.0 / static_cast<double>(g));
  gmm.stdev = Matrix(g, v_sub);
  gmm.mean.reserve(g);
  for (std::size_t gi = 0; gi < g; ++gi) {
    Matrix mu(v_sub, seg_len);
    for (std::size_t v = 0; v < v_sub; ++v) {
      const double sd = std::sqrt(st.variance[v]);
      gmm.stdev(gi, v) = sd;
      for (std::size_t t = 0; t < seg_len; ++t)
        mu(v, t) = st.mean_vt(v, t) + 0.5 * sd * rng.normal();
    }
    gmm.mean.push_back(std::move(mu));
  }

  // Prior mean contribution to the normal equations is constant.
  Matrix prior_rhs(v_sub, seg_len);  // row v: (Kinv * m_v 1) / s_v^2
  for (std::size_t v = 0; v < v_sub; ++v)
    for (std::size_t t = 0; t < seg_len; ++t) {
      double s = 0.0;
      for (std::size_t u = 0; u < seg_len; ++u) s += kinv(t, u);
      prior_rhs(v, t) = s * st.mean[v] / st.variance[v];
    }

  std::vector<std::vector<double>> resp(n, std::vector<double>(g));
  double prev_obj = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // E-step.
    for (std::size_t i = 0; i < n; ++i) resp[i] = posterior(subset[i], gmm);

    // M-step: theta, then means given old variances, then variances.
    std::vector<double> n_g(g, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t gi = 0; gi < g; ++gi) n_g[gi] += resp[i][gi];

    bool reinit = false;
    for (std::size_t gi = 0; gi < g; ++gi) {
      if (n_g[gi] < 1e-12 * static_cast<double>(n)) {
        // Empty component: reseed around the empirical mean.
        for (std::size_t v = 0; v < v_sub; ++v) {
          const double sd = std::sqrt(st.variance[v]);
          gmm.stdev(gi, v) = sd;
          for (std::size_t t = 0; t < seg_len; ++t)
            gmm.mean[gi](v, t) = st.mean_vt(v, t) + 0.5 * sd * rng.normal();
        }
        reinit = true;
      }
    }
    if (reinit && trace != nullptr) trace->reinitialized = true;

    const double dir = priors.c0 - 1.0;
    double theta_sum = 0.0;
    for (std::size_t gi = 0; gi < g; ++gi) {
      gmm.theta[gi] = n_g[gi] + dir;
      theta_sum += gmm.theta[gi];
    }
    for (std::size_t gi = 0; gi < g; ++gi) gmm.theta[gi] /= theta_sum;

    for (std::size_t gi = 0; gi < g; ++gi) {
      for (std::size_t v = 0; v < v_sub; ++v) {
        const double old_var = gmm.stdev(gi, v) * gmm.stdev(gi, v);
        std::vector<double> count(seg_len, 0.0), sx(seg_len, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const double w = resp[i][gi];
          if (w == 0.0) continue;
          const RestrictedView& rv = subset[i];
          for (std::size_t t = 0; t < seg_len; ++t)
            if (rv.r(v, t) != 0.0) {
              count[t] += w;
              sx[t] += w * rv.x(v, t);
            }
        }
        // (Kinv/s_v^2 + diag(count)/var) mu = sx/var + prior_rhs
        Matrix amat = scale(kinv, 1.0 / st.variance[v]);
        Matrix rhs(seg_len, 1);
        for (std::size_t t = 0; t < seg_len; ++t) {
          amat(t, t) += count[t] / old_var;
          rhs(t, 0) = sx[t] / old_var + prior_rhs(v, t);
        }
        const Matrix mu = cholesky_solve(amat, rhs);
        for (std::size_t t = 0; t < seg_len; ++t)
          gmm.mean[gi](v, t) = mu(t, 0);

        double s2 = 0.0, c_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double w = resp[i][gi];
          if (w == 0.0) continue;
          const RestrictedView& rv = subset[i];
          for (std::size_t t = 0; t < seg_len; ++t)
            if (rv.r(v, t) != 0.0) {
              const double d = rv.x(v, t) - mu(t, 0);
              s2 += w * d * d;
              c_total += w;
            }
        }
        const double nu = priors.n0 * pseudo_cells;
        const double denom = c_total + nu;
        double var = denom > 0.0 ? (s2 + nu * st.variance[v]) / denom
                                 : st.variance[v];
        if (var < 1e-12) var = 1e-12;
        gmm.stdev(gi, v) = std::sqrt(var);
      }
    }

    // Objective: marginal log-likelihood plus prior terms.
    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double max_lw = -std::numeric_limits<double>::infinity();
      std::vector<double> lw(g);
      for (std::size_t gi = 0; gi < g; ++gi) {
        lw[gi] = std::log(gmm.theta[gi]) +
                 marginal_log_pdf(subset[i], gmm, gi);
        max_lw = std::max(max_lw, lw[gi]);
      }
      double s = 0.0;
      for (std::size_t gi = 0; gi < g; ++gi) s += std::exp(lw[gi] - max_lw);
      loglik += max_lw + std::log(s);
    }
    const double obj =
        loglik + log_prior(gmm, st, kinv, priors, pseudo_cells);
    if (trace != nullptr) trace->objective.push_back(obj);
    if (iter > 0 && std::abs(obj - prev_obj) < opts.tol) break;
    prev_obj = obj;
  }
  return gmm;
}

Matrix KernelMatrix::gather(const std::vector<std::int64_t>& ids_wanted) const {
  std::vector<std::size_t> index;
  index.reserve(ids_wanted.size());
  for (std::int64_t id : ids_wanted) {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end())
      throw std::runtime_error("KernelMatrix::gather: unknown sample id " +
                               std::to_string(id));
    index.push_back(static_cast<std::size_t>(it - ids.begin()));
  }
  Matrix out(index.size(), index.size());
  for (std::size_t i = 0; i < index.size(); ++i)
    for (std::size_t j = 0; j < index.size(); ++j)
      out(i, j) = k(index[i], index[j]);
  return out;
}

namespace {

// Rows are posteriors; returns the rows normalized to unit l2 norm.
Matrix normalize_rows(const Matrix& p) {
  Matrix u = p;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    double norm2 = 0.0;
    for (std::size_t j = 0; j < u.cols(); ++j) norm2 += u(i, j) * u(i, j);
    const double inv = 1.0 / std::sqrt(norm2);  // simplex rows: norm >= 1/G
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) *= inv;
  }
  return u;
}

Matrix instance_posteriors(const TckInstance& inst,
                           const data::Dataset& ds) {
  Matrix p(ds.size(), inst.gmm.components);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const RestrictedView rv = restrict_sample(ds.samples[i], inst.t0,
                                              inst.seg_len, inst.variates);
    const auto post = posterior(rv, inst.gmm);
    for (std::size_t g = 0; g < post.size(); ++g) p(i, g) = post[g];
  }
  return p;
}

}  // namespace

TckResult build_kernel(const data::Dataset& train, const TckConfig& cfg,
                       std::uint64_t seed) {
  const std::size_t n = train.size();
  const std::size_t v = train.v;
  if (n < 2) throw std::invalid_argument("build_kernel: need at least 2 samples");
  if (cfg.q < 1 || cfg.c < 2)
    throw std::invalid_argument("build_kernel: need Q >= 1 and C >= 2");
  const std::size_t t_max = train.t_max();
  if (cfg.v_min > v || cfg.seg_min > t_max)
    throw std::invalid_argument("build_kernel: infeasible subset bounds");
  const std::size_t v_min = cfg.v_min == 0 ? std::min<std::size_t>(2, v)
                                           : cfg.v_min;
  const std::size_t seg_min = cfg.seg_min == 0
                                  ? std::min<std::size_t>(6, t_max)
                                  : cfg.seg_min;
  const std::size_t n_min = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(cfg.n_min_frac * static_cast<double>(n))));
  if (n_min > n)
    throw std::invalid_argument("build_kernel: infeasible subset bounds");

  Rng rng(seed);
  TckResult out;
  out.model.cfg = cfg;
  out.model.seed = seed;
  out.model.v = v;
  for (const auto& s : train.samples) out.model.sample_ids.push_back(s.id);
  out.kernel.ids = out.model.sample_ids;
  out.kernel.k = Matrix(n, n);

  std::size_t instance_index = 0;
  for (int q1 = 0; q1 < cfg.q; ++q1) {
    for (int q2 = 2; q2 <= cfg.c; ++q2, ++instance_index) {
      Rng irng = rng.derive(instance_index);

      TckInstance inst;
      inst.priors.a0 = irng.uniform(cfg.a0_lo, cfg.a0_hi);
      inst.priors.b0 = irng.uniform(cfg.b0_lo, cfg.b0_hi);
      inst.priors.n0 = irng.uniform(cfg.n0_lo, cfg.n0_hi);
      inst.priors.c0 = irng.uniform(cfg.c0_lo, cfg.c0_hi);

      inst.seg_len =
          seg_min + static_cast<std::size_t>(irng.below(t_max - seg_min + 1));
      inst.t0 = static_cast<std::size_t>(irng.below(t_max - inst.seg_len + 1));

      const std::size_t v_count =
          v_min + static_cast<std::size_t>(irng.below(v - v_min + 1));
      inst.variates = irng.sample_without_replacement(v, v_count);
      std::sort(inst.variates.begin(), inst.variates.end());

      const std::size_t n_count =
          n_min + static_cast<std::size_t>(irng.below(n - n_min + 1));
      inst.train_subset = irng.sample_without_replacement(n, n_count);
      std::sort(inst.train_subset.begin(), inst.train_subset.end());

      std::vector<RestrictedView> subset;
      subset.reserve(n_count);
      for (std::size_t si : inst.train_subset)
        subset.push_back(restrict_sample(train.samples[si], inst.t0,
                                         inst.seg_len, inst.variates));

      inst.gmm = fit_map_em(subset, static_cast<std::size_t>(q2),
                            inst.priors, irng, cfg.em, &inst.trace);

      inst.train_posteriors = instance_posteriors(inst, train);
      const Matrix u = normalize_rows(inst.train_posteriors);
      add_in_place(out.kernel.k, matmul_nt(u, u));

      out.model.instances.push_back(std::move(inst));
    }
  }
  return out;
}

Matrix kernel_out_of_sample(const TckModel& model, const data::Dataset& fresh,
                            const data::Dataset& train) {
  if (fresh.v != model.v)
    throw std::invalid_argument("kernel_out_of_sample: variate mismatch");
  if (train.size() != model.sample_ids.size())
    throw std::invalid_argument(
        "kernel_out_of_sample: training set does not match the model");
  for (std::size_t i = 0; i < train.size(); ++i)
    if (train.samples[i].id != model.sample_ids[i])
      throw std::invalid_argument(
          "kernel_out_of_sample: training ids do not match the model");

  Matrix block(fresh.size(), train.size());
  for (const auto& inst : model.instances) {
    const Matrix p = instance_posteriors(inst, fresh);
    const Matrix u_new = normalize_rows(p);
    const Matrix u_train = normalize_rows(inst.train_posteriors);
    add_in_place(block, matmul_nt(u_new, u_train));
  }
  return block;
}

}  // namespace tsrep::tck
