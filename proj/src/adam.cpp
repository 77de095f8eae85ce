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

#include "tsrep/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace tsrep {

AdamState::AdamState(const std::vector<Matrix*>& params, AdamConfig cfg)
    : cfg_(cfg) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Matrix* p : params) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

bool AdamState::step(const std::vector<Matrix*>& params,
                     const std::vector<Matrix>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw std::invalid_argument("AdamState: parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(m_[i]) || !grads[i].same_shape(m_[i]))
      throw std::invalid_argument("AdamState: shape mismatch");
    if (!grads[i].all_finite()) return false;
  }

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i]->data();
    double* m = m_[i].data();
    double* v = v_[i].data();
    const double* g = grads[i].data();
    const std::size_t n = m_[i].size();
    for (std::size_t j = 0; j < n; ++j) {
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g[j];
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g[j] * g[j];
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      p[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
  return true;
}

double clip_global_norm(std::vector<Matrix>& grads, double max_norm) {
  double total = 0.0;
  for (const Matrix& g : grads) total += sumsq(g);
  const double norm = std::sqrt(total);
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (Matrix& g : grads) g = scale(g, factor);
  }
  return norm;
}

}  // namespace tsrep
