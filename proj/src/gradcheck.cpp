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

#include "tsrep/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace tsrep {

double gradient_check(const std::function<double()>& forward,
                      const std::vector<Matrix*>& params,
                      const std::vector<Matrix>& analytic_grads,
                      double h, double denom_floor) {
  if (h <= 0.0) throw std::invalid_argument("gradient_check: h <= 0");
  if (params.size() != analytic_grads.size())
    throw std::invalid_argument("gradient_check: gradient count mismatch");

  const double base = forward();
  if (forward() != base)
    throw std::runtime_error(
        "gradient_check: forward is not deterministic (two evaluations "
        "disagree)");

  double max_rel = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& param = *params[p];
    if (!param.same_shape(analytic_grads[p]))
      throw std::invalid_argument("gradient_check: shape mismatch");
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double saved = param.data()[i];
      param.data()[i] = saved + h;
      const double plus = forward();
      param.data()[i] = saved - h;
      const double minus = forward();
      param.data()[i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double analytic = analytic_grads[p].data()[i];
      const double denom = std::max(
          {std::abs(analytic), std::abs(numeric), denom_floor});
      max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
    }
  }
  return max_rel;
}

}  // namespace tsrep
