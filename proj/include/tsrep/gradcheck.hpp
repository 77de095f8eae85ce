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

#include <functional>
#include <vector>

#include "tsrep/matrix.hpp"

namespace tsrep {

/// Central finite differences against analytic gradients.
///
/// `forward` must be a deterministic function of the current parameter
/// values (scheduled-sampling draws and the like fixed up front); it is
/// evaluated twice at the base point and a mismatch throws. The result is
/// max over entries of |analytic - numeric| / max(|analytic|, |numeric|,
/// denom_floor).
double gradient_check(const std::function<double()>& forward,
                      const std::vector<Matrix*>& params,
                      const std::vector<Matrix>& analytic_grads,
                      double h = 1e-5, double denom_floor = 1e-6);

}  // namespace tsrep
