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

#include "tsrep/matrix.hpp"

namespace tsrep {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moments mirror the parameter shapes; the step
/// counter advances only on applied steps.
class AdamState {
 public:
  AdamState(const std::vector<Matrix*>& params, AdamConfig cfg = {});

  /// Applies one update. Returns false without touching parameters or the
  /// step counter when any gradient entry is non-finite (the caller decides
  /// how to report it). Throws on shape mismatch.
  bool step(const std::vector<Matrix*>& params,
            const std::vector<Matrix>& grads);

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::uint64_t t_ = 0;
};

/// Scales gradients so their joint l2 norm is at most max_norm.
/// Returns the pre-clip norm.
double clip_global_norm(std::vector<Matrix>& grads, double max_norm);

}  // namespace tsrep
