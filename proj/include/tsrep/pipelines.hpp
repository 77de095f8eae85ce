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

#include <stdexcept>
#include <string>

#include "tsrep/config.hpp"
#include "tsrep/dataset.hpp"
#include "tsrep/generators.hpp"
#include "tsrep/tck.hpp"
#include "tsrep/tkae.hpp"

namespace tsrep::pipe {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shared preprocessing: inject missing values (rate, streams derived from
/// the seed so every command with the same config reproduces the same
/// masks), fit the standardizer on observed training entries, transform
/// both splits, zero-impute. Injection ground truth is kept in raw and in
/// standardized units.
struct PreparedData {
  data::Dataset train;
  data::Dataset test;
  data::Standardizer scaler;
  data::InjectionRecord train_injected;      // originals in raw units
  data::InjectionRecord test_injected;
  data::InjectionRecord train_injected_std;  // originals in standardized units
  data::InjectionRecord test_injected_std;
};

PreparedData prepare(data::Dataset train, data::Dataset test,
                     double missing_rate, std::uint64_t seed);

enum class ModelKind { tkae, tae, encdec_ad, ffae, dae, pca };
ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

/// CLI commands. They throw ConfigError / DataError / NumericError which
/// the front end maps to exit codes 2 / 3 / 4.
void cmd_gen(cli::Config& cfg);
void cmd_tck(cli::Config& cfg);
void cmd_train(cli::Config& cfg);
void cmd_impute(cli::Config& cfg);
void cmd_oneclass(cli::Config& cfg);
void cmd_classify(cli::Config& cfg);

}  // namespace tsrep::pipe
