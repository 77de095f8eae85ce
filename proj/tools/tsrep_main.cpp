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

#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tsrep/config.hpp"
#include "tsrep/pipelines.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::string seed;
  std::string epochs;
  std::string runs;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "key = value configuration file");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--seed", flags.seed, "base seed (overrides config)");
  cmd->add_option("--epochs", flags.epochs,
                  "training epochs (overrides config)");
  cmd->add_option("--runs", flags.runs,
                  "independent runs (overrides config)");
}

tsrep::cli::Config build_config(const CommonFlags& flags) {
  tsrep::cli::Config cfg;
  if (!flags.config_path.empty())
    cfg = tsrep::cli::Config::from_file(flags.config_path);
  if (!flags.out.empty()) cfg.set("out", flags.out);
  if (!flags.seed.empty()) cfg.set("seed", flags.seed);
  if (!flags.epochs.empty()) cfg.set("train.epochs", flags.epochs);
  if (!flags.runs.empty()) cfg.set("runs", flags.runs);
  return cfg;
}

int run(const CommonFlags& flags,
        const std::function<void(tsrep::cli::Config&)>& command) {
  try {
    tsrep::cli::Config cfg = build_config(flags);
    command(cfg);
    return 0;
  } catch (const tsrep::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const tsrep::pipe::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const tsrep::pipe::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tsrep: compressed representations of multivariate time series with "
      "missing data (recurrent kernelized autoencoders, TCK similarity, "
      "imputation and one-class pipelines)"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(tsrep::cli::Config&);
  };
  const Sub subs[] = {
      {"gen", "generate a synthetic dataset (sine, ode, classes)",
       tsrep::pipe::cmd_gen},
      {"tck", "build the TCK similarity kernel over a training set",
       tsrep::pipe::cmd_tck},
      {"train", "train a representation model (tkae|tae|encdec-ad|ffae|dae|pca)",
       tsrep::pipe::cmd_train},
      {"impute", "score mean/LOCF/DAE/TKAE imputation on injected missing data",
       tsrep::pipe::cmd_impute},
      {"oneclass", "one-class scoring by reconstruction error (AUC)",
       tsrep::pipe::cmd_oneclass},
      {"classify", "kNN classification of learned representations",
       tsrep::pipe::cmd_classify},
  };

  CommonFlags flags[std::size(subs)];
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmd, flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < std::size(subs); ++i)
    if (app.got_subcommand(subs[i].name)) return run(flags[i], subs[i].fn);
  return kExitConfig;
}
