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
#include <map>
#include <string>
#include <vector>

#include "tsrep/dataset.hpp"
#include "tsrep/matrix.hpp"

namespace tsrep::eval {

/// k nearest neighbours under Euclidean distance with majority vote;
/// vote ties fall back to the single nearest neighbour's label, distance
/// ties break by training index.
std::vector<int> knn_classify(const Matrix& train_z,
                              const std::vector<int>& train_labels,
                              const Matrix& test_z, std::size_t k);

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred);

/// Binary F1 = 2PR/(P+R); 0 when P+R is 0.
double f1_score(const std::vector<int>& truth, const std::vector<int>& pred,
                int positive);

/// Unweighted mean of the per-class F1 scores over the classes present in
/// the ground truth.
double f1_macro(const std::vector<int>& truth, const std::vector<int>& pred);

/// Pearson correlation; 0 (with flag) when either side has zero variance.
double pearson_corr(const std::vector<double>& a,
                    const std::vector<double>& b,
                    bool* degenerate = nullptr);

/// P(score_pos > score_neg) with ties counted half (rank / Mann-Whitney
/// form). Both classes must be present.
double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels, int positive);

struct ImputationScore {
  double mse = 0.0;
  double corr = 0.0;
  std::size_t cells = 0;
  bool empty = false;  // no injected cells to score
};

/// MSE and Pearson correlation restricted to the injected-missing cells,
/// concatenated across samples (truth from the injection record).
ImputationScore imputation_score(const data::InjectionRecord& record,
                                 const data::Dataset& imputed);

/// Named metrics over repeated runs with their seeds and the config that
/// produced them; serializes to JSON with stable keys.
struct MetricReport {
  std::map<std::string, std::vector<double>> runs;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> config;

  void add(const std::string& name, double value);
  double mean(const std::string& name) const;
  double stddev(const std::string& name) const;
  std::string to_json() const;
};

}  // namespace tsrep::eval
