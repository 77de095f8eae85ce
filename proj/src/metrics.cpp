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

#include "tsrep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace tsrep::eval {

std::vector<int> knn_classify(const Matrix& train_z,
                              const std::vector<int>& train_labels,
                              const Matrix& test_z, std::size_t k) {
  const std::size_t n = train_z.rows();
  if (n == 0) throw std::invalid_argument("knn_classify: empty training set");
  if (train_labels.size() != n)
    throw std::invalid_argument("knn_classify: label count mismatch");
  if (k < 1 || k > n)
    throw std::invalid_argument("knn_classify: k outside [1, n_train]");
  if (test_z.cols() != train_z.cols())
    throw std::invalid_argument("knn_classify: dimension mismatch");

  std::vector<int> out;
  out.reserve(test_z.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < test_z.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t f = 0; f < train_z.cols(); ++f) {
        const double d = test_z(i, f) - train_z(j, f);
        d2 += d * d;
      }
      dist[j] = {d2, j};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k),
                      dist.end());
    std::map<int, std::size_t> votes;
    for (std::size_t j = 0; j < k; ++j) ++votes[train_labels[dist[j].second]];
    std::size_t best_count = 0;
    bool tie = false;
    int best_label = train_labels[dist[0].second];
    for (const auto& [label, count] : votes) {
      if (count > best_count) {
        best_count = count;
        best_label = label;
        tie = false;
      } else if (count == best_count) {
        tie = true;
      }
    }
    out.push_back(tie ? train_labels[dist[0].second] : best_label);
  }
  return out;
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  if (truth.size() != pred.size() || truth.empty())
    throw std::invalid_argument("accuracy: size mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (truth[i] == pred[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double f1_score(const std::vector<int>& truth, const std::vector<int>& pred,
                int positive) {
  if (truth.size() != pred.size())
    throw std::invalid_argument("f1_score: size mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == positive;
    const bool p = pred[i] == positive;
    if (t && p) ++tp;
    if (!t && p) ++fp;
    if (t && !p) ++fn;
  }
  const double denom = 2.0 * static_cast<double>(tp) +
                       static_cast<double>(fp) + static_cast<double>(fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(tp) / denom;
}

double f1_macro(const std::vector<int>& truth, const std::vector<int>& pred) {
  std::set<int> classes(truth.begin(), truth.end());
  if (classes.empty()) throw std::invalid_argument("f1_macro: empty input");
  double total = 0.0;
  for (int c : classes) total += f1_score(truth, pred, c);
  return total / static_cast<double>(classes.size());
}

double pearson_corr(const std::vector<double>& a,
                    const std::vector<double>& b, bool* degenerate) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("pearson_corr: need equal lengths >= 2");
  if (degenerate != nullptr) *degenerate = false;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  return sab / std::sqrt(saa * sbb);
}

double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels, int positive) {
  if (scores.size() != labels.size() || scores.empty())
    throw std::invalid_argument("roc_auc: size mismatch");
  std::size_t n_pos = 0;
  for (int l : labels)
    if (l == positive) ++n_pos;
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc_auc: both classes must be present");

  // Rank-sum with average ranks over ties.
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t p = i; p <= j; ++p)
      if (labels[idx[p]] == positive) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

ImputationScore imputation_score(const data::InjectionRecord& record,
                                 const data::Dataset& imputed) {
  ImputationScore score;
  score.cells = record.cells.size();
  if (record.cells.empty()) {
    score.empty = true;
    score.corr = 0.0;
    return score;
  }
  std::vector<double> truth, guess;
  truth.reserve(record.cells.size());
  guess.reserve(record.cells.size());
  double se = 0.0;
  for (const auto& cell : record.cells) {
    const auto& s = imputed.samples[cell.sample];
    const double g = s.values(cell.v, cell.t);
    const double d = g - cell.original;
    se += d * d;
    truth.push_back(cell.original);
    guess.push_back(g);
  }
  score.mse = se / static_cast<double>(record.cells.size());
  score.corr = record.cells.size() >= 2 ? pearson_corr(truth, guess) : 0.0;
  return score;
}

void MetricReport::add(const std::string& name, double value) {
  runs[name].push_back(value);
}

double MetricReport::mean(const std::string& name) const {
  const auto it = runs.find(name);
  if (it == runs.end() || it->second.empty())
    throw std::out_of_range("MetricReport: no metric " + name);
  double s = 0.0;
  for (double v : it->second) s += v;
  return s / static_cast<double>(it->second.size());
}

double MetricReport::stddev(const std::string& name) const {
  const auto it = runs.find(name);
  if (it == runs.end() || it->second.empty())
    throw std::out_of_range("MetricReport: no metric " + name);
  const double m = mean(name);
  double s2 = 0.0;
  for (double v : it->second) s2 += (v - m) * (v - m);
  return std::sqrt(s2 / static_cast<double>(it->second.size()));
}

std::string MetricReport::to_json() const {
  nlohmann::json j;
  for (const auto& [name, values] : runs) {
    j["metrics"][name]["runs"] = values;
    j["metrics"][name]["mean"] = mean(name);
    j["metrics"][name]["std"] = stddev(name);
  }
  j["seeds"] = seeds;
  for (const auto& [key, value] : config) j["config"][key] = value;
  return j.dump(2);
}

}  // namespace tsrep::eval
