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

#include "tsrep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tsrep::data {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("load_csv: unparsable numeric '" + s +
                             "' at line " + std::to_string(line_no));
  }
  if (pos != s.size())
    throw std::runtime_error("load_csv: trailing junk in '" + s +
                             "' at line " + std::to_string(line_no));
  return v;
}

long long parse_int(const std::string& s, std::size_t line_no) {
  const double v = parse_double(s, line_no);
  const long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v)
    throw std::runtime_error("load_csv: expected integer, got '" + s +
                             "' at line " + std::to_string(line_no));
  return i;
}

}  // namespace

std::size_t Dataset::t_min() const {
  std::size_t m = samples.empty() ? 0 : samples.front().length;
  for (const auto& s : samples) m = std::min(m, s.length);
  return m;
}

std::size_t Dataset::t_max() const {
  std::size_t m = 0;
  for (const auto& s : samples) m = std::max(m, s.length);
  return m;
}

bool Dataset::has_labels() const {
  return !samples.empty() && samples.front().label.has_value();
}

void Dataset::validate() const {
  for (const auto& s : samples) {
    if (s.variates() != v)
      throw std::runtime_error("Dataset: inconsistent variate count");
    if (s.length < 1 || s.values.cols() != s.length)
      throw std::runtime_error("Dataset: bad sample length");
    if (!s.mask.same_shape(s.values))
      throw std::runtime_error("Dataset: mask/values shape mismatch");
    for (std::size_t i = 0; i < s.mask.size(); ++i) {
      const double m = s.mask.data()[i];
      if (m != 0.0 && m != 1.0)
        throw std::runtime_error("Dataset: mask entries must be 0 or 1");
    }
  }
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("load_csv: empty file " + path);
  const auto head = split_line(header);
  if (head.size() < 3 || head[0] != "sample_id" || head[1] != "t")
    throw std::runtime_error("load_csv: bad header in " + path);
  const bool has_label = head.back() == "label";
  const std::size_t v = head.size() - 2 - (has_label ? 1 : 0);
  if (v == 0) throw std::runtime_error("load_csv: no variate columns");

  struct Row {
    long long t;
    std::vector<std::optional<double>> cells;
    std::optional<int> label;
  };
  std::map<long long, std::vector<Row>> by_sample;
  std::vector<long long> order;  // first-appearance order of sample ids

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != head.size())
      throw std::runtime_error("load_csv: ragged row at line " +
                               std::to_string(line_no));
    Row row;
    const long long id = parse_int(fields[0], line_no);
    row.t = parse_int(fields[1], line_no);
    row.cells.resize(v);
    for (std::size_t j = 0; j < v; ++j) {
      const std::string& cell = fields[2 + j];
      if (!cell.empty()) row.cells[j] = parse_double(cell, line_no);
    }
    if (has_label) {
      const std::string& cell = fields.back();
      if (!cell.empty())
        row.label = static_cast<int>(parse_int(cell, line_no));
    }
    auto it = by_sample.find(id);
    if (it == by_sample.end()) {
      order.push_back(id);
      it = by_sample.emplace(id, std::vector<Row>{}).first;
    }
    it->second.push_back(std::move(row));
  }

  Dataset ds;
  ds.v = v;
  for (long long id : order) {
    auto& rows = by_sample[id];
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].t <= rows[i - 1].t)
        throw std::runtime_error(
            "load_csv: non-monotone time index in sample " +
            std::to_string(id));
    if (rows.front().t != 0 ||
        rows.back().t != static_cast<long long>(rows.size()) - 1)
      throw std::runtime_error("load_csv: time steps of sample " +
                               std::to_string(id) +
                               " must be 0..T-1 without gaps");
    MtsSample s;
    s.id = id;
    s.length = rows.size();
    s.values = Matrix(v, s.length);
    s.mask = Matrix(v, s.length);
    std::optional<int> label;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      for (std::size_t j = 0; j < v; ++j) {
        if (rows[t].cells[j]) {
          s.values(j, t) = *rows[t].cells[j];
          s.mask(j, t) = 1.0;
        }
      }
      if (rows[t].label) {
        if (label && *label != *rows[t].label)
          throw std::runtime_error("load_csv: conflicting labels in sample " +
                                   std::to_string(id));
        label = rows[t].label;
      }
    }
    s.label = label;
    ds.samples.push_back(std::move(s));
  }
  ds.validate();
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path);
  out << "sample_id,t";
  for (std::size_t j = 0; j < ds.v; ++j) out << ",v" << (j + 1);
  const bool labels = ds.has_labels();
  if (labels) out << ",label";
  out << "\n";
  for (const auto& s : ds.samples) {
    for (std::size_t t = 0; t < s.length; ++t) {
      out << s.id << "," << t;
      for (std::size_t j = 0; j < ds.v; ++j) {
        out << ",";
        if (s.observed(j, t)) out << format_double(s.values(j, t));
      }
      if (labels) {
        out << ",";
        if (s.label) out << *s.label;
      }
      out << "\n";
    }
  }
}

void save_metadata(const Dataset& ds, const std::string& csv_path) {
  std::ofstream out(csv_path + ".meta");
  if (!out) throw std::runtime_error("save_metadata: cannot open meta file");
  out << "v=" << ds.v << "\n";
  out << "n_samples=" << ds.size() << "\n";
  out << "labels=" << (ds.has_labels() ? 1 : 0) << "\n";
  out << "split=" << ds.split << "\n";
}

Standardizer standardize_fit_transform(Dataset& train, Dataset& test) {
  if (train.samples.empty())
    throw std::runtime_error("standardize: empty training set");
  Standardizer sc;
  sc.mean.assign(train.v, 0.0);
  sc.stddev.assign(train.v, 1.0);
  for (std::size_t v = 0; v < train.v; ++v) {
    double s = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (const auto& sample : train.samples)
      for (std::size_t t = 0; t < sample.length; ++t)
        if (sample.observed(v, t)) {
          s += sample.values(v, t);
          ++n;
        }
    if (n == 0)
      throw std::runtime_error("standardize: variate " + std::to_string(v) +
                               " has no observed training entries");
    const double mean = s / static_cast<double>(n);
    for (const auto& sample : train.samples)
      for (std::size_t t = 0; t < sample.length; ++t)
        if (sample.observed(v, t)) {
          const double d = sample.values(v, t) - mean;
          s2 += d * d;
        }
    double sd = std::sqrt(s2 / static_cast<double>(n));
    if (sd < 1e-12) sd = 1.0;  // degenerate variate
    sc.mean[v] = mean;
    sc.stddev[v] = sd;
  }
  sc.apply(train);
  sc.apply(test);
  return sc;
}

void Standardizer::apply(Dataset& ds) const {
  for (auto& sample : ds.samples)
    for (std::size_t v = 0; v < sample.variates(); ++v)
      for (std::size_t t = 0; t < sample.length; ++t)
        if (sample.observed(v, t))
          sample.values(v, t) =
              (sample.values(v, t) - mean[v]) / stddev[v];
}

void Standardizer::invert(Dataset& ds) const {
  for (auto& sample : ds.samples)
    for (std::size_t v = 0; v < sample.variates(); ++v)
      for (std::size_t t = 0; t < sample.length; ++t)
        if (sample.observed(v, t))
          sample.values(v, t) = sample.values(v, t) * stddev[v] + mean[v];
}

InjectionRecord inject_missing(Dataset& ds, double rate, Rng& rng) {
  if (rate < 0.0 || rate > 1.0)
    throw std::invalid_argument("inject_missing: rate outside [0, 1]");
  InjectionRecord record;
  for (std::size_t si = 0; si < ds.samples.size(); ++si) {
    auto& s = ds.samples[si];
    std::vector<std::pair<std::size_t, std::size_t>> observed;
    for (std::size_t v = 0; v < s.variates(); ++v)
      for (std::size_t t = 0; t < s.length; ++t)
        if (s.observed(v, t)) observed.emplace_back(v, t);
    const std::size_t want = static_cast<std::size_t>(std::llround(
        rate * static_cast<double>(s.variates() * s.length)));
    const std::size_t k = std::min(want, observed.size());
    const auto chosen = rng.sample_without_replacement(observed.size(), k);
    for (std::size_t idx : chosen) {
      const auto [v, t] = observed[idx];
      record.cells.push_back({si, v, t, s.values(v, t)});
      s.values(v, t) = 0.0;  // placeholder
      s.mask(v, t) = 0.0;
    }
  }
  return record;
}

void impute_simple(Dataset& ds, ImputeMode mode,
                   const std::vector<double>* variate_means) {
  for (auto& s : ds.samples) {
    for (std::size_t v = 0; v < s.variates(); ++v) {
      double last = 0.0;  // LOCF with no prior observation fills 0
      bool seen = false;
      for (std::size_t t = 0; t < s.length; ++t) {
        if (s.observed(v, t)) {
          last = s.values(v, t);
          seen = true;
          continue;
        }
        switch (mode) {
          case ImputeMode::zero:
            s.values(v, t) = 0.0;
            break;
          case ImputeMode::mean:
            s.values(v, t) =
                variate_means != nullptr ? (*variate_means)[v] : 0.0;
            break;
          case ImputeMode::locf:
            s.values(v, t) = seen ? last : 0.0;
            break;
        }
      }
    }
  }
  ds.imputed = true;
}

Matrix pad_and_unroll(const Dataset& ds, std::size_t t_pad) {
  for (const auto& s : ds.samples)
    if (s.length > t_pad)
      throw std::invalid_argument("pad_and_unroll: t_pad < sample length");
  Matrix out(ds.size(), ds.v * t_pad);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& s = ds.samples[i];
    for (std::size_t v = 0; v < ds.v; ++v)
      for (std::size_t t = 0; t < s.length; ++t)
        out(i, v * t_pad + t) = s.values(v, t);
  }
  return out;
}

Matrix unroll_to_values(const double* row, std::size_t v, std::size_t t_pad) {
  Matrix values(v, t_pad);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t t = 0; t < t_pad; ++t) values(i, t) = row[i * t_pad + t];
  return values;
}

}  // namespace tsrep::data
