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
#include <set>
#include <stdexcept>
#include <string>

namespace tsrep::cli {

/// Error taxonomy mapped to process exit codes by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key = value document ('#' comments, blank lines ignored). Getters
/// record defaults so the effective configuration can be written back out
/// and replayed.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_str(const std::string& key, const std::string& def);
  std::string require_str(const std::string& key);
  double get_f64(const std::string& key, double def);
  std::int64_t get_i64(const std::string& key, std::int64_t def);
  std::uint64_t get_u64(const std::string& key, std::uint64_t def);
  bool get_bool(const std::string& key, bool def);

  /// Throws ConfigError naming any key outside `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

  /// Sorted key = value lines of the effective configuration (explicit
  /// values plus every default that was consulted).
  void write_resolved(const std::string& path) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> consulted_defaults_;
};

}  // namespace tsrep::cli
