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

#include "tsrep/config.hpp"

#include <cctype>
#include <fstream>

namespace tsrep::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        " is not key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("empty key at config line " + std::to_string(line_no));
    if (cfg.values_.count(key) != 0)
      throw ConfigError("duplicate config key: " + key);
    cfg.values_[key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string Config::get_str(const std::string& key, const std::string& def) {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  consulted_defaults_[key] = def;
  return def;
}

std::string Config::require_str(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required config key: " + key);
  return it->second;
}

double Config::get_f64(const std::string& key, double def) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consulted_defaults_[key] = std::to_string(def);
    return def;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " +
                      it->second);
  }
}

std::int64_t Config::get_i64(const std::string& key, std::int64_t def) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consulted_defaults_[key] = std::to_string(def);
    return def;
  }
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an integer: " +
                      it->second);
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consulted_defaults_[key] = std::to_string(def);
    return def;
  }
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an unsigned integer: " +
                      it->second);
  }
}

bool Config::get_bool(const std::string& key, bool def) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consulted_defaults_[key] = def ? "1" : "0";
    return def;
  }
  if (it->second == "1" || it->second == "true") return true;
  if (it->second == "0" || it->second == "false") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + it->second);
}

void Config::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    (void)value;
    if (allowed.count(key) == 0)
      throw ConfigError("unknown config key: " + key);
  }
}

void Config::write_resolved(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write resolved config: " + path);
  std::map<std::string, std::string> merged = consulted_defaults_;
  for (const auto& [key, value] : values_) merged[key] = value;
  for (const auto& [key, value] : merged) out << key << " = " << value << "\n";
}

}  // namespace tsrep::cli
