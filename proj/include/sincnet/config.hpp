// sincnet/config.hpp

// Copyright 2026  SincNet C++ Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sincnet/common.hpp"

// Flat `key = value` configuration text. Lines are either blank, full-line
// '#' comments, or a single assignment; later assignments to the same key
// win (so command-line overrides can be merged as a second map). Keys are
// validated against a per-command allow list.

namespace sincnet {

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline ConfigMap parse_config_text(const std::string& text, const std::string& origin = "config") {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty value for '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

/// Overrides win over base on key collisions.
inline ConfigMap merge_config(const ConfigMap& base, const ConfigMap& overrides) {
  ConfigMap out = base;
  for (const auto& [k, v] : overrides) out[k] = v;
  return out;
}

inline void validate_config_keys(const ConfigMap& cfg, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : cfg)
    if (!allowed.count(k)) throw ConfigError("unknown config key '" + k + "'");
}

/// Canonical text form: sorted `key = value` lines. Used for the resolved
/// config echo and for the checkpoint's embedded model config.
inline std::string render_config(const ConfigMap& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

inline std::string get_string(const ConfigMap& cfg, const std::string& key,
                              const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

inline std::string get_required(const ConfigMap& cfg, const std::string& key) {
  auto it = cfg.find(key);
  if (it == cfg.end()) throw ConfigError("missing required config key '" + key + "'");
  return it->second;
}

inline double get_double(const ConfigMap& cfg, const std::string& key, double fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const std::string& s = it->second;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno != 0)
    throw ConfigError("config key '" + key + "': '" + s + "' is not a number");
  return v;
}

inline std::uint64_t get_u64(const ConfigMap& cfg, const std::string& key,
                             std::uint64_t fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const std::string& s = it->second;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno != 0 || s.empty() || s[0] == '-')
    throw ConfigError("config key '" + key + "': '" + s + "' is not a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

inline bool get_bool(const ConfigMap& cfg, const std::string& key, bool fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  const std::string& s = it->second;
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("config key '" + key + "': '" + s + "' is not a boolean (true/false/1/0)");
}

/// Comma-separated size list, e.g. "8,8"; empty string not accepted (omit
/// the key instead).
inline std::vector<std::size_t> get_size_list(const ConfigMap& cfg, const std::string& key,
                                              const std::vector<std::size_t>& fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  std::vector<std::size_t> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = detail::trim(item);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno != 0)
      throw ConfigError("config key '" + key + "': '" + it->second +
                        "' is not a comma-separated integer list");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty())
    throw ConfigError("config key '" + key + "': empty list");
  return out;
}

inline std::string join_size_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace sincnet
