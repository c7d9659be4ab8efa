// core/src/kvconfig.cpp

// Copyright 2026  The HGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hgs/kvconfig.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "hgs/errors.hpp"

namespace hgs {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError("config file not found: " + path);
  KvConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfigError(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw InvalidConfigError(path + ":" + std::to_string(lineno) +
                               ": empty key");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

void KvConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path);
  for (const auto& [key, value] : values_) {
    out << key << " = " << value << "\n";
  }
  if (!out) throw IoError("short write: " + path);
}

std::string KvConfig::get_string(const std::string& key,
                                 const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int KvConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfigError("key " + key + ": not an integer: " + it->second);
  }
}

std::uint64_t KvConfig::get_u64(const std::string& key,
                                std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw InvalidConfigError("key " + key + ": not an unsigned integer: " +
                             it->second);
  }
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') {
    throw InvalidConfigError("key " + key + ": not a number: " + it->second);
  }
  return v;
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw InvalidConfigError("key " + key + ": not a bool: " + it->second);
}

void KvConfig::set_string(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void KvConfig::set_int(const std::string& key, int value) {
  values_[key] = std::to_string(value);
}

void KvConfig::set_u64(const std::string& key, std::uint64_t value) {
  values_[key] = std::to_string(value);
}

void KvConfig::set_double(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  values_[key] = buf;
}

void KvConfig::set_bool(const std::string& key, bool value) {
  values_[key] = value ? "true" : "false";
}

}  // namespace hgs
