// core/include/hgs/kvconfig.hpp

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

#ifndef HGS_KVCONFIG_HPP_
#define HGS_KVCONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>

namespace hgs {

/// Flat `key = value` text config. Lines starting with '#' and blank lines
/// are ignored; keys are sorted on save. Doubles are serialized with %.17g
/// so a saved config reloads bit-for-bit (the config.resolved round-trip
/// contract).
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig load(const std::string& path);
  void save(const std::string& path) const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set_string(const std::string& key, const std::string& value);
  void set_int(const std::string& key, int value);
  void set_u64(const std::string& key, std::uint64_t value);
  void set_double(const std::string& key, double value);
  void set_bool(const std::string& key, bool value);

  const std::map<std::string, std::string>& items() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace hgs

#endif  // HGS_KVCONFIG_HPP_
