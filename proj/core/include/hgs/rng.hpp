// core/include/hgs/rng.hpp

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

#ifndef HGS_RNG_HPP_
#define HGS_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace hgs {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic random stream. std::mt19937_64 is specified bit-exactly by
/// the standard; the distributions are hand-rolled because the standard
/// library's distribution objects are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {
    std::uint64_t x = seed ^ 0x6a09e667f3bcc908ull;
    seed_mix_ = splitmix64(x);
  }

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ull;
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return lo + static_cast<std::int64_t>(v % span);
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Child stream keyed by a string tag, independent of draws made on this
  /// stream. Used so that per-sample / per-purpose streams do not shift when
  /// an unrelated consumer is enabled or disabled.
  Rng fork(const std::string& tag) const {
    std::uint64_t x = seed_mix_ ^ fnv1a64(tag);
    std::uint64_t a = splitmix64(x);
    return Rng(a, splitmix64(x));
  }

  Rng fork(std::uint64_t tag) const {
    std::uint64_t x = seed_mix_ ^ (0x9e3779b97f4a7c15ull * (tag + 1));
    std::uint64_t a = splitmix64(x);
    return Rng(a, splitmix64(x));
  }

  static Rng from_seed_and_key(std::uint64_t seed, const std::string& key) {
    return Rng(seed).fork(key);
  }

 private:
  Rng(std::uint64_t seed, std::uint64_t mix) : eng_(seed), seed_mix_(mix) {}

  std::mt19937_64 eng_;
  std::uint64_t seed_mix_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hgs

#endif  // HGS_RNG_HPP_
