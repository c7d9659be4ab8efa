// tests/test_augment.cpp

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

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "hgs/augment.hpp"
#include "hgs/errors.hpp"
#include "hgs/features.hpp"
#include "hgs/rng.hpp"

using namespace hgs;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<float> sine_wave(int n, int sr, double freq) {
  std::vector<float> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = static_cast<float>(std::sin(2.0 * kPi * freq * i / sr));
  }
  return w;
}

// Naive DFT peak frequency, the oracle for resampling factors.
double dft_peak_hz(const std::vector<float>& x, int sr) {
  const int n = static_cast<int>(x.size());
  int best_k = 0;
  double best_mag = -1.0;
  for (int k = 1; k < n / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      const double a = -2.0 * kPi * k * i / n;
      acc += std::complex<double>(x[i] * std::cos(a), x[i] * std::sin(a));
    }
    const double mag = std::abs(acc);
    if (mag > best_mag) {
      best_mag = mag;
      best_k = k;
    }
  }
  return static_cast<double>(best_k) * sr / n;
}

}  // namespace

TEST_CASE("speed perturbation scales the dominant frequency by the factor") {
  const int sr = 2000;
  std::vector<float> wave = sine_wave(2000, sr, 100.0);
  for (double factor : {0.9, 1.1, 1.25}) {
    std::vector<float> out = speed_perturb(wave, factor);
    CHECK(out.size() ==
          static_cast<std::size_t>(std::floor(wave.size() / factor)));
    // Resampling by `factor` moves a 100 Hz tone to 100 * factor Hz. The
    // DFT grid at this length resolves within one bin (1 Hz).
    const double peak = dft_peak_hz(out, sr);
    CHECK(peak == doctest::Approx(100.0 * factor).epsilon(0.02));
  }
}

TEST_CASE("speed factor one is the bitwise identity") {
  std::vector<float> wave = sine_wave(500, 1000, 55.0);
  std::vector<float> out = speed_perturb(wave, 1.0);
  CHECK(out == wave);
  CHECK_THROWS_AS(speed_perturb(wave, 0.5), FactorOutOfRangeError);
  CHECK_THROWS_AS(speed_perturb(wave, 1.3), FactorOutOfRangeError);
}

TEST_CASE("pitch shift preserves length and scales the frequency") {
  const int sr = 2000;
  std::vector<float> wave = sine_wave(2000, sr, 100.0);
  for (double semis : {-2.0, 2.0}) {
    std::vector<float> out = pitch_shift(wave, semis);
    CHECK(out.size() == wave.size());
    const double want = 100.0 * std::pow(2.0, semis / 12.0);
    CHECK(dft_peak_hz(out, sr) == doctest::Approx(want).epsilon(0.02));
  }
  CHECK_THROWS_AS(pitch_shift(wave, 13.0), FactorOutOfRangeError);
}

TEST_CASE("time mask zeroes whole rows within drawn spans") {
  Rng rng(31);
  FeatureSequence f;
  f.values = Mat<float>(20, 3, 1.0f);
  FeatureSequence masked = time_mask(f, 2, 4, &rng);
  REQUIRE(masked.values.rows == 20);
  REQUIRE(masked.values.cols == 3);

  int zero_rows = 0;
  for (int t = 0; t < 20; ++t) {
    bool all_zero = true;
    bool all_one = true;
    for (int j = 0; j < 3; ++j) {
      if (masked.values(t, j) != 0.0f) all_zero = false;
      if (masked.values(t, j) != 1.0f) all_one = false;
    }
    CHECK((all_zero || all_one));  // rows are masked atomically
    zero_rows += all_zero ? 1 : 0;
  }
  CHECK(zero_rows >= 1);
  CHECK(zero_rows <= 8);  // two spans of at most four rows

  Rng rng2(31);
  FeatureSequence same = time_mask(f, 2, 4, &rng2);
  CHECK(same.values.a == masked.values.a);

  Rng rng3(32);
  FeatureSequence identity = time_mask(f, 0, 4, &rng3);
  CHECK(identity.values.a == f.values.a);
  CHECK_THROWS_AS(time_mask(f, 1, 21, &rng3), Error);
}

TEST_CASE("mask draws stay within bounds and match the mask applier") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<unsigned char> mask = draw_time_mask(15, 2, 5, &rng);
    REQUIRE(mask.size() == 15);
    int on = 0;
    for (unsigned char m : mask) on += m ? 1 : 0;
    CHECK(on >= 1);
    CHECK(on <= 10);
  }
}

TEST_CASE("view pairs share shape; only the student view is masked") {
  Rng rng(5);
  FeatureSequence f;
  f.values = Mat<float>(16, 4);
  for (auto& v : f.values.a) v = static_cast<float>(rng.normal());

  ViewPolicy policy;
  policy.enable_time_mask = true;
  policy.mask_count = 1;
  policy.mask_max_width = 3;
  Rng vr(9);
  auto [teacher, student] = make_views(f, policy, &vr);
  CHECK(teacher.values.rows == student.values.rows);
  CHECK(teacher.values.cols == student.values.cols);
  CHECK(teacher.values.a == f.values.a);  // teacher view is the identity
  CHECK(student.values.a != f.values.a);

  policy.enable_time_mask = false;
  Rng vr2(9);
  auto [t2, s2] = make_views(f, policy, &vr2);
  CHECK(t2.values.a == f.values.a);
  CHECK(s2.values.a == f.values.a);
}

TEST_CASE("waveform augmentation is deterministic in the stream state") {
  Rng base(123);
  std::vector<float> wave = sine_wave(800, 1000, 80.0);
  ViewPolicy policy;  // speed on, pitch off by default

  Rng a = base.fork("clip");
  Rng b = base.fork("clip");
  std::vector<float> out_a = augment_waveform(wave, policy, &a);
  std::vector<float> out_b = augment_waveform(wave, policy, &b);
  CHECK(out_a == out_b);

  // Disabling every augmentation yields the input unchanged.
  policy.enable_speed = false;
  policy.enable_pitch = false;
  Rng c = base.fork("clip");
  CHECK(augment_waveform(wave, policy, &c) == wave);
}
