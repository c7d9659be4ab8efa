// tests/test_encoder.cpp

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

#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "hgs/encoder.hpp"
#include "hgs/errors.hpp"
#include "hgs/features.hpp"
#include "hgs/model.hpp"
#include "hgs/rng.hpp"
#include "test_helpers.hpp"

using namespace hgs;

TEST_CASE("stride triples multiply to the downsample and stay balanced") {
  for (int d : {8, 12, 16, 64, 320, 27, 30, 125}) {
    std::array<int, 3> s = conv_strides(d);
    CHECK(s[0] * s[1] * s[2] == d);
    CHECK(s[0] >= s[1]);
    CHECK(s[1] >= s[2]);
    CHECK(s[2] >= 1);
  }
  // Balanced splits for known cases.
  CHECK(conv_strides(8) == std::array<int, 3>{2, 2, 2});
  CHECK(conv_strides(27) == std::array<int, 3>{3, 3, 3});
  CHECK(conv_strides(320) == std::array<int, 3>{8, 8, 5});
  // A prime cannot split: two layers degrade to stride 1.
  CHECK(conv_strides(7) == std::array<int, 3>{7, 1, 1});
}

TEST_CASE("frame count is the floor quotient and rejects short clips") {
  EncoderConfig c;
  c.downsample = 8;
  CHECK(encoder_frames(8, c) == 1);
  CHECK(encoder_frames(15, c) == 1);
  CHECK(encoder_frames(16, c) == 2);
  CHECK(encoder_frames(800, c) == 100);
  CHECK_THROWS_AS(encoder_frames(7, c), ClipTooShortError);
}

TEST_CASE("encode maps n samples to n / downsample frames of width d") {
  ModelDims dims = hgs_test::tiny_dims();
  ModelParams<float> params = init_params<float>(11, dims);

  Rng rng(3);
  std::vector<float> wave(250);
  for (auto& v : wave) v = static_cast<float>(rng.normal());

  FeatureSequence f = encode_wave(wave, params.encoder, dims.encoder);
  CHECK(f.t() == 31);  // 250 / 8, remainder dropped
  CHECK(f.d() == dims.d);
  for (float v : f.values.a) CHECK(std::isfinite(v));

  // The tail remainder cannot influence any emitted frame.
  std::vector<float> padded = wave;
  padded.push_back(99.0f);
  FeatureSequence g = encode_wave(padded, params.encoder, dims.encoder);
  CHECK(g.t() == 31);
  CHECK(g.values.a == f.values.a);
}

TEST_CASE("encoding is deterministic and parameter-sensitive") {
  ModelDims dims = hgs_test::tiny_dims();
  ModelParams<float> p1 = init_params<float>(11, dims);
  ModelParams<float> p2 = init_params<float>(12, dims);
  std::vector<float> wave(64, 0.25f);

  FeatureSequence a = encode_wave(wave, p1.encoder, dims.encoder);
  FeatureSequence b = encode_wave(wave, p1.encoder, dims.encoder);
  CHECK(a.values.a == b.values.a);
  FeatureSequence c = encode_wave(wave, p2.encoder, dims.encoder);
  CHECK(a.values.a != c.values.a);
}

TEST_CASE("mean pooling averages non-overlapping windows by actual width") {
  FeatureSequence f;
  f.values = Mat<float>(5, 2);
  for (int t = 0; t < 5; ++t) {
    f.values(t, 0) = static_cast<float>(t);
    f.values(t, 1) = static_cast<float>(10 * t);
  }

  FeatureSequence p = temporal_pool(f, 2);
  REQUIRE(p.t() == 3);  // windows {0,1}, {2,3}, {4}
  CHECK(p.values(0, 0) == doctest::Approx(0.5));
  CHECK(p.values(1, 0) == doctest::Approx(2.5));
  // The last window holds one frame; it is averaged by 1, not by 2.
  CHECK(p.values(2, 0) == doctest::Approx(4.0));
  CHECK(p.values(2, 1) == doctest::Approx(40.0));

  FeatureSequence q = temporal_pool(f, 1);
  CHECK(q.values.a == f.values.a);  // kernel one is the identity

  FeatureSequence r = temporal_pool(f, 10);
  REQUIRE(r.t() == 1);  // kernel beyond t pools everything
  CHECK(r.values(0, 0) == doctest::Approx(2.0));
}
