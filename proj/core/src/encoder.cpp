// core/src/encoder.cpp

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

#include "hgs/encoder.hpp"

#include <algorithm>
#include <cmath>

namespace hgs {

std::array<int, 3> conv_strides(int downsample) {
  if (downsample < 1) throw InvalidConfigError("downsample must be >= 1");
  // Pick the divisor triple a >= b >= c, a*b*c = D, minimizing a - c.
  std::array<int, 3> best = {downsample, 1, 1};
  int best_spread = downsample;
  for (int a = 1; a <= downsample; ++a) {
    if (downsample % a != 0) continue;
    const int rest = downsample / a;
    for (int b = 1; b <= rest; ++b) {
      if (rest % b != 0) continue;
      const int c = rest / b;
      std::array<int, 3> t = {a, b, c};
      std::sort(t.begin(), t.end(), std::greater<int>());
      const int spread = t[0] - t[2];
      if (spread < best_spread) {
        best_spread = spread;
        best = t;
      }
    }
  }
  return best;
}

FeatureSequence encode_wave(const std::vector<float>& wave,
                            const EncoderParams<float>& params,
                            const EncoderConfig& config) {
  Tape<float> tape;
  const EncoderVars vars = bind_encoder<float>(tape, params, nullptr);
  const int node = encode_graph(tape, wave, vars, config);
  FeatureSequence f;
  f.values = tape.val(node);
  f.frame_hop_s = 0.0;
  return f;
}

FeatureSequence encode(const Clip& clip, const EncoderParams<float>& params,
                       const EncoderConfig& config) {
  if (config.kind == EncoderKind::kPrecomputed) {
    FeatureSequence f =
        clip.has_features ? clip.features : load_features(clip.feature_path);
    if (f.d() != config.d) {
      throw DimensionMismatchError(
          "feature file d=" + std::to_string(f.d()) + " but config d=" +
          std::to_string(config.d));
    }
    return f;
  }
  return encode_wave(clip.samples, params, config);
}

FeatureSequence temporal_pool(const FeatureSequence& features, int kernel) {
  if (kernel < 1) throw InvalidConfigError("pool kernel must be >= 1");
  if (kernel == 1) return features;
  const Mat<float>& v = features.values;
  const int t_out = (v.rows + kernel - 1) / kernel;
  FeatureSequence out;
  out.values = Mat<float>(t_out, v.cols);
  out.frame_hop_s = features.frame_hop_s * kernel;
  for (int i = 0; i < t_out; ++i) {
    const int r0 = i * kernel;
    const int w = std::min(kernel, v.rows - r0);
    float* orow = out.values.row(i);
    for (int r = r0; r < r0 + w; ++r) {
      const float* vr = v.row(r);
      for (int c = 0; c < v.cols; ++c) orow[c] += vr[c];
    }
    for (int c = 0; c < v.cols; ++c) orow[c] /= static_cast<float>(w);
  }
  return out;
}

}  // namespace hgs
