// core/include/hgs/encoder.hpp

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

#ifndef HGS_ENCODER_HPP_
#define HGS_ENCODER_HPP_

#include <array>
#include <string>
#include <vector>

#include "hgs/errors.hpp"
#include "hgs/features.hpp"
#include "hgs/tape.hpp"
#include "hgs/types.hpp"

namespace hgs {

enum class EncoderKind { kToyConv, kPrecomputed };

/// The pluggable frame encoder E. TOY_CONV is a 3-layer strided 1-D
/// convolution stack with total stride D (one output frame per D input
/// samples, tail remainder dropped); PRECOMPUTED loads feature files
/// produced offline by a pretrained encoder. D=320 gives 50 frames/s at
/// 16 kHz, the frame rate of the encoders the feature files come from.
struct EncoderConfig {
  EncoderKind kind = EncoderKind::kToyConv;
  int d = 64;               // output feature dimension
  int downsample = 320;     // total stride D
  int channels = 16;        // hidden conv channels
  bool trainable = true;
};

/// Splits D into three per-layer strides, as balanced as the divisor
/// structure allows, largest first. Deterministic.
std::array<int, 3> conv_strides(int downsample);

template <typename T>
struct ConvLayer {
  Mat<T> w;  // out_ch x (in_ch * kernel)
  Mat<T> b;  // 1 x out_ch
};

/// Per-layer kernel = 2 * stride with (kernel - stride) right zero-padding,
/// so every layer maps length exactly len -> len / stride. ReLU follows
/// layers 1 and 2; the output layer is linear so features stay signed.
template <typename T>
struct EncoderParams {
  std::vector<ConvLayer<T>> layers;  // size 3 for TOY_CONV, 0 otherwise
};

/// Tape-node ids for bound encoder parameters.
struct EncoderVars {
  std::vector<std::pair<int, int>> layers;  // (w, b) node ids
};

template <typename T>
EncoderVars bind_encoder(Tape<T>& tape, const EncoderParams<T>& params,
                         EncoderParams<T>* grad_sink) {
  EncoderVars vars;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    Mat<T>* gw = grad_sink ? &grad_sink->layers[i].w : nullptr;
    Mat<T>* gb = grad_sink ? &grad_sink->layers[i].b : nullptr;
    vars.layers.push_back({tape.leaf(params.layers[i].w, gw),
                           tape.leaf(params.layers[i].b, gb)});
  }
  return vars;
}

/// Truncates the waveform to a multiple of the total stride and returns the
/// number of output frames. Throws ClipTooShortError when no full frame fits.
inline int encoder_frames(std::size_t wave_len, const EncoderConfig& config) {
  const int t = static_cast<int>(wave_len) / config.downsample;
  if (t < 1) {
    throw ClipTooShortError("waveform of " + std::to_string(wave_len) +
                            " samples is shorter than one stride of " +
                            std::to_string(config.downsample));
  }
  return t;
}

/// Builds the TOY_CONV graph over a waveform; returns the t x d output node.
template <typename T>
int encode_graph(Tape<T>& tape, const std::vector<float>& wave,
                 const EncoderVars& vars, const EncoderConfig& config) {
  const int t = encoder_frames(wave.size(), config);
  const auto strides = conv_strides(config.downsample);
  const int len = t * config.downsample;
  Mat<T> x(len, 1);
  for (int i = 0; i < len; ++i) x(i, 0) = static_cast<T>(wave[i]);
  int node = tape.constant(std::move(x));
  for (int li = 0; li < 3; ++li) {
    node = tape.conv1d(node, vars.layers[li].first, vars.layers[li].second,
                       strides[li], 2 * strides[li]);
    if (li < 2) node = tape.relu_op(node);
  }
  return node;
}

/// TOY_CONV forward over a bare waveform, no gradients.
FeatureSequence encode_wave(const std::vector<float>& wave,
                            const EncoderParams<float>& params,
                            const EncoderConfig& config);

/// Plain encode for inference and tests: TOY_CONV runs the conv graph
/// without gradients; PRECOMPUTED loads the clip's features verbatim
/// (in-memory features win over the file path). The feature dimension
/// must match config.d.
FeatureSequence encode(const Clip& clip, const EncoderParams<float>& params,
                       const EncoderConfig& config);

/// Non-overlapping mean pooling over frame windows; t' = ceil(t / kernel),
/// the final partial window averaged over its actual width; d preserved.
FeatureSequence temporal_pool(const FeatureSequence& features, int kernel);

}  // namespace hgs

#endif  // HGS_ENCODER_HPP_
