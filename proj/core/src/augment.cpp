// core/src/augment.cpp

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

#include "hgs/augment.hpp"

#include <cmath>

#include "hgs/errors.hpp"

namespace hgs {
namespace {

/// out[i] = wave at position i * factor, linearly interpolated.
std::vector<float> resample_linear(const std::vector<float>& wave,
                                   double factor, std::size_t out_len) {
  const std::size_t n = wave.size();
  std::vector<float> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * factor;
    std::size_t i0 = static_cast<std::size_t>(pos);
    if (i0 >= n - 1) i0 = n - 1;
    const std::size_t i1 = std::min(i0 + 1, n - 1);
    const double frac = pos - static_cast<double>(i0);
    out[i] = static_cast<float>((1.0 - frac) * wave[i0] + frac * wave[i1]);
  }
  return out;
}

constexpr double kGrainPi = 3.14159265358979323846;

/// Changes duration by `stretch` while keeping the spectrum: Hann-windowed
/// grains are copied verbatim from the matching input time and
/// overlap-added at 50% hop. Each grain's position is refined within a
/// small search window so it best continues the previous grain (waveform
/// similarity), keeping periodic content phase-coherent across joins.
std::vector<float> ola_stretch(const std::vector<float>& wave,
                               double stretch) {
  const int n = static_cast<int>(wave.size());
  const int out_len =
      std::max(1, static_cast<int>(std::lround(n * stretch)));
  const int grain = std::min(n, 256);
  if (grain < 8) return resample_linear(wave, 1.0 / stretch, out_len);
  const int hop = grain / 2;
  const int search = grain / 4;

  std::vector<double> win(grain);
  for (int i = 0; i < grain; ++i) {
    win[i] = 0.5 - 0.5 * std::cos(2.0 * kGrainPi * i / (grain - 1));
  }
  std::vector<double> acc(out_len, 0.0);
  std::vector<double> wsum(out_len, 0.0);
  int prev_in = -1;
  for (int start_out = 0; start_out < out_len; start_out += hop) {
    const double center_in = (start_out + grain / 2.0) / stretch;
    int nominal = static_cast<int>(std::lround(center_in - grain / 2.0));
    nominal = std::max(0, std::min(nominal, n - grain));
    int start_in = nominal;
    if (prev_in >= 0) {
      // The ideal next grain continues the previous one contiguously.
      const int ref = prev_in + hop;
      const int lo = std::max(0, nominal - search);
      const int hi = std::min(n - grain, nominal + search);
      double best = -1e300;
      for (int cand = lo; cand <= hi; ++cand) {
        double dot = 0.0;
        double norm = 1e-12;
        for (int i = 0; i < hop; ++i) {
          const double r = wave[std::min(ref + i, n - 1)];
          const double c = wave[cand + i];
          dot += r * c;
          norm += c * c;
        }
        const double score = dot / std::sqrt(norm);
        if (score > best) {
          best = score;
          start_in = cand;
        }
      }
    }
    for (int i = 0; i < grain && start_out + i < out_len; ++i) {
      acc[start_out + i] += win[i] * wave[start_in + i];
      wsum[start_out + i] += win[i];
    }
    prev_in = start_in;
  }
  std::vector<float> out(out_len);
  for (int i = 0; i < out_len; ++i) {
    out[i] = static_cast<float>(wsum[i] > 1e-9 ? acc[i] / wsum[i] : 0.0);
  }
  return out;
}

}  // namespace

std::vector<float> speed_perturb(const std::vector<float>& wave,
                                 double factor) {
  if (!(factor >= 0.8 && factor <= 1.25)) {
    throw FactorOutOfRangeError("speed factor " + std::to_string(factor) +
                                " outside [0.8, 1.25]");
  }
  if (wave.empty()) return wave;
  if (factor == 1.0) return wave;
  const std::size_t out_len =
      static_cast<std::size_t>(std::floor(wave.size() / factor));
  return resample_linear(wave, factor, std::max<std::size_t>(1, out_len));
}

std::vector<float> pitch_shift(const std::vector<float>& wave,
                               double semitones) {
  if (std::abs(semitones) > 12.0) {
    throw FactorOutOfRangeError("pitch shift " + std::to_string(semitones) +
                                " semitones outside [-12, 12]");
  }
  if (wave.empty() || semitones == 0.0) return wave;
  const double rate = std::pow(2.0, semitones / 12.0);
  // Stretch duration by `rate` with the spectrum intact, then resample by
  // `rate`: frequencies scale, the length lands back at the input's.
  const std::vector<float> stretched = ola_stretch(wave, rate);
  return resample_linear(stretched, rate, wave.size());
}

std::vector<unsigned char> draw_time_mask(int t, int n_masks, int max_width,
                                          Rng* rng) {
  std::vector<unsigned char> mask(t, 0);
  if (n_masks <= 0 || max_width <= 0) return mask;
  if (max_width > t) {
    throw InvalidConfigError("mask max_width " + std::to_string(max_width) +
                             " exceeds sequence length " + std::to_string(t));
  }
  for (int m = 0; m < n_masks; ++m) {
    const int width = static_cast<int>(rng->uniform_int(1, max_width));
    const int start = static_cast<int>(rng->uniform_int(0, t - width));
    for (int r = start; r < start + width; ++r) mask[r] = 1;
  }
  return mask;
}

FeatureSequence time_mask(const FeatureSequence& features, int n_masks,
                          int max_width, Rng* rng) {
  FeatureSequence out = features;
  const auto mask = draw_time_mask(features.t(), n_masks, max_width, rng);
  for (int r = 0; r < out.t(); ++r) {
    if (!mask[r]) continue;
    float* row = out.values.row(r);
    for (int c = 0; c < out.d(); ++c) row[c] = 0.0f;
  }
  return out;
}

std::pair<FeatureSequence, FeatureSequence> make_views(
    const FeatureSequence& features, const ViewPolicy& policy, Rng* rng) {
  FeatureSequence teacher = features;
  FeatureSequence student =
      policy.enable_time_mask
          ? time_mask(features, policy.mask_count, policy.mask_max_width, rng)
          : features;
  return {std::move(teacher), std::move(student)};
}

std::vector<float> augment_waveform(const std::vector<float>& wave,
                                    const ViewPolicy& policy, Rng* rng) {
  std::vector<float> out = wave;
  if (policy.enable_speed) {
    const double factor = rng->fork("speed").uniform(policy.speed_min,
                                                     policy.speed_max);
    out = speed_perturb(out, factor);
  }
  if (policy.enable_pitch) {
    const double st = rng->fork("pitch").uniform(-policy.pitch_semitones_max,
                                                 policy.pitch_semitones_max);
    out = pitch_shift(out, st);
  }
  return out;
}

}  // namespace hgs
