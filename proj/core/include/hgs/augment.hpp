// core/include/hgs/augment.hpp

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

#ifndef HGS_AUGMENT_HPP_
#define HGS_AUGMENT_HPP_

#include <utility>
#include <vector>

#include "hgs/features.hpp"
#include "hgs/rng.hpp"

namespace hgs {

/// Two-view policy for the consistency path. Length-changing augmentations
/// (speed, pitch) run upstream on the waveform, identically for both views;
/// the student-only difference is restricted to length-preserving time
/// masking so the elementwise teacher/student MSE stays well-defined.
struct ViewPolicy {
  bool enable_time_mask = true;
  int mask_count = 2;
  int mask_max_width = 4;
  bool enable_speed = true;
  double speed_min = 0.9;
  double speed_max = 1.1;
  bool enable_pitch = false;
  double pitch_semitones_max = 2.0;
};

/// Resamples by linear interpolation; output length = floor(len / factor).
/// factor outside [0.8, 1.25] raises FactorOutOfRangeError; factor == 1
/// returns a bit-identical copy.
std::vector<float> speed_perturb(const std::vector<float>& wave,
                                 double factor);

/// Scales frequencies by 2^(semitones/12) at unchanged duration: a
/// grain-overlap-add time stretch (spectrum preserved) followed by a
/// resample. |semitones| is validated against one octave.
std::vector<float> pitch_shift(const std::vector<float>& wave,
                               double semitones);

/// Draws the row mask used by time masking: n_masks spans of width uniform
/// in [1, max_width] at uniform start positions, flags set on masked rows.
std::vector<unsigned char> draw_time_mask(int t, int n_masks, int max_width,
                                          Rng* rng);

/// Zeroes whole frames. max_width == 0 or n_masks == 0 is the identity;
/// max_width must not exceed t.
FeatureSequence time_mask(const FeatureSequence& features, int n_masks,
                          int max_width, Rng* rng);

/// Teacher view is the identity; student view applies the policy's time
/// masking. Both views always share t and d.
std::pair<FeatureSequence, FeatureSequence> make_views(
    const FeatureSequence& features, const ViewPolicy& policy, Rng* rng);

/// Applies the policy's waveform-level augmentations (speed, pitch) with
/// draws from `rng`. Used upstream of the encoder, identically for both
/// views.
std::vector<float> augment_waveform(const std::vector<float>& wave,
                                    const ViewPolicy& policy, Rng* rng);

}  // namespace hgs

#endif  // HGS_AUGMENT_HPP_
