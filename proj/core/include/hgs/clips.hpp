// core/include/hgs/clips.hpp

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

#ifndef HGS_CLIPS_HPP_
#define HGS_CLIPS_HPP_

#include <vector>

#include "hgs/types.hpp"

namespace hgs {

enum class ClipStrategy { kUtterance, kFixedWindow };

/// PAR_ONLY keeps participant speech only, the usual protocol when labels
/// describe the participant; BOTH keeps the whole dialogue.
enum class SpeakerFilter { kParOnly, kBoth };

struct ClipPartitionConfig {
  ClipStrategy strategy = ClipStrategy::kUtterance;
  SpeakerFilter speakers = SpeakerFilter::kParOnly;
  double window_s = 5.0;  // FIXED_WINDOW only
  double hop_s = 5.0;
};

/// Partitions a sample into clips.
///
/// UTTERANCE yields one clip per selected utterance, in order.
/// FIXED_WINDOW tiles each maximal run of consecutive selected utterances
/// within a dialogue session (their audio concatenated) with windows of
/// window_s stepped by hop_s; a final partial window is kept if it spans
/// at least 0.2*window_s and is otherwise merged into the region's last
/// clip. FIXED_WINDOW requires an audio-backed sample.
///
/// Throws EmptySelectionError when the filter selects nothing and
/// InvalidConfigError for bad window parameters.
std::vector<Clip> partition_clips(const Sample& sample,
                                  const ClipPartitionConfig& config);

}  // namespace hgs

#endif  // HGS_CLIPS_HPP_
