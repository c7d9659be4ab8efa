// core/include/hgs/types.hpp

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

#ifndef HGS_TYPES_HPP_
#define HGS_TYPES_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hgs/features.hpp"
#include "hgs/wav.hpp"

namespace hgs {

/// Speaker role. INV is the investigator (interviewer); PAR is the
/// participant whose condition the sample label describes.
enum class Speaker { kInv, kPar };

std::string speaker_name(Speaker s);
Speaker parse_speaker(const std::string& name);

/// Class index in [0, C). Class 0 designates healthy controls; classes
/// 1..C-1 pathological conditions.
struct Label {
  int class_index = 0;
};

/// One speaker turn. Audio-backed utterances address a span of the owning
/// sample's waveform; feature-backed utterances name a feature file.
struct Utterance {
  Speaker speaker = Speaker::kPar;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string feature_path;  // empty for audio-backed

  double duration_s() const { return end_s - start_s; }
};

/// One question-answer exchange. Utterance order inside a session is
/// meaningful and preserved; order across sessions of a sample is not.
struct DialogueSession {
  std::vector<Utterance> utterances;
};

/// A recording with a single optional session-level label. `label` is
/// present iff the sample belongs to the labeled set.
struct Sample {
  std::string id;
  std::vector<DialogueSession> sessions;
  std::optional<Label> label;
  int sample_rate_hz = 0;
  std::shared_ptr<AudioBuffer> audio;  // null for feature-backed samples
  bool feature_backed = false;
};

/// A contiguous audio segment, the intermediate granularity between
/// frame and session. Audio-backed clips carry waveform samples;
/// feature-backed clips carry either in-memory features or the path of a
/// feature file the encoder loads on demand.
struct Clip {
  std::string sample_id;
  int session_index = 0;
  int order_index = 0;
  std::vector<float> samples;
  FeatureSequence features;
  bool has_features = false;
  std::string feature_path;
  std::optional<Speaker> source_speaker;  // unset for mixed-speaker windows
};

enum class EntryKind { kAudio, kFeatures };

struct SegmentRecord {
  Speaker speaker = Speaker::kPar;
  double start_s = 0.0;
  double end_s = 0.0;
  int session = -1;       // optional explicit dialogue-session index
  std::string path;       // per-utterance feature file (features kind)
};

struct ManifestEntry {
  std::string id;
  EntryKind kind = EntryKind::kAudio;
  std::string path;  // audio file; may be "-" for features kind
  std::optional<Label> label;
  std::vector<SegmentRecord> segments;
};

struct Manifest {
  int num_classes = 0;
  int sample_rate_hz = 0;
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // directory manifest paths are resolved against

  int n_labeled() const;
  int n_unlabeled() const;
};

/// Fold assignment over the corpus plus the labeled/unlabeled flags for
/// one training configuration. `test_fold` selects which fold is held out.
struct SplitSpec {
  std::map<std::string, int> fold_of;
  int test_fold = -1;
  std::map<std::string, bool> labeled_flag;
  std::uint64_t seed = 0;

  std::vector<std::string> train_ids() const;
  std::vector<std::string> test_ids() const;
};

}  // namespace hgs

#endif  // HGS_TYPES_HPP_
