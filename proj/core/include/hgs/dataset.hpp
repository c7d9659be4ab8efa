// core/include/hgs/dataset.hpp

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

#ifndef HGS_DATASET_HPP_
#define HGS_DATASET_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hgs/clips.hpp"
#include "hgs/manifest.hpp"
#include "hgs/pseudo.hpp"

namespace hgs {

/// One sample with its clips fully materialized in memory. `label` is the
/// label visible to training; a label hidden by the labeled-fraction split
/// lives only in TrainingSet::sealed_truth.
struct TrainSample {
  std::string id;
  bool feature_backed = false;
  std::vector<Clip> clips;
  std::vector<FeatureSequence> clip_feats;  // aligned with clips when
                                            // feature_backed
  std::vector<int> clip_sessions;
  int first_clip_store_index = 0;  // into PseudoLabelStore::clips
  std::optional<int> label;
  int unlabeled_index = -1;  // slot in the unlabeled ordering, or -1
};

struct TrainingSet {
  int num_classes = 0;
  int sample_rate_hz = 0;
  std::vector<TrainSample> samples;
  std::vector<int> labeled;    // indices into samples
  std::vector<int> unlabeled;  // indices into samples, slot order
  /// Hidden ground truth per unlabeled slot (-1 when the manifest had
  /// none). Consumed only by pseudo-label accuracy reporting; the training
  /// path never reads it.
  std::vector<int> sealed_truth;
  int n_clips = 0;
};

/// Loads and partitions the given manifest entries. `labeled_flag` (id ->
/// visible) hides labels for semi-supervised runs; pass nullptr to keep
/// every manifest label visible. Entries without a manifest label are
/// unlabeled either way.
TrainingSet build_training_set(const Manifest& manifest,
                               const std::vector<std::string>& ids,
                               const std::map<std::string, bool>* labeled_flag,
                               const ClipPartitionConfig& clip_config);

/// Empty pseudo-label records sized for the set: one per unlabeled slot,
/// one per training clip.
PseudoLabelStore make_store(const TrainingSet& set);

}  // namespace hgs

#endif  // HGS_DATASET_HPP_
