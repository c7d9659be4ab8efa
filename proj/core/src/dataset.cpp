// core/src/dataset.cpp

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

#include "hgs/dataset.hpp"

#include <algorithm>

#include "hgs/errors.hpp"

namespace hgs {

TrainingSet build_training_set(const Manifest& manifest,
                               const std::vector<std::string>& ids,
                               const std::map<std::string, bool>* labeled_flag,
                               const ClipPartitionConfig& clip_config) {
  if (ids.empty()) {
    throw EmptySelectionError("training set: no sample ids");
  }
  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& entry : manifest.entries) by_id[entry.id] = &entry;

  TrainingSet set;
  set.num_classes = manifest.num_classes;
  set.sample_rate_hz = manifest.sample_rate_hz;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw EmptySelectionError("training set: unknown sample id " + id);
    }
    const Sample sample = load_sample(manifest, *it->second);
    TrainSample ts;
    ts.id = id;
    ts.feature_backed = sample.feature_backed;
    ts.clips = partition_clips(sample, clip_config);
    for (const auto& clip : ts.clips) {
      ts.clip_sessions.push_back(clip.session_index);
      if (sample.feature_backed) {
        ts.clip_feats.push_back(
            load_features(resolve_path(manifest, clip.feature_path)));
      }
    }
    ts.first_clip_store_index = set.n_clips;
    set.n_clips += static_cast<int>(ts.clips.size());

    const bool visible =
        sample.label.has_value() &&
        (labeled_flag == nullptr ||
         (labeled_flag->count(id) && labeled_flag->at(id)));
    const int idx = static_cast<int>(set.samples.size());
    if (visible) {
      ts.label = sample.label->class_index;
      set.labeled.push_back(idx);
    } else {
      ts.unlabeled_index = static_cast<int>(set.unlabeled.size());
      set.unlabeled.push_back(idx);
      set.sealed_truth.push_back(
          sample.label.has_value() ? sample.label->class_index : -1);
    }
    set.samples.push_back(std::move(ts));
  }
  return set;
}

PseudoLabelStore make_store(const TrainingSet& set) {
  PseudoLabelStore store;
  store.session.resize(set.unlabeled.size());
  store.clips.resize(set.n_clips);
  return store;
}

}  // namespace hgs
