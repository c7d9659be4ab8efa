// core/src/splits.cpp

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

#include "hgs/splits.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hgs/errors.hpp"
#include "hgs/rng.hpp"

namespace hgs {
namespace {

void shuffle_ids(std::vector<std::string>* ids, Rng* rng) {
  for (int i = static_cast<int>(ids->size()) - 1; i > 0; --i) {
    const int j = static_cast<int>(rng->uniform_int(0, i));
    std::swap((*ids)[i], (*ids)[j]);
  }
}

}  // namespace

std::vector<SplitSpec> kfold_split(const Manifest& manifest, int n_folds,
                                   std::uint64_t seed, bool stratified) {
  const int n = static_cast<int>(manifest.entries.size());
  if (n_folds < 2) throw TooFewSamplesError("n_folds must be >= 2");
  if (n_folds > n) {
    throw TooFewSamplesError("n_folds " + std::to_string(n_folds) +
                             " exceeds corpus size " + std::to_string(n));
  }

  // Strata: one per class plus one for unlabeled entries; a single stratum
  // in unstratified mode. Ids keep manifest order until shuffled.
  std::map<int, std::vector<std::string>> strata;
  for (const auto& e : manifest.entries) {
    const int key = stratified
                        ? (e.label.has_value() ? e.label->class_index : -1)
                        : 0;
    strata[key].push_back(e.id);
  }

  Rng rng = Rng(seed).fork("kfold");
  std::map<std::string, int> fold_of;
  // One global cycling counter across strata keeps overall fold sizes
  // within +-1 while each stratum alone distributes within +-1.
  int counter = 0;
  for (auto& [key, ids] : strata) {
    Rng srng = rng.fork(static_cast<std::uint64_t>(key + 1));
    shuffle_ids(&ids, &srng);
    for (const auto& id : ids) fold_of[id] = counter++ % n_folds;
  }

  std::vector<SplitSpec> specs(n_folds);
  for (int f = 0; f < n_folds; ++f) {
    specs[f].fold_of = fold_of;
    specs[f].test_fold = f;
    specs[f].seed = seed;
  }
  return specs;
}

SplitSpec label_fraction_split(const std::vector<std::string>& train_ids,
                               const std::map<std::string, int>& labels,
                               double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InvalidConfigError("fraction must lie in (0, 1]");
  }
  const int n = static_cast<int>(train_ids.size());
  SplitSpec spec;
  spec.seed = seed;
  if (n == 0) return spec;
  int n_labeled = static_cast<int>(std::lround(fraction * n));
  n_labeled = std::clamp(n_labeled, 1, n);

  std::vector<std::string> order = train_ids;
  Rng rng = Rng(seed).fork("label-fraction");
  shuffle_ids(&order, &rng);

  // Priority list: the first occurrence of each class (in shuffled order)
  // comes first, then everything else in shuffled order. Taking a prefix of
  // this list is what makes splits nested across fractions.
  std::vector<std::string> priority;
  std::set<int> seen_classes;
  std::set<std::string> in_priority;
  for (const auto& id : order) {
    const auto it = labels.find(id);
    if (it == labels.end()) continue;
    if (seen_classes.insert(it->second).second) {
      priority.push_back(id);
      in_priority.insert(id);
    }
  }
  for (const auto& id : order) {
    if (labels.count(id) == 0) continue;  // nothing to supervise with
    if (in_priority.count(id)) continue;
    priority.push_back(id);
  }

  for (const auto& id : train_ids) spec.labeled_flag[id] = false;
  const int take = std::min<int>(n_labeled, static_cast<int>(priority.size()));
  for (int i = 0; i < take; ++i) spec.labeled_flag[priority[i]] = true;
  return spec;
}

}  // namespace hgs
