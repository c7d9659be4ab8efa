// core/include/hgs/splits.hpp

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

#ifndef HGS_SPLITS_HPP_
#define HGS_SPLITS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hgs/types.hpp"

namespace hgs {

/// Deterministic k-fold assignment over the manifest's samples. Returns one
/// SplitSpec per fold (shared fold map, rotating test_fold). Stratified mode
/// keeps per-fold class counts within +-1 of proportional; samples without a
/// label form their own stratum.
std::vector<SplitSpec> kfold_split(const Manifest& manifest, int n_folds,
                                   std::uint64_t seed, bool stratified);

/// Marks round(fraction * |train_ids|) ids as labeled (clamped to >= 1),
/// guaranteeing at least one per class when the budget allows. Splits are
/// nested: under one seed the labeled set at a smaller fraction is a subset
/// of the labeled set at any larger fraction. Ids absent from `labels` are
/// never selected.
SplitSpec label_fraction_split(const std::vector<std::string>& train_ids,
                               const std::map<std::string, int>& labels,
                               double fraction, std::uint64_t seed);

}  // namespace hgs

#endif  // HGS_SPLITS_HPP_
