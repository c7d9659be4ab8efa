// core/include/hgs/features.hpp

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

#ifndef HGS_FEATURES_HPP_
#define HGS_FEATURES_HPP_

#include <string>

#include "hgs/mat.hpp"

namespace hgs {

/// A t x d matrix of 32-bit floats, the unit flowing through the encoder,
/// pooling, and both model heads. One row per frame.
struct FeatureSequence {
  Mat<float> values;
  double frame_hop_s = 0.0;

  int t() const { return values.rows; }
  int d() const { return values.cols; }
};

/// Binary feature file: magic "HGF1", little-endian u32 t, u32 d, then
/// t*d IEEE-754 32-bit floats, row-major.
FeatureSequence load_features(const std::string& path);
void save_features(const std::string& path, const FeatureSequence& f);

}  // namespace hgs

#endif  // HGS_FEATURES_HPP_
