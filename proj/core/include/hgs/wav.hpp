// core/include/hgs/wav.hpp

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

#ifndef HGS_WAV_HPP_
#define HGS_WAV_HPP_

#include <string>
#include <vector>

namespace hgs {

struct AudioBuffer {
  std::vector<float> samples;  // in [-1, 1]
  int sample_rate_hz = 0;
};

/// Reads a mono 16-bit PCM WAV file. Anything else is a SchemaError.
AudioBuffer load_wav(const std::string& path);

/// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] and rounded
/// to nearest; the conversion is deterministic.
void save_wav(const std::string& path, const AudioBuffer& audio);

}  // namespace hgs

#endif  // HGS_WAV_HPP_
