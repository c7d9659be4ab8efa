// core/include/hgs/checkpoint.hpp

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

#ifndef HGS_CHECKPOINT_HPP_
#define HGS_CHECKPOINT_HPP_

#include <cstdint>
#include <string>

#include "hgs/model.hpp"

namespace hgs {

/// Both model branches plus the metadata needed to resume or evaluate.
/// Parameters are stored as float32, so a save/load round trip reproduces
/// inference outputs exactly.
struct Checkpoint {
  ModelDims dims;
  ModelParams<float> teacher;
  ModelParams<float> student;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
};

/// Binary format "HGC1": version, model dims, seed, step, then named
/// float32 parameter groups for both branches. Little-endian throughout.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);

/// Throws MissingFileError, SchemaError (bad magic, version, shape, or
/// group set), or IoError on a short read.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hgs

#endif  // HGS_CHECKPOINT_HPP_
