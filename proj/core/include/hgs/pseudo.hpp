// core/include/hgs/pseudo.hpp

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

#ifndef HGS_PSEUDO_HPP_
#define HGS_PSEUDO_HPP_

#include <cstdint>
#include <vector>

namespace hgs {

/// One session-level pseudo-label record for an unlabeled sample.
struct PseudoSampleRecord {
  int label = -1;
  float confidence = 0.0f;
  bool active = false;
  std::int64_t last_refresh_step = -1;
};

/// One clip-level pseudo-label record. Clip records exist for the clips of
/// every training sample, labeled or not, since clip targets always come
/// from the teacher rather than the session label.
struct PseudoClipRecord {
  int label = -1;
  float confidence = 0.0f;
  bool active = false;
};

/// Indexed by the training set's unlabeled-sample order (session records)
/// and by global training-clip order (clip records). Refreshes overwrite
/// in place; there is no history.
struct PseudoLabelStore {
  std::vector<PseudoSampleRecord> session;
  std::vector<PseudoClipRecord> clips;

  int n_active_samples() const {
    int n = 0;
    for (const auto& r : session) n += r.active ? 1 : 0;
    return n;
  }
  int n_active_clips() const {
    int n = 0;
    for (const auto& r : clips) n += r.active ? 1 : 0;
    return n;
  }
};

}  // namespace hgs

#endif  // HGS_PSEUDO_HPP_
