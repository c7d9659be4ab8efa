// core/include/hgs/manifest.hpp

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

#ifndef HGS_MANIFEST_HPP_
#define HGS_MANIFEST_HPP_

#include <string>

#include "hgs/types.hpp"

namespace hgs {

/// Manifest text format, one record per line, tab-separated:
///   header   `#HGM1\tC=<int>\tsr=<int>`
///   record   `id\tkind(audio|features)\tpath\tlabel(int or "-")\tsegments`
/// where segments is a JSON array of objects with keys `speaker`
/// ("INV"|"PAR"), `start_s`, `end_s`, and optionally `session` (integer
/// dialogue-session index) and `path` (per-utterance feature file, required
/// for the features kind). Relative paths resolve against the manifest's
/// directory.
///
/// Validates ids unique, labels in [0, C), and that every referenced file
/// exists.
Manifest load_manifest(const std::string& path);

void save_manifest(const std::string& path, const Manifest& manifest);

/// Resolves a manifest-relative path against the manifest's directory.
std::string resolve_path(const Manifest& manifest, const std::string& path);

/// Builds the Sample hierarchy for one manifest entry, loading the audio
/// for audio-backed entries. Dialogue sessions follow explicit `session`
/// keys when present; otherwise a new session starts at each INV utterance
/// that follows a PAR utterance.
Sample load_sample(const Manifest& manifest, const ManifestEntry& entry);

}  // namespace hgs

#endif  // HGS_MANIFEST_HPP_
