// core/include/hgs/syndata.hpp

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

#ifndef HGS_SYNDATA_HPP_
#define HGS_SYNDATA_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hgs/rng.hpp"
#include "hgs/types.hpp"

namespace hgs {

/// Synthetic sparse-marker corpus configuration. Negative samples are
/// band-limited noise throughout; in positive samples each PAR utterance
/// independently carries an amplitude-modulated tone at marker_freq_hz
/// with probability marker_sparsity, at snr_db relative to that
/// utterance's noise. INV utterances never carry markers, so the session
/// label is informative only through a sparse subset of participant clips.
struct SynConfig {
  int n_samples = 120;
  double positive_fraction = 0.5;
  int sessions_min = 2;
  int sessions_max = 3;
  int utts_min = 2;  // per session, including the leading INV turn
  int utts_max = 3;
  double utt_s_min = 0.6;
  double utt_s_max = 1.0;
  double marker_sparsity = 0.4;  // per-PAR-utterance marker probability
  double marker_freq_hz = 500.0;
  double marker_am_hz = 4.0;
  double snr_db = 5.0;
  double gain_jitter_db = 6.0;  // per-utterance gain drawn from [-this, 0] dB
  int sample_rate_hz = 2000;
  std::uint64_t seed = 1;
};

/// Throws InvalidConfigError naming the offending field.
void validate(const SynConfig& config);

struct SynUttInfo {
  int session = 0;
  Speaker speaker = Speaker::kPar;
  bool marked = false;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct SynSampleInfo {
  std::string id;
  int label = 0;
  std::vector<SynUttInfo> utts;
};

struct SynCorpus {
  Manifest manifest;
  std::vector<SynSampleInfo> info;  // ground truth incl. marker placement
};

/// Adds the marker tone to a copy of `clip` so that added-power /
/// clip-power matches snr_db. Tone and envelope phases come from `rng`.
/// snr_db == -infinity returns the clip unchanged; an all-zero clip gets
/// the marker at unit amplitude.
std::vector<float> inject_marker(const std::vector<float>& clip,
                                 double freq_hz, int sample_rate_hz,
                                 double snr_db, Rng* rng,
                                 double am_hz = 4.0);

/// Generates one sample from its own RNG stream derived from
/// (config.seed, sample id); output is independent of generation order.
std::pair<SynSampleInfo, AudioBuffer> generate_sample(const SynConfig& config,
                                                      int index);

/// Writes WAV files under `<out_dir>/audio/`, the manifest to
/// `<out_dir>/manifest.tsv`, and a `markers.tsv` ground-truth sidecar.
/// Byte-deterministic in config.seed.
SynCorpus generate_corpus(const SynConfig& config, const std::string& out_dir);

}  // namespace hgs

#endif  // HGS_SYNDATA_HPP_
