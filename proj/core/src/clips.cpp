// core/src/clips.cpp

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

#include "hgs/clips.hpp"

#include <cmath>

#include "hgs/errors.hpp"

namespace hgs {
namespace {

bool selected(Speaker s, SpeakerFilter filter) {
  return filter == SpeakerFilter::kBoth || s == Speaker::kPar;
}

std::vector<float> utterance_samples(const Sample& sample,
                                     const Utterance& u) {
  const auto& audio = *sample.audio;
  const long n = static_cast<long>(audio.samples.size());
  long lo = std::lround(u.start_s * sample.sample_rate_hz);
  long hi = std::lround(u.end_s * sample.sample_rate_hz);
  lo = std::max(0l, std::min(lo, n));
  hi = std::max(lo, std::min(hi, n));
  return std::vector<float>(audio.samples.begin() + lo,
                            audio.samples.begin() + hi);
}

}  // namespace

std::vector<Clip> partition_clips(const Sample& sample,
                                  const ClipPartitionConfig& config) {
  if (sample.sessions.empty()) {
    throw EmptySelectionError("sample " + sample.id + " has no sessions");
  }
  if (config.strategy == ClipStrategy::kFixedWindow) {
    if (!(config.hop_s > 0.0) || config.window_s < config.hop_s) {
      throw InvalidConfigError("FIXED_WINDOW requires window_s >= hop_s > 0");
    }
    if (sample.feature_backed) {
      throw InvalidConfigError(
          "FIXED_WINDOW needs waveforms; feature-backed samples support "
          "UTTERANCE only");
    }
  }
  if (!sample.feature_backed && !sample.audio) {
    throw InvalidConfigError("sample " + sample.id + " has no audio loaded");
  }

  std::vector<Clip> clips;
  int order = 0;
  for (std::size_t si = 0; si < sample.sessions.size(); ++si) {
    const auto& session = sample.sessions[si];
    if (config.strategy == ClipStrategy::kUtterance) {
      for (const auto& u : session.utterances) {
        if (!selected(u.speaker, config.speakers)) continue;
        Clip c;
        c.sample_id = sample.id;
        c.session_index = static_cast<int>(si);
        c.order_index = order++;
        c.source_speaker = u.speaker;
        if (sample.feature_backed) {
          c.feature_path = u.feature_path;
          c.has_features = false;
        } else {
          c.samples = utterance_samples(sample, u);
        }
        clips.push_back(std::move(c));
      }
      continue;
    }

    // FIXED_WINDOW: gather maximal runs of consecutive selected utterances.
    std::size_t ui = 0;
    while (ui < session.utterances.size()) {
      if (!selected(session.utterances[ui].speaker, config.speakers)) {
        ++ui;
        continue;
      }
      std::vector<float> region;
      std::optional<Speaker> region_speaker;
      bool mixed = false;
      while (ui < session.utterances.size() &&
             selected(session.utterances[ui].speaker, config.speakers)) {
        const auto& u = session.utterances[ui];
        const auto piece = utterance_samples(sample, u);
        region.insert(region.end(), piece.begin(), piece.end());
        if (!region_speaker.has_value()) {
          region_speaker = u.speaker;
        } else if (*region_speaker != u.speaker) {
          mixed = true;
        }
        ++ui;
      }
      if (region.empty()) continue;

      const long win = std::lround(config.window_s * sample.sample_rate_hz);
      const long hop = std::lround(config.hop_s * sample.sample_rate_hz);
      const long len = static_cast<long>(region.size());
      const long min_tail = std::lround(0.2 * win);
      const int first_clip = static_cast<int>(clips.size());
      long p = 0;
      while (p + win <= len) {
        Clip c;
        c.sample_id = sample.id;
        c.session_index = static_cast<int>(si);
        c.order_index = order++;
        c.source_speaker = mixed ? std::nullopt : region_speaker;
        c.samples.assign(region.begin() + p, region.begin() + p + win);
        clips.push_back(std::move(c));
        p += hop;
      }
      if (p < len) {
        const long rem = len - p;
        if (rem >= min_tail || static_cast<int>(clips.size()) == first_clip) {
          Clip c;
          c.sample_id = sample.id;
          c.session_index = static_cast<int>(si);
          c.order_index = order++;
          c.source_speaker = mixed ? std::nullopt : region_speaker;
          c.samples.assign(region.begin() + p, region.end());
          clips.push_back(std::move(c));
        } else {
          // Too short to stand alone: merge into the region's last clip.
          Clip& last = clips.back();
          last.samples.insert(last.samples.end(), region.begin() + p,
                              region.end());
        }
      }
    }
  }
  if (clips.empty()) {
    throw EmptySelectionError("sample " + sample.id +
                              ": speaker filter selected no utterances");
  }
  return clips;
}

}  // namespace hgs
