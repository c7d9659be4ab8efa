// core/src/syndata.cpp

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

#include "hgs/syndata.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hgs/errors.hpp"
#include "hgs/manifest.hpp"
#include "hgs/wav.hpp"

namespace hgs {
namespace {

namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;
constexpr double kNoiseRms = 0.1;

std::string sample_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "syn%04d", index);
  return std::string(buf);
}

/// White Gaussian noise through a 2-tap moving average, RMS-normalized.
/// The filter rolls off toward Nyquist, so the band containing the marker
/// stays occupied and a global energy statistic stays uninformative.
std::vector<float> noise_utterance(int len, Rng* rng) {
  std::vector<float> w(len);
  double prev = 0.0;
  double energy = 0.0;
  for (int i = 0; i < len; ++i) {
    const double x = rng->normal();
    const double y = 0.5 * (x + prev);
    prev = x;
    w[i] = static_cast<float>(y);
    energy += y * y;
  }
  const double rms = std::sqrt(energy / len);
  if (rms > 0.0) {
    const float scale = static_cast<float>(kNoiseRms / rms);
    for (float& v : w) v *= scale;
  }
  return w;
}

}  // namespace

void validate(const SynConfig& c) {
  if (c.n_samples < 1) throw InvalidConfigError("n_samples must be >= 1");
  if (c.positive_fraction < 0.0 || c.positive_fraction > 1.0) {
    throw InvalidConfigError("positive_fraction must lie in [0, 1]");
  }
  if (c.sessions_min < 1 || c.sessions_max < c.sessions_min) {
    throw InvalidConfigError("sessions_min..sessions_max range is empty");
  }
  if (c.utts_min < 1 || c.utts_max < c.utts_min) {
    throw InvalidConfigError("utts_min..utts_max range is empty");
  }
  if (!(c.utt_s_min > 0.0) || c.utt_s_max < c.utt_s_min) {
    throw InvalidConfigError("utt_s_min..utt_s_max range is empty");
  }
  if (c.marker_sparsity < 0.0 || c.marker_sparsity > 1.0) {
    throw InvalidConfigError("marker_sparsity must lie in [0, 1]");
  }
  if (!(c.marker_freq_hz > 0.0)) {
    throw InvalidConfigError("marker_freq_hz must be > 0");
  }
  if (c.sample_rate_hz <= 2.0 * c.marker_freq_hz) {
    throw InvalidConfigError(
        "sample_rate_hz must exceed 2 * marker_freq_hz");
  }
  if (!(c.marker_am_hz > 0.0)) {
    throw InvalidConfigError("marker_am_hz must be > 0");
  }
  if (c.gain_jitter_db < 0.0) {
    throw InvalidConfigError("gain_jitter_db must be >= 0");
  }
}

std::vector<float> inject_marker(const std::vector<float>& clip,
                                 double freq_hz, int sample_rate_hz,
                                 double snr_db, Rng* rng, double am_hz) {
  if (std::isinf(snr_db) && snr_db < 0.0) return clip;
  const double phase = rng->uniform(0.0, 2.0 * kPi);
  const double am_phase = rng->uniform(0.0, 2.0 * kPi);
  const int len = static_cast<int>(clip.size());
  std::vector<double> marker(len);
  double marker_power = 0.0;
  double clip_power = 0.0;
  for (int i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    const double env = 0.5 * (1.0 - std::cos(2.0 * kPi * am_hz * t + am_phase));
    marker[i] = env * std::sin(2.0 * kPi * freq_hz * t + phase);
    marker_power += marker[i] * marker[i];
    clip_power += static_cast<double>(clip[i]) * clip[i];
  }
  marker_power /= len;
  clip_power /= len;
  double amp = 1.0;
  if (clip_power > 0.0 && marker_power > 0.0) {
    amp = std::sqrt(clip_power * std::pow(10.0, snr_db / 10.0) / marker_power);
  }
  std::vector<float> out(clip);
  for (int i = 0; i < len; ++i) {
    out[i] = static_cast<float>(out[i] + amp * marker[i]);
  }
  return out;
}

std::pair<SynSampleInfo, AudioBuffer> generate_sample(const SynConfig& config,
                                                      int index) {
  validate(config);
  const std::string id = sample_id(index);
  const int n_pos =
      static_cast<int>(std::lround(config.positive_fraction * config.n_samples));
  SynSampleInfo info;
  info.id = id;
  info.label = index < n_pos ? 1 : 0;

  Rng rng = Rng::from_seed_and_key(config.seed, "sample-" + id);
  Rng structure = rng.fork("structure");
  AudioBuffer audio;
  audio.sample_rate_hz = config.sample_rate_hz;

  const int n_sessions = static_cast<int>(
      structure.uniform_int(config.sessions_min, config.sessions_max));
  int utt_index = 0;
  for (int s = 0; s < n_sessions; ++s) {
    const int n_utts = static_cast<int>(
        structure.uniform_int(config.utts_min, config.utts_max));
    for (int u = 0; u < n_utts; ++u, ++utt_index) {
      Rng urng = rng.fork("utt").fork(static_cast<std::uint64_t>(utt_index));
      const Speaker speaker =
          (u == 0 && n_utts >= 2) ? Speaker::kInv : Speaker::kPar;
      const double dur = urng.uniform(config.utt_s_min, config.utt_s_max);
      const int len =
          static_cast<int>(std::lround(dur * config.sample_rate_hz));
      std::vector<float> wave = noise_utterance(std::max(1, len), &urng);

      bool marked = false;
      if (info.label == 1 && speaker == Speaker::kPar) {
        marked = urng.uniform() < config.marker_sparsity;
      }
      // Marker and gain draws run on forked streams: whether a marker was
      // drawn cannot shift any other utterance statistic.
      if (marked) {
        Rng mrng = urng.fork("marker");
        wave = inject_marker(wave, config.marker_freq_hz,
                             config.sample_rate_hz, config.snr_db, &mrng,
                             config.marker_am_hz);
      }
      const double gain_db = urng.fork("gain").uniform(-config.gain_jitter_db,
                                                       0.0);
      const float gain = static_cast<float>(std::pow(10.0, gain_db / 20.0));
      for (float& v : wave) v *= gain;

      SynUttInfo utt;
      utt.session = s;
      utt.speaker = speaker;
      utt.marked = marked;
      utt.start_s =
          static_cast<double>(audio.samples.size()) / config.sample_rate_hz;
      audio.samples.insert(audio.samples.end(), wave.begin(), wave.end());
      utt.end_s =
          static_cast<double>(audio.samples.size()) / config.sample_rate_hz;
      info.utts.push_back(utt);
    }
  }
  return {std::move(info), std::move(audio)};
}

SynCorpus generate_corpus(const SynConfig& config,
                          const std::string& out_dir) {
  validate(config);
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "audio", ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  SynCorpus corpus;
  corpus.manifest.num_classes = 2;
  corpus.manifest.sample_rate_hz = config.sample_rate_hz;
  corpus.manifest.base_dir = out_dir;

  for (int i = 0; i < config.n_samples; ++i) {
    auto [info, audio] = generate_sample(config, i);
    const std::string rel = "audio/" + info.id + ".wav";
    save_wav((fs::path(out_dir) / rel).string(), audio);

    ManifestEntry entry;
    entry.id = info.id;
    entry.kind = EntryKind::kAudio;
    entry.path = rel;
    entry.label = Label{info.label};
    for (const auto& u : info.utts) {
      SegmentRecord seg;
      seg.speaker = u.speaker;
      seg.start_s = u.start_s;
      seg.end_s = u.end_s;
      seg.session = u.session;
      entry.segments.push_back(seg);
    }
    corpus.manifest.entries.push_back(std::move(entry));
    corpus.info.push_back(std::move(info));
  }

  save_manifest((fs::path(out_dir) / "manifest.tsv").string(),
                corpus.manifest);

  std::ofstream truth((fs::path(out_dir) / "markers.tsv").string(),
                      std::ios::trunc);
  if (!truth) throw IoError("cannot write markers.tsv in " + out_dir);
  truth << "id\tlabel\tutt\tsession\tspeaker\tmarked\tstart_s\tend_s\n";
  for (const auto& info : corpus.info) {
    for (std::size_t u = 0; u < info.utts.size(); ++u) {
      const auto& utt = info.utts[u];
      char line[160];
      std::snprintf(line, sizeof(line),
                    "%s\t%d\t%zu\t%d\t%s\t%d\t%.6f\t%.6f\n", info.id.c_str(),
                    info.label, u, utt.session,
                    speaker_name(utt.speaker).c_str(), utt.marked ? 1 : 0,
                    utt.start_s, utt.end_s);
      truth << line;
    }
  }
  return corpus;
}

}  // namespace hgs
