// tests/test_syndata.cpp

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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "hgs/errors.hpp"
#include "hgs/manifest.hpp"
#include "hgs/syndata.hpp"
#include "hgs/wav.hpp"
#include "test_helpers.hpp"

using namespace hgs;
using hgs_test::TempDir;

namespace {

// Goertzel single-bin power at freq_hz, normalized by span length and by
// the span's total power. Independent of any library DSP code.
double goertzel_relative_power(const std::vector<float>& x, int begin, int end,
                               double freq_hz, int sr) {
  const int n = end - begin;
  const double w = 2.0 * 3.14159265358979323846 * freq_hz / sr;
  const double coeff = 2.0 * std::cos(w);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double total = 0.0;
  for (int i = begin; i < end; ++i) {
    const double v = x[i];
    s0 = v + coeff * s1 - s2;
    s2 = s1;
    s1 = s0;
    total += v * v;
  }
  const double band = s1 * s1 + s2 * s2 - coeff * s1 * s2;
  if (total <= 0.0) return 0.0;
  return band / (n * total);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("corpus structure follows the config") {
  TempDir dir("hgs_syn_struct");
  SynConfig c = hgs_test::tiny_syn_config(10, 21);
  c.positive_fraction = 0.5;
  SynCorpus corpus = generate_corpus(c, dir.str());

  REQUIRE(corpus.manifest.entries.size() == 10);
  REQUIRE(corpus.info.size() == 10);
  int positives = 0;
  for (const auto& info : corpus.info) {
    positives += info.label;
    int max_session = -1;
    for (const auto& u : info.utts) {
      max_session = std::max(max_session, u.session);
      const double dur = u.end_s - u.start_s;
      CHECK(dur >= c.utt_s_min - 1e-3);
      CHECK(dur <= c.utt_s_max + 1e-3);
    }
    CHECK(max_session + 1 >= c.sessions_min);
    CHECK(max_session + 1 <= c.sessions_max);
  }
  CHECK(positives == 5);

  // Only positive-class participant utterances may carry markers.
  for (const auto& info : corpus.info) {
    for (const auto& u : info.utts) {
      if (info.label == 0 || u.speaker == Speaker::kInv) CHECK(!u.marked);
    }
  }

  // The manifest loads back and resolves every written WAV.
  Manifest m = load_manifest(dir.str("manifest.tsv"));
  CHECK(m.num_classes == 2);
  CHECK(m.entries.size() == 10);
}

TEST_CASE("identical seeds reproduce the corpus byte-for-byte") {
  TempDir a("hgs_syn_det_a");
  TempDir b("hgs_syn_det_b");
  SynConfig c = hgs_test::tiny_syn_config(4, 77);
  generate_corpus(c, a.str());
  generate_corpus(c, b.str());
  CHECK(slurp(a.str("markers.tsv")) == slurp(b.str("markers.tsv")));
  Manifest m = load_manifest(a.str("manifest.tsv"));
  for (const auto& e : m.entries) {
    CHECK(slurp(a.str(e.path)) == slurp(b.str(e.path)));
  }

  TempDir d("hgs_syn_det_d");
  c.seed = 78;
  generate_corpus(c, d.str());
  CHECK(slurp(a.str(m.entries[0].path)) != slurp(d.str(m.entries[0].path)));
}

TEST_CASE("markers concentrate band power at the marker frequency") {
  TempDir dir("hgs_syn_marker");
  SynConfig c;
  c.n_samples = 8;
  c.sessions_min = 2;
  c.sessions_max = 2;
  c.utts_min = 3;
  c.utts_max = 3;
  c.utt_s_min = 0.5;
  c.utt_s_max = 0.8;
  c.marker_sparsity = 0.5;
  c.sample_rate_hz = 2000;
  c.snr_db = 5.0;
  c.seed = 5;
  SynCorpus corpus = generate_corpus(c, dir.str());

  std::vector<double> marked_power;
  std::vector<double> clean_power;
  for (std::size_t i = 0; i < corpus.info.size(); ++i) {
    const auto& info = corpus.info[i];
    AudioBuffer audio =
        load_wav(dir.str(corpus.manifest.entries[i].path));
    for (const auto& u : info.utts) {
      if (u.speaker != Speaker::kPar) continue;
      const int b = static_cast<int>(std::lround(u.start_s * c.sample_rate_hz));
      const int e = static_cast<int>(std::lround(u.end_s * c.sample_rate_hz));
      const double p = goertzel_relative_power(audio.samples, b, e,
                                               c.marker_freq_hz,
                                               c.sample_rate_hz);
      (u.marked ? marked_power : clean_power).push_back(p);
    }
  }
  REQUIRE(!marked_power.empty());
  REQUIRE(!clean_power.empty());
  double marked_mean = 0.0, clean_mean = 0.0;
  for (double p : marked_power) marked_mean += p;
  for (double p : clean_power) clean_mean += p;
  marked_mean /= marked_power.size();
  clean_mean /= clean_power.size();
  // At 5 dB SNR the marker bin dominates its share of broadband noise by
  // a wide margin; the factor 10 leaves room for AM sidebands and gain.
  CHECK(marked_mean > 10.0 * clean_mean);

  // A global energy statistic must NOT separate the classes: markers are
  // calibrated against each utterance's own noise power.
  double marked_rms = 0.0, clean_rms = 0.0;
  for (std::size_t i = 0; i < corpus.info.size(); ++i) {
    const auto& info = corpus.info[i];
    AudioBuffer audio = load_wav(dir.str(corpus.manifest.entries[i].path));
    double acc = 0.0;
    for (float v : audio.samples) acc += static_cast<double>(v) * v;
    acc = std::sqrt(acc / audio.samples.size());
    (info.label == 1 ? marked_rms : clean_rms) += acc;
  }
  // Class RMS means stay within a factor 2 of each other.
  CHECK(marked_rms < 2.0 * clean_rms);
  CHECK(clean_rms < 2.0 * marked_rms);
}

TEST_CASE("marker truth file matches the in-memory info") {
  TempDir dir("hgs_syn_truth");
  SynConfig c = hgs_test::tiny_syn_config(3, 9);
  SynCorpus corpus = generate_corpus(c, dir.str());

  std::ifstream in(dir.str("markers.tsv"));
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "id\tlabel\tutt\tsession\tspeaker\tmarked\tstart_s\tend_s");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
  }
  int expected = 0;
  for (const auto& info : corpus.info) {
    expected += static_cast<int>(info.utts.size());
  }
  CHECK(rows == expected);
}

TEST_CASE("config validation rejects out-of-range fields") {
  TempDir dir("hgs_syn_bad");
  SynConfig c = hgs_test::tiny_syn_config(4, 1);
  SUBCASE("sparsity above one") {
    c.marker_sparsity = 1.5;
    CHECK_THROWS_AS(generate_corpus(c, dir.str()), InvalidConfigError);
  }
  SUBCASE("marker above Nyquist") {
    c.marker_freq_hz = 500.0;
    c.sample_rate_hz = 900;  // 2 * 500 Hz > 900 Hz
    CHECK_THROWS_AS(generate_corpus(c, dir.str()), InvalidConfigError);
  }
  SUBCASE("empty corpus") {
    c.n_samples = 0;
    CHECK_THROWS_AS(generate_corpus(c, dir.str()), InvalidConfigError);
  }
  SUBCASE("inverted duration bounds") {
    c.utt_s_min = 1.0;
    c.utt_s_max = 0.5;
    CHECK_THROWS_AS(generate_corpus(c, dir.str()), InvalidConfigError);
  }
}
