// tests/test_helpers.hpp

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

#ifndef HGS_TESTS_TEST_HELPERS_HPP_
#define HGS_TESTS_TEST_HELPERS_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "hgs/model.hpp"
#include "hgs/syndata.hpp"
#include "hgs/train.hpp"

namespace hgs_test {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int i = 0; i < 64; ++i) {
      std::filesystem::path p =
          base / (tag + "_" + std::to_string(rd() % 1000000));
      std::error_code ec;
      if (std::filesystem::create_directory(p, ec)) {
        path_ = p;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir for " + tag);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& rel = "") const {
    return rel.empty() ? path_.string() : (path_ / rel).string();
  }

 private:
  std::filesystem::path path_;
};

// Corpus small enough for per-test training runs at 1 kHz.
inline hgs::SynConfig tiny_syn_config(int n_samples, std::uint64_t seed) {
  hgs::SynConfig c;
  c.n_samples = n_samples;
  c.sessions_min = 1;
  c.sessions_max = 2;
  c.utts_min = 2;
  c.utts_max = 2;
  c.utt_s_min = 0.25;
  c.utt_s_max = 0.4;
  c.sample_rate_hz = 1000;
  c.marker_freq_hz = 200.0;  // below the 500 Hz Nyquist at 1 kHz
  c.seed = seed;
  return c;
}

// Model small enough for per-test gradient work.
inline hgs::ModelDims tiny_dims() {
  hgs::ModelDims d;
  d.d = 8;
  d.num_classes = 2;
  d.n_heads = 2;
  d.n_blocks = 1;
  d.lstm_hidden = 4;
  d.max_positions = 64;
  d.pool_kernel = 2;
  d.encoder.kind = hgs::EncoderKind::kToyConv;
  d.encoder.d = 8;
  d.encoder.downsample = 8;
  d.encoder.channels = 4;
  d.encoder.trainable = true;
  return d;
}

inline hgs::TrainConfig tiny_train_config(std::uint64_t seed) {
  hgs::TrainConfig c;
  c.dims = tiny_dims();
  c.batch_labeled = 1;
  c.batch_unlabeled = 1;
  c.grad_accum = 2;
  c.max_steps = 6;
  c.eval_every = 3;
  c.warmup_steps = 2;
  c.refresh_every = 2;
  c.seed = seed;
  c.cv_folds = 0;
  return c;
}

}  // namespace hgs_test

#endif  // HGS_TESTS_TEST_HELPERS_HPP_
