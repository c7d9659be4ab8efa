// core/include/hgs/train.hpp

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

#ifndef HGS_TRAIN_HPP_
#define HGS_TRAIN_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hgs/adam.hpp"
#include "hgs/augment.hpp"
#include "hgs/dataset.hpp"
#include "hgs/ema.hpp"
#include "hgs/kvconfig.hpp"
#include "hgs/model.hpp"

namespace hgs {

/// Everything a training run needs besides the data. Loss weights follow
/// total = alpha * L_session + beta * L_clip + gamma * L_frame; the enable
/// flags skip a path entirely, which is equivalent to zeroing its weight.
struct TrainConfig {
  ModelDims dims;
  ClipPartitionConfig clips;
  ViewPolicy views;

  double alpha = 1.0;
  double beta = 0.3;
  double gamma = 0.3;
  bool enable_session_pl = true;
  bool enable_clip = true;
  bool enable_frame = true;

  double tau = 0.9;
  int warmup_steps = 200;   // k0
  int refresh_every = 100;  // k
  bool retain_below_threshold = false;

  double ema_momentum = 0.999;
  double lr = 2e-6;
  double weight_decay = 1e-8;
  int batch_labeled = 2;
  int batch_unlabeled = 2;
  int grad_accum = 4;
  int max_steps = 400;
  int eval_every = 100;
  std::string eval_branch = "teacher";  // or "student"
  std::uint64_t seed = 1;

  // Split selection, consumed by the command layer so a saved
  // config.resolved reproduces the whole run. cv_folds < 2 trains and
  // evaluates on the full manifest; split_seed 0 falls back to seed.
  double label_fraction = 1.0;
  int cv_folds = 3;
  int cv_fold = 0;
  std::uint64_t split_seed = 0;

  double effective_beta() const { return enable_clip ? beta : 0.0; }
  double effective_gamma() const { return enable_frame ? gamma : 0.0; }
  void validate() const;
};

void train_config_to_kv(const TrainConfig& config, KvConfig* kv);
TrainConfig train_config_from_kv(const KvConfig& kv);

/// Pure schedule predicate: refreshes fire at steps {k0 + j*k, j >= 0}.
inline bool is_refresh_step(int step, int warmup_steps, int refresh_every) {
  return step >= warmup_steps && (step - warmup_steps) % refresh_every == 0;
}

/// One micro-batch sample prepared for graph building. Pointers reference
/// caller-owned storage and must outlive the tape build.
struct ClipInput {
  const std::vector<float>* wave = nullptr;  // augmented waveform, or null
  const Mat<float>* feats = nullptr;         // precomputed features, or null
  std::vector<unsigned char> mask;           // student row mask; empty = none
  int target = -1;                           // clip CE target, -1 = none
};

struct SampleInput {
  std::vector<ClipInput> clips;
  std::vector<int> clip_sessions;
  int session_target = -1;                 // -1 = no session CE
  const Mat<float>* teacher_embed = nullptr;  // frame MSE target, or null
};

/// Term counts over the whole global step, shared by all its micro-batches
/// so accumulated gradients match a single large batch exactly.
struct LossNormalizers {
  int n_session = 0;
  int n_clip = 0;
  int n_frame = 0;
};

struct MicroLoss {
  int total = -1;  // weighted-total node, or -1 when the batch had no terms
  double session_sum = 0.0;  // raw per-part sums before normalization
  double clip_sum = 0.0;
  double frame_sum = 0.0;
};

/// Builds the student loss graph for one micro-batch. `vars` must be bound
/// to student parameters on `tape`. Templated so the finite-difference
/// gradient oracle can run the identical code path in double.
template <typename T>
MicroLoss build_microbatch_loss(Tape<T>& tape, const ModelVars& vars,
                                const std::vector<SampleInput>& samples,
                                const TrainConfig& config,
                                const LossNormalizers& norms) {
  const double w_sess =
      norms.n_session > 0 ? config.alpha / norms.n_session : 0.0;
  const double w_clip =
      norms.n_clip > 0 ? config.effective_beta() / norms.n_clip : 0.0;
  const double w_frame =
      norms.n_frame > 0 ? config.effective_gamma() / norms.n_frame : 0.0;
  std::vector<int> terms;
  std::vector<T> weights;
  MicroLoss out;
  for (const auto& s : samples) {
    std::vector<int> pooled;
    const bool want_session =
        s.session_target >= 0 || s.teacher_embed != nullptr;
    bool any_clip_target = false;
    for (const auto& c : s.clips) any_clip_target |= c.target >= 0;
    if (!want_session && !any_clip_target) continue;
    for (const auto& c : s.clips) {
      int node;
      if (c.feats != nullptr) {
        node = tape.constant(c.feats->template cast<T>());
      } else {
        node = encode_graph(tape, *c.wave, vars.encoder,
                            config.dims.encoder);
      }
      if (!c.mask.empty()) node = tape.zero_rows(node, c.mask);
      pooled.push_back(tape.mean_pool_rows(node, config.dims.pool_kernel));
    }
    if (want_session) {
      const SessionGraph g =
          session_graph(tape, pooled, s.clip_sessions, vars, config.dims);
      if (s.session_target >= 0 && w_sess != 0.0) {
        terms.push_back(tape.ce_logits(g.session_logits, s.session_target));
        weights.push_back(static_cast<T>(w_sess));
        out.session_sum += static_cast<double>(tape.val(terms.back())(0, 0));
      }
      if (s.teacher_embed != nullptr && w_frame != 0.0) {
        const int target = tape.constant(s.teacher_embed->template cast<T>());
        terms.push_back(tape.mse_mean(g.embed_audio, target));
        weights.push_back(static_cast<T>(w_frame));
        out.frame_sum += static_cast<double>(tape.val(terms.back())(0, 0));
      }
    }
    if (any_clip_target && w_clip != 0.0) {
      for (std::size_t ci = 0; ci < s.clips.size(); ++ci) {
        if (s.clips[ci].target < 0) continue;
        const int logits = clip_graph(tape, pooled[ci], vars, config.dims);
        terms.push_back(tape.ce_logits(logits, s.clips[ci].target));
        weights.push_back(static_cast<T>(w_clip));
        out.clip_sum += static_cast<double>(tape.val(terms.back())(0, 0));
      }
    }
  }
  if (!terms.empty()) out.total = tape.weighted_sum(terms, weights);
  return out;
}

struct StepMetrics {
  int step = 0;
  double l_session = 0.0;
  double l_clip = 0.0;
  double l_frame = 0.0;
  double total = 0.0;
  int n_active_samples = 0;
  int n_active_clips = 0;
  double pl_accuracy = std::numeric_limits<double>::quiet_NaN();
  double eval_macro_f1 = std::numeric_limits<double>::quiet_NaN();
  bool refreshed = false;
  bool evaluated = false;
};

/// Re-scores every pseudo-label record with the teacher on clean identity
/// views: session logits per unlabeled sample, clip logits per training
/// clip. Records meeting the threshold become active with the argmax label.
void refresh_pseudo_labels(const ModelParams<float>& teacher,
                           const TrainingSet& set, const TrainConfig& config,
                           int step, PseudoLabelStore* store);

/// Clean-view pooled features for one sample under the given parameters.
std::vector<FeatureSequence> pooled_clips(const ModelParams<float>& params,
                                          const TrainSample& sample,
                                          const TrainConfig& config);

/// Macro F1 of argmax session predictions over the labeled samples of
/// `set` under `params`.
double evaluate_macro_f1(const ModelParams<float>& params,
                         const TrainingSet& set, const TrainConfig& config);

/// Owns both branches, the optimizer, and the pseudo-label store; advances
/// one global step per call. The caller owns data materialization and all
/// file output.
class Trainer {
 public:
  Trainer(const TrainingSet* train_set, const TrainingSet* eval_set,
          const TrainConfig& config);

  StepMetrics run_step();
  int step() const { return step_; }
  const TrainConfig& config() const { return config_; }
  const ModelParams<float>& teacher() const { return teacher_; }
  const ModelParams<float>& student() const { return student_; }
  const PseudoLabelStore& store() const { return store_; }
  /// Accumulated gradients of the most recent step, captured before the
  /// optimizer update.
  const ModelParams<float>& last_grads() const { return last_grads_; }

 private:
  struct Draw {
    int sample_index = 0;  // into set->samples
    bool labeled = false;
  };
  std::vector<Draw> draw_batch(int step) const;
  bool pl_enabled() const;

  const TrainingSet* set_;
  const TrainingSet* eval_set_;
  TrainConfig config_;
  ModelParams<float> teacher_;
  ModelParams<float> student_;
  ModelParams<float> grads_;
  ModelParams<float> last_grads_;
  AdamState<float> adam_;
  PseudoLabelStore store_;
  Rng root_;
  int step_ = 0;
};

struct TrainResult {
  double final_macro_f1 = std::numeric_limits<double>::quiet_NaN();
  std::vector<StepMetrics> history;
};

/// Full run: trains, logs `metrics.csv`, `plabel_curve.csv`, and
/// `config.resolved` under run_dir, and writes a checkpoint per evaluation
/// plus `checkpoint_final.hgc1`. Empty run_dir skips all file output.
TrainResult run_training(const TrainingSet& train_set,
                         const TrainingSet& eval_set,
                         const TrainConfig& config,
                         const std::string& run_dir);

}  // namespace hgs

#endif  // HGS_TRAIN_HPP_
