// core/src/train.cpp

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

#include "hgs/train.hpp"

#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hgs/checkpoint.hpp"
#include "hgs/metrics.hpp"

namespace hgs {

void TrainConfig::validate() const {
  dims.validate();
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0) ||
      !std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw InvalidConfigError("loss weights must be finite and >= 0");
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    throw InvalidConfigError("tau must lie in (0, 1)");
  }
  if (warmup_steps < 1 || refresh_every < 1) {
    throw InvalidConfigError("warmup_steps and refresh_every must be >= 1");
  }
  if (!(ema_momentum >= 0.0 && ema_momentum < 1.0)) {
    throw InvalidConfigError("ema_momentum must lie in [0, 1)");
  }
  if (!std::isfinite(lr) || !std::isfinite(weight_decay)) {
    throw InvalidConfigError("lr and weight_decay must be finite");
  }
  if (batch_labeled < 0 || batch_unlabeled < 0 ||
      batch_labeled + batch_unlabeled < 1) {
    throw InvalidConfigError("batch sizes must cover at least one sample");
  }
  if (grad_accum < 1) throw InvalidConfigError("grad_accum must be >= 1");
  if (max_steps < 1) throw InvalidConfigError("max_steps must be >= 1");
  if (eval_every < 1) throw InvalidConfigError("eval_every must be >= 1");
  if (eval_branch != "teacher" && eval_branch != "student") {
    throw InvalidConfigError("eval_branch must be teacher or student");
  }
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) {
    throw InvalidConfigError("label_fraction must lie in (0, 1]");
  }
  if (cv_folds < 0) throw InvalidConfigError("cv_folds must be >= 0");
  if (cv_folds >= 2 && (cv_fold < 0 || cv_fold >= cv_folds)) {
    throw InvalidConfigError("cv_fold must lie in [0, cv_folds)");
  }
}

void train_config_to_kv(const TrainConfig& c, KvConfig* kv) {
  kv->set_double("alpha", c.alpha);
  kv->set_double("beta", c.beta);
  kv->set_double("gamma", c.gamma);
  kv->set_bool("enable_session_pl", c.enable_session_pl);
  kv->set_bool("enable_clip", c.enable_clip);
  kv->set_bool("enable_frame", c.enable_frame);
  kv->set_double("tau", c.tau);
  kv->set_int("warmup_steps", c.warmup_steps);
  kv->set_int("refresh_every", c.refresh_every);
  kv->set_bool("retain_below_threshold", c.retain_below_threshold);
  kv->set_double("ema_momentum", c.ema_momentum);
  kv->set_double("lr", c.lr);
  kv->set_double("weight_decay", c.weight_decay);
  kv->set_int("batch_labeled", c.batch_labeled);
  kv->set_int("batch_unlabeled", c.batch_unlabeled);
  kv->set_int("grad_accum", c.grad_accum);
  kv->set_int("max_steps", c.max_steps);
  kv->set_int("eval_every", c.eval_every);
  kv->set_string("eval_branch", c.eval_branch);
  kv->set_u64("seed", c.seed);
  kv->set_double("label_fraction", c.label_fraction);
  kv->set_int("cv_folds", c.cv_folds);
  kv->set_int("cv_fold", c.cv_fold);
  kv->set_u64("split_seed", c.split_seed);

  kv->set_int("dims.d", c.dims.d);
  kv->set_int("dims.num_classes", c.dims.num_classes);
  kv->set_int("dims.n_heads", c.dims.n_heads);
  kv->set_int("dims.n_blocks", c.dims.n_blocks);
  kv->set_int("dims.d_ff", c.dims.d_ff);
  kv->set_int("dims.lstm_hidden", c.dims.lstm_hidden);
  kv->set_int("dims.max_positions", c.dims.max_positions);
  kv->set_int("dims.pool_kernel", c.dims.pool_kernel);
  kv->set_string("encoder.kind", c.dims.encoder.kind == EncoderKind::kToyConv
                                     ? "toy_conv"
                                     : "precomputed");
  kv->set_int("encoder.downsample", c.dims.encoder.downsample);
  kv->set_int("encoder.channels", c.dims.encoder.channels);
  kv->set_bool("encoder.trainable", c.dims.encoder.trainable);

  kv->set_string("clips.strategy",
                 c.clips.strategy == ClipStrategy::kUtterance ? "utterance"
                                                              : "fixed_window");
  kv->set_string("clips.speakers",
                 c.clips.speakers == SpeakerFilter::kParOnly ? "par_only"
                                                             : "both");
  kv->set_double("clips.window_s", c.clips.window_s);
  kv->set_double("clips.hop_s", c.clips.hop_s);

  kv->set_bool("views.enable_time_mask", c.views.enable_time_mask);
  kv->set_int("views.mask_count", c.views.mask_count);
  kv->set_int("views.mask_max_width", c.views.mask_max_width);
  kv->set_bool("views.enable_speed", c.views.enable_speed);
  kv->set_double("views.speed_min", c.views.speed_min);
  kv->set_double("views.speed_max", c.views.speed_max);
  kv->set_bool("views.enable_pitch", c.views.enable_pitch);
  kv->set_double("views.pitch_semitones_max", c.views.pitch_semitones_max);
}

TrainConfig train_config_from_kv(const KvConfig& kv) {
  TrainConfig c;
  c.alpha = kv.get_double("alpha", c.alpha);
  c.beta = kv.get_double("beta", c.beta);
  c.gamma = kv.get_double("gamma", c.gamma);
  c.enable_session_pl = kv.get_bool("enable_session_pl", c.enable_session_pl);
  c.enable_clip = kv.get_bool("enable_clip", c.enable_clip);
  c.enable_frame = kv.get_bool("enable_frame", c.enable_frame);
  c.tau = kv.get_double("tau", c.tau);
  c.warmup_steps = kv.get_int("warmup_steps", c.warmup_steps);
  c.refresh_every = kv.get_int("refresh_every", c.refresh_every);
  c.retain_below_threshold =
      kv.get_bool("retain_below_threshold", c.retain_below_threshold);
  c.ema_momentum = kv.get_double("ema_momentum", c.ema_momentum);
  c.lr = kv.get_double("lr", c.lr);
  c.weight_decay = kv.get_double("weight_decay", c.weight_decay);
  c.batch_labeled = kv.get_int("batch_labeled", c.batch_labeled);
  c.batch_unlabeled = kv.get_int("batch_unlabeled", c.batch_unlabeled);
  c.grad_accum = kv.get_int("grad_accum", c.grad_accum);
  c.max_steps = kv.get_int("max_steps", c.max_steps);
  c.eval_every = kv.get_int("eval_every", c.eval_every);
  c.eval_branch = kv.get_string("eval_branch", c.eval_branch);
  c.seed = kv.get_u64("seed", c.seed);
  c.label_fraction = kv.get_double("label_fraction", c.label_fraction);
  c.cv_folds = kv.get_int("cv_folds", c.cv_folds);
  c.cv_fold = kv.get_int("cv_fold", c.cv_fold);
  c.split_seed = kv.get_u64("split_seed", c.split_seed);

  c.dims.d = kv.get_int("dims.d", c.dims.d);
  c.dims.num_classes = kv.get_int("dims.num_classes", c.dims.num_classes);
  c.dims.n_heads = kv.get_int("dims.n_heads", c.dims.n_heads);
  c.dims.n_blocks = kv.get_int("dims.n_blocks", c.dims.n_blocks);
  c.dims.d_ff = kv.get_int("dims.d_ff", c.dims.d_ff);
  c.dims.lstm_hidden = kv.get_int("dims.lstm_hidden", c.dims.lstm_hidden);
  c.dims.max_positions =
      kv.get_int("dims.max_positions", c.dims.max_positions);
  c.dims.pool_kernel = kv.get_int("dims.pool_kernel", c.dims.pool_kernel);
  const std::string kind = kv.get_string("encoder.kind", "toy_conv");
  if (kind == "toy_conv") {
    c.dims.encoder.kind = EncoderKind::kToyConv;
  } else if (kind == "precomputed") {
    c.dims.encoder.kind = EncoderKind::kPrecomputed;
  } else {
    throw InvalidConfigError("encoder.kind must be toy_conv or precomputed");
  }
  c.dims.encoder.d = c.dims.d;
  c.dims.encoder.downsample =
      kv.get_int("encoder.downsample", c.dims.encoder.downsample);
  c.dims.encoder.channels =
      kv.get_int("encoder.channels", c.dims.encoder.channels);
  c.dims.encoder.trainable =
      kv.get_bool("encoder.trainable", c.dims.encoder.trainable);

  const std::string strat = kv.get_string("clips.strategy", "utterance");
  if (strat == "utterance") {
    c.clips.strategy = ClipStrategy::kUtterance;
  } else if (strat == "fixed_window") {
    c.clips.strategy = ClipStrategy::kFixedWindow;
  } else {
    throw InvalidConfigError(
        "clips.strategy must be utterance or fixed_window");
  }
  const std::string spk = kv.get_string("clips.speakers", "par_only");
  if (spk == "par_only") {
    c.clips.speakers = SpeakerFilter::kParOnly;
  } else if (spk == "both") {
    c.clips.speakers = SpeakerFilter::kBoth;
  } else {
    throw InvalidConfigError("clips.speakers must be par_only or both");
  }
  c.clips.window_s = kv.get_double("clips.window_s", c.clips.window_s);
  c.clips.hop_s = kv.get_double("clips.hop_s", c.clips.hop_s);

  c.views.enable_time_mask =
      kv.get_bool("views.enable_time_mask", c.views.enable_time_mask);
  c.views.mask_count = kv.get_int("views.mask_count", c.views.mask_count);
  c.views.mask_max_width =
      kv.get_int("views.mask_max_width", c.views.mask_max_width);
  c.views.enable_speed = kv.get_bool("views.enable_speed", c.views.enable_speed);
  c.views.speed_min = kv.get_double("views.speed_min", c.views.speed_min);
  c.views.speed_max = kv.get_double("views.speed_max", c.views.speed_max);
  c.views.enable_pitch = kv.get_bool("views.enable_pitch", c.views.enable_pitch);
  c.views.pitch_semitones_max =
      kv.get_double("views.pitch_semitones_max", c.views.pitch_semitones_max);
  return c;
}

std::vector<FeatureSequence> pooled_clips(const ModelParams<float>& params,
                                          const TrainSample& sample,
                                          const TrainConfig& config) {
  std::vector<FeatureSequence> pooled;
  for (std::size_t ci = 0; ci < sample.clips.size(); ++ci) {
    FeatureSequence f;
    if (sample.feature_backed) {
      f = sample.clip_feats[ci];
      if (f.d() != config.dims.d) {
        throw DimensionMismatchError("sample " + sample.id + " features d=" +
                                     std::to_string(f.d()) +
                                     " but model d=" +
                                     std::to_string(config.dims.d));
      }
    } else {
      f = encode_wave(sample.clips[ci].samples, params.encoder,
                      config.dims.encoder);
    }
    pooled.push_back(temporal_pool(f, config.dims.pool_kernel));
  }
  return pooled;
}

void refresh_pseudo_labels(const ModelParams<float>& teacher,
                           const TrainingSet& set, const TrainConfig& config,
                           int step, PseudoLabelStore* store) {
  for (const TrainSample& sample : set.samples) {
    const bool want_session =
        sample.unlabeled_index >= 0 && config.enable_session_pl;
    const bool want_clips = config.enable_clip;
    if (!want_session && !want_clips) continue;
    const std::vector<FeatureSequence> pooled =
        pooled_clips(teacher, sample, config);
    if (want_session) {
      const ForwardTrace trace =
          session_forward(pooled, sample.clip_sessions, teacher);
      const LabelConfidence lc = softmax_confidence(trace.session_logits);
      PseudoSampleRecord& rec = store->session[sample.unlabeled_index];
      if (lc.confidence >= config.tau) {
        rec.label = lc.label;
        rec.active = true;
      } else if (config.retain_below_threshold && rec.active) {
        // keep the previous label and active flag
      } else {
        rec.label = lc.label;
        rec.active = false;
      }
      rec.confidence = static_cast<float>(lc.confidence);
      rec.last_refresh_step = step;
    }
    if (want_clips) {
      for (std::size_t ci = 0; ci < pooled.size(); ++ci) {
        const LabelConfidence lc =
            softmax_confidence(clip_forward(pooled[ci], teacher));
        PseudoClipRecord& rec =
            store->clips[sample.first_clip_store_index +
                         static_cast<int>(ci)];
        if (lc.confidence >= config.tau) {
          rec.label = lc.label;
          rec.active = true;
        } else if (config.retain_below_threshold && rec.active) {
          // keep the previous label and active flag
        } else {
          rec.label = lc.label;
          rec.active = false;
        }
        rec.confidence = static_cast<float>(lc.confidence);
      }
    }
  }
}

double evaluate_macro_f1(const ModelParams<float>& params,
                         const TrainingSet& set, const TrainConfig& config) {
  std::vector<int> truth;
  std::vector<int> preds;
  for (const TrainSample& sample : set.samples) {
    if (!sample.label.has_value()) continue;
    const std::vector<FeatureSequence> pooled =
        pooled_clips(params, sample, config);
    const ForwardTrace trace =
        session_forward(pooled, sample.clip_sessions, params);
    preds.push_back(softmax_confidence(trace.session_logits).label);
    truth.push_back(*sample.label);
  }
  if (truth.empty()) return std::numeric_limits<double>::quiet_NaN();
  return macro_f1(truth, preds, config.dims.num_classes);
}

Trainer::Trainer(const TrainingSet* train_set, const TrainingSet* eval_set,
                 const TrainConfig& config)
    : set_(train_set),
      eval_set_(eval_set),
      config_(config),
      root_(config.seed) {
  config_.dims.num_classes = set_->num_classes;
  config_.dims.encoder.d = config_.dims.d;
  config_.validate();
  student_ = init_params<float>(config_.seed, config_.dims);
  teacher_ = student_;  // exact copy, the EMA starting point
  grads_ = zero_params<float>(config_.dims);
  last_grads_ = zero_params<float>(config_.dims);
  adam_ = AdamState<float>::init(config_.dims);
  store_ = make_store(*set_);
}

bool Trainer::pl_enabled() const {
  return (config_.enable_session_pl && !set_->unlabeled.empty()) ||
         config_.enable_clip;
}

std::vector<Trainer::Draw> Trainer::draw_batch(int step) const {
  Rng r = root_.fork("batch").fork(static_cast<std::uint64_t>(step));
  std::vector<Draw> draws;
  const int n_lab = static_cast<int>(set_->labeled.size());
  const int n_unl = static_cast<int>(set_->unlabeled.size());
  if (n_lab > 0) {
    for (int i = 0; i < config_.grad_accum * config_.batch_labeled; ++i) {
      draws.push_back(
          {set_->labeled[r.uniform_int(0, n_lab - 1)], true});
    }
  }
  if (n_unl > 0) {
    for (int i = 0; i < config_.grad_accum * config_.batch_unlabeled; ++i) {
      draws.push_back(
          {set_->unlabeled[r.uniform_int(0, n_unl - 1)], false});
    }
  }
  return draws;
}

StepMetrics Trainer::run_step() {
  ++step_;
  StepMetrics metrics;
  metrics.step = step_;

  if (pl_enabled() &&
      is_refresh_step(step_, config_.warmup_steps, config_.refresh_every)) {
    refresh_pseudo_labels(teacher_, *set_, config_, step_, &store_);
    metrics.refreshed = true;
    metrics.pl_accuracy =
        pl_accuracy(store_, set_->sealed_truth).session_accuracy;
  }
  metrics.n_active_samples = store_.n_active_samples();
  metrics.n_active_clips = store_.n_active_clips();

  const std::vector<Draw> draws = draw_batch(step_);
  const int n_lab_slots =
      set_->labeled.empty() ? 0 : config_.grad_accum * config_.batch_labeled;

  // Term counts over the whole step; every micro-batch divides by these so
  // accumulation matches one large batch.
  LossNormalizers norms;
  const bool frame_on = config_.effective_gamma() > 0.0;
  const bool clip_on = config_.effective_beta() > 0.0;
  for (const Draw& d : draws) {
    const TrainSample& s = set_->samples[d.sample_index];
    if (d.labeled) {
      norms.n_session += 1;
    } else if (config_.enable_session_pl &&
               store_.session[s.unlabeled_index].active) {
      norms.n_session += 1;
    }
    if (frame_on) norms.n_frame += 1;
    if (clip_on) {
      for (std::size_t ci = 0; ci < s.clips.size(); ++ci) {
        if (store_.clips[s.first_clip_store_index + static_cast<int>(ci)]
                .active) {
          norms.n_clip += 1;
        }
      }
    }
  }

  zero_grads(grads_);
  double session_sum = 0.0, clip_sum = 0.0, frame_sum = 0.0;
  const int per_micro_lab = set_->labeled.empty() ? 0 : config_.batch_labeled;
  const int per_micro_unl =
      set_->unlabeled.empty() ? 0 : config_.batch_unlabeled;
  for (int b = 0; b < config_.grad_accum; ++b) {
    // Micro-batch b takes its share of the flat draw list; slot ids stay
    // global so per-slot augmentation streams do not depend on grouping.
    std::vector<int> slots;
    for (int i = 0; i < per_micro_lab; ++i) {
      slots.push_back(b * per_micro_lab + i);
    }
    for (int i = 0; i < per_micro_unl; ++i) {
      slots.push_back(n_lab_slots + b * per_micro_unl + i);
    }
    if (slots.empty()) continue;

    std::deque<std::vector<std::vector<float>>> wave_store;
    std::deque<Mat<float>> embed_store;
    std::vector<SampleInput> inputs;
    for (int slot : slots) {
      const Draw& d = draws[slot];
      const TrainSample& s = set_->samples[d.sample_index];
      Rng slot_rng = root_.fork("aug")
                         .fork(static_cast<std::uint64_t>(step_))
                         .fork(static_cast<std::uint64_t>(slot));
      SampleInput input;
      input.clip_sessions = s.clip_sessions;
      if (d.labeled) {
        input.session_target = *s.label;
      } else if (config_.enable_session_pl &&
                 store_.session[s.unlabeled_index].active) {
        input.session_target = store_.session[s.unlabeled_index].label;
      }

      wave_store.emplace_back();
      std::vector<std::vector<float>>& waves = wave_store.back();
      for (std::size_t ci = 0; ci < s.clips.size(); ++ci) {
        // One stream per clip; augment_waveform forks it further, so the
        // mask draw below cannot shift when speed or pitch is toggled.
        Rng clip_rng = slot_rng.fork(static_cast<std::uint64_t>(ci));
        ClipInput clip;
        int t_frames = 0;
        if (s.feature_backed) {
          clip.feats = &s.clip_feats[ci].values;
          t_frames = s.clip_feats[ci].t();
        } else {
          waves.push_back(augment_waveform(s.clips[ci].samples,
                                           config_.views, &clip_rng));
          t_frames = encoder_frames(waves.back().size(),
                                    config_.dims.encoder);
        }
        if (config_.views.enable_time_mask) {
          const int width =
              std::min(config_.views.mask_max_width, t_frames);
          clip.mask = draw_time_mask(t_frames, config_.views.mask_count,
                                     width, &clip_rng);
        }
        if (clip_on &&
            store_.clips[s.first_clip_store_index + static_cast<int>(ci)]
                .active) {
          clip.target =
              store_.clips[s.first_clip_store_index + static_cast<int>(ci)]
                  .label;
        }
        input.clips.push_back(std::move(clip));
      }
      if (!s.feature_backed) {
        for (std::size_t ci = 0; ci < s.clips.size(); ++ci) {
          input.clips[ci].wave = &waves[ci];
        }
      }
      if (frame_on) {
        // Teacher identity view over the same augmented waveforms.
        std::vector<FeatureSequence> pooled;
        for (std::size_t ci = 0; ci < s.clips.size(); ++ci) {
          FeatureSequence f;
          if (s.feature_backed) {
            f = s.clip_feats[ci];
          } else {
            f = encode_wave(waves[ci], teacher_.encoder,
                            config_.dims.encoder);
          }
          pooled.push_back(temporal_pool(f, config_.dims.pool_kernel));
        }
        const ForwardTrace trace =
            session_forward(pooled, s.clip_sessions, teacher_);
        embed_store.push_back(trace.embed_audio);
        input.teacher_embed = &embed_store.back();
      }
      inputs.push_back(std::move(input));
    }

    Tape<float> tape;
    const ModelVars vars = bind_params(tape, student_, &grads_,
                                       config_.dims.encoder.trainable);
    const MicroLoss ml =
        build_microbatch_loss(tape, vars, inputs, config_, norms);
    session_sum += ml.session_sum;
    clip_sum += ml.clip_sum;
    frame_sum += ml.frame_sum;
    if (ml.total >= 0) {
      const float value = tape.val(ml.total)(0, 0);
      if (!std::isfinite(value)) {
        throw NonFiniteLossError("non-finite micro-batch loss at step " +
                                 std::to_string(step_));
      }
      tape.backward(ml.total);
    }
  }

  metrics.l_session =
      norms.n_session > 0 ? session_sum / norms.n_session : 0.0;
  metrics.l_clip = norms.n_clip > 0 ? clip_sum / norms.n_clip : 0.0;
  metrics.l_frame = norms.n_frame > 0 ? frame_sum / norms.n_frame : 0.0;
  metrics.total = config_.alpha * metrics.l_session +
                  config_.effective_beta() * metrics.l_clip +
                  config_.effective_gamma() * metrics.l_frame;
  if (!std::isfinite(metrics.total)) {
    throw NonFiniteLossError("non-finite total loss at step " +
                             std::to_string(step_));
  }

  last_grads_ = grads_;
  AdamConfig adam_cfg;
  adam_cfg.lr = config_.lr;
  adam_cfg.weight_decay = config_.weight_decay;
  adam_step(student_, grads_, adam_, adam_cfg,
            config_.dims.encoder.trainable);
  zero_grads(grads_);
  ema_update(teacher_, student_, config_.ema_momentum);

  if (eval_set_ != nullptr &&
      (step_ % config_.eval_every == 0 || step_ == config_.max_steps)) {
    const ModelParams<float>& branch =
        config_.eval_branch == "student" ? student_ : teacher_;
    metrics.eval_macro_f1 = evaluate_macro_f1(branch, *eval_set_, config_);
    metrics.evaluated = true;
  }
  return metrics;
}

namespace {

std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

TrainResult run_training(const TrainingSet& train_set,
                         const TrainingSet& eval_set,
                         const TrainConfig& config,
                         const std::string& run_dir) {
  Trainer trainer(&train_set, &eval_set, config);
  std::ofstream metrics_out;
  std::ofstream curve_out;
  const bool writing = !run_dir.empty();
  if (writing) {
    std::filesystem::create_directories(run_dir);
    KvConfig kv;
    train_config_to_kv(trainer.config(), &kv);
    kv.save(run_dir + "/config.resolved");
    metrics_out.open(run_dir + "/metrics.csv", std::ios::trunc);
    curve_out.open(run_dir + "/plabel_curve.csv", std::ios::trunc);
    if (!metrics_out || !curve_out) {
      throw IoError("cannot open run files under " + run_dir);
    }
    metrics_out << "step,L_session,L_clip,L_frame,total,n_active_samples,"
                   "n_active_clips,pl_accuracy,eval_macro_f1\n";
    curve_out << "refresh_step,pl_accuracy\n";
  }

  TrainResult result;
  for (int s = 0; s < config.max_steps; ++s) {
    const StepMetrics m = trainer.run_step();
    if (writing) {
      metrics_out << m.step << ',' << csv_real(m.l_session) << ','
                  << csv_real(m.l_clip) << ',' << csv_real(m.l_frame) << ','
                  << csv_real(m.total) << ',' << m.n_active_samples << ','
                  << m.n_active_clips << ',' << csv_real(m.pl_accuracy)
                  << ',' << csv_real(m.eval_macro_f1) << '\n';
      // Only scoreable refreshes: keeps the file re-derivable from
      // metrics.csv, where a nan cannot be told apart from "no refresh".
      if (m.refreshed && !std::isnan(m.pl_accuracy)) {
        curve_out << m.step << ',' << csv_real(m.pl_accuracy) << '\n';
      }
      if (m.evaluated) {
        Checkpoint ckpt{trainer.config().dims, trainer.teacher(),
                        trainer.student(), trainer.config().seed,
                        static_cast<std::uint64_t>(m.step)};
        save_checkpoint(
            run_dir + "/checkpoint_step" + std::to_string(m.step) + ".hgc1",
            ckpt);
      }
    }
    if (m.evaluated) result.final_macro_f1 = m.eval_macro_f1;
    result.history.push_back(m);
  }
  if (writing) {
    Checkpoint ckpt{trainer.config().dims, trainer.teacher(),
                    trainer.student(), trainer.config().seed,
                    static_cast<std::uint64_t>(trainer.step())};
    save_checkpoint(run_dir + "/checkpoint_final.hgc1", ckpt);

    const StepMetrics& last = result.history.back();
    double last_pl = std::numeric_limits<double>::quiet_NaN();
    for (auto it = result.history.rbegin(); it != result.history.rend();
         ++it) {
      if (it->refreshed) {
        last_pl = it->pl_accuracy;
        break;
      }
    }
    nlohmann::json summary;
    summary["final_macro_f1"] = result.final_macro_f1;
    summary["final_step"] = last.step;
    summary["n_active_samples"] = last.n_active_samples;
    summary["n_active_clips"] = last.n_active_clips;
    summary["last_pl_accuracy"] = last_pl;
    summary["seed"] = trainer.config().seed;
    std::ofstream summary_out(run_dir + "/summary.json", std::ios::trunc);
    summary_out << summary.dump(2) << '\n';

    metrics_out.flush();
    curve_out.flush();
    if (!metrics_out || !curve_out || !summary_out) {
      throw IoError("failed writing run files under " + run_dir);
    }
  }
  return result;
}

}  // namespace hgs
