// tools/hgs_main.cpp

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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "hgs/checkpoint.hpp"
#include "hgs/dataset.hpp"
#include "hgs/errors.hpp"
#include "hgs/kvconfig.hpp"
#include "hgs/manifest.hpp"
#include "hgs/metrics.hpp"
#include "hgs/model.hpp"
#include "hgs/splits.hpp"
#include "hgs/syndata.hpp"
#include "hgs/train.hpp"
#include "hgs/types.hpp"

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 ok, 1 unexpected, 2 config/usage, 3 I/O, 4 non-finite loss.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const hgs::NonFiniteLossError*>(&e)) return 4;
  if (dynamic_cast<const hgs::MissingFileError*>(&e)) return 3;
  if (dynamic_cast<const hgs::IoError*>(&e)) return 3;
  if (dynamic_cast<const hgs::Error*>(&e)) return 2;
  return 1;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("HGS_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || end == raw || *end != '\0') {
    throw hgs::InvalidConfigError("HGS_SEED is not an unsigned integer: " +
                                  std::string(raw));
  }
  return static_cast<std::uint64_t>(v);
}

// Refuses to reuse a non-empty directory unless forced, then creates it.
void claim_out_dir(const std::string& out, bool force) {
  fs::path p(out);
  std::error_code ec;
  if (fs::exists(p, ec) && fs::is_directory(p, ec) && !fs::is_empty(p, ec) &&
      !force) {
    throw hgs::InvalidConfigError("output directory " + out +
                                  " is not empty; pass --force to reuse it");
  }
  fs::create_directories(p, ec);
  if (ec) throw hgs::IoError("cannot create directory " + out);
}

struct SplitSets {
  hgs::TrainingSet train_set;
  hgs::TrainingSet eval_set;
};

// Materializes the train/test sets a config describes. cv_folds < 2 uses
// the whole manifest for both sides (smoke runs, single-split corpora).
SplitSets make_split_sets(const hgs::Manifest& manifest,
                          const hgs::TrainConfig& cfg) {
  std::uint64_t split_seed = cfg.split_seed != 0 ? cfg.split_seed : cfg.seed;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  if (cfg.cv_folds < 2) {
    for (const auto& e : manifest.entries) train_ids.push_back(e.id);
    test_ids = train_ids;
  } else {
    std::vector<hgs::SplitSpec> folds =
        hgs::kfold_split(manifest, cfg.cv_folds, split_seed, true);
    train_ids = folds[cfg.cv_fold].train_ids();
    test_ids = folds[cfg.cv_fold].test_ids();
  }

  const std::map<std::string, bool>* flag = nullptr;
  hgs::SplitSpec fraction_spec;
  if (cfg.label_fraction < 1.0) {
    std::map<std::string, int> labels;
    for (const auto& e : manifest.entries) {
      if (e.label) labels[e.id] = e.label->class_index;
    }
    fraction_spec = hgs::label_fraction_split(train_ids, labels,
                                              cfg.label_fraction, split_seed);
    flag = &fraction_spec.labeled_flag;
  }

  SplitSets out;
  out.train_set = hgs::build_training_set(manifest, train_ids, flag, cfg.clips);
  out.eval_set =
      hgs::build_training_set(manifest, test_ids, nullptr, cfg.clips);
  return out;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataArgs {
  std::string out;
  int n_samples = 120;
  double positive_fraction = 0.5;
  double marker_sparsity = 0.4;
  double snr_db = 5.0;
  int sample_rate_hz = 2000;
  std::uint64_t seed = 1;
  bool seed_given = false;
  bool force = false;
};

int cmd_gen_data(const GenDataArgs& a) {
  hgs::SynConfig sc;
  sc.n_samples = a.n_samples;
  sc.positive_fraction = a.positive_fraction;
  sc.marker_sparsity = a.marker_sparsity;
  sc.snr_db = a.snr_db;
  sc.sample_rate_hz = a.sample_rate_hz;
  sc.seed = a.seed;
  if (!a.seed_given) {
    if (auto env = seed_from_env()) sc.seed = *env;
  }
  claim_out_dir(a.out, a.force);
  hgs::SynCorpus corpus = hgs::generate_corpus(sc, a.out);

  int positives = 0;
  for (const auto& e : corpus.manifest.entries) {
    if (e.label && e.label->class_index == 1) ++positives;
  }
  int total_utts = 0;
  int marked_utts = 0;
  for (const auto& info : corpus.info) {
    if (info.label != 1) continue;  // markers only occur in the positive class
    for (const auto& u : info.utts) {
      if (u.speaker != hgs::Speaker::kPar) continue;
      ++total_utts;
      if (u.marked) ++marked_utts;
    }
  }
  std::printf("generated %d samples (%d positive, %d control) at %d Hz\n",
              a.n_samples, positives, a.n_samples - positives,
              sc.sample_rate_hz);
  std::printf(
      "marker rate %.3f over %d positive-class participant utterances "
      "(target %.3f)\n",
      total_utts > 0 ? double(marked_utts) / total_utts : 0.0, total_utts,
      sc.marker_sparsity);
  std::printf("wrote %s\n", (fs::path(a.out) / "manifest.tsv").string().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string manifest;
  std::string out;
  std::string config;
  bool force = false;
  std::vector<std::string> ablate;

  std::uint64_t seed = 0;
  double fraction = 0.0;
  int folds = 0;
  int fold = 0;
  std::uint64_t split_seed = 0;
  int steps = 0;
  double lr = 0.0;
  std::string eval_branch;

  bool seed_given = false;
  bool fraction_given = false;
  bool folds_given = false;
  bool fold_given = false;
  bool split_seed_given = false;
  bool steps_given = false;
  bool lr_given = false;
  bool eval_branch_given = false;
};

// Precedence: command-line flag, then config file, then HGS_SEED (seed
// only), then built-in default.
hgs::TrainConfig resolve_train_config(const TrainArgs& a) {
  hgs::TrainConfig cfg;
  bool file_has_seed = false;
  if (!a.config.empty()) {
    hgs::KvConfig kv = hgs::KvConfig::load(a.config);
    cfg = hgs::train_config_from_kv(kv);
    file_has_seed = kv.has("seed");
  }
  if (a.seed_given) {
    cfg.seed = a.seed;
  } else if (!file_has_seed) {
    if (auto env = seed_from_env()) cfg.seed = *env;
  }
  if (a.fraction_given) cfg.label_fraction = a.fraction;
  if (a.folds_given) cfg.cv_folds = a.folds;
  if (a.fold_given) cfg.cv_fold = a.fold;
  if (a.split_seed_given) cfg.split_seed = a.split_seed;
  if (a.steps_given) cfg.max_steps = a.steps;
  if (a.lr_given) cfg.lr = a.lr;
  if (a.eval_branch_given) cfg.eval_branch = a.eval_branch;

  for (const std::string& which : a.ablate) {
    if (which == "frame") {
      cfg.gamma = 0.0;
      cfg.enable_frame = false;
    } else if (which == "clip") {
      cfg.beta = 0.0;
      cfg.enable_clip = false;
    } else if (which == "session_pl") {
      cfg.enable_session_pl = false;
    } else {
      throw hgs::InvalidConfigError(
          "unknown --ablate target " + which +
          " (expected frame, clip, or session_pl)");
    }
  }
  return cfg;
}

int cmd_train(const TrainArgs& a) {
  hgs::TrainConfig cfg = resolve_train_config(a);
  hgs::Manifest manifest = hgs::load_manifest(a.manifest);
  cfg.dims.num_classes = manifest.num_classes;
  cfg.validate();
  claim_out_dir(a.out, a.force);

  SplitSets sets = make_split_sets(manifest, cfg);
  hgs::TrainResult result =
      hgs::run_training(sets.train_set, sets.eval_set, cfg, a.out);
  std::printf("test_macro_f1 %.6f\n", result.final_macro_f1);
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string checkpoint;
  std::string manifest;
  std::string config;
  std::string branch = "teacher";
  int folds = 0;
  int fold = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t seed = 1;
  bool folds_given = false;
};

int cmd_eval(const EvalArgs& a) {
  hgs::Checkpoint ckpt = hgs::load_checkpoint(a.checkpoint);
  hgs::Manifest manifest = hgs::load_manifest(a.manifest);
  if (ckpt.dims.num_classes != manifest.num_classes) {
    throw hgs::DimensionMismatchError(
        "checkpoint expects " + std::to_string(ckpt.dims.num_classes) +
        " classes but the manifest declares " +
        std::to_string(manifest.num_classes));
  }
  if (a.branch != "teacher" && a.branch != "student") {
    throw hgs::InvalidConfigError("--branch must be teacher or student");
  }

  hgs::TrainConfig cfg;
  if (!a.config.empty()) {
    cfg = hgs::train_config_from_kv(hgs::KvConfig::load(a.config));
  }
  cfg.dims = ckpt.dims;  // the checkpoint is authoritative for shapes
  cfg.seed = a.seed;
  cfg.cv_folds = a.folds_given ? a.folds : 0;
  cfg.cv_fold = a.fold;
  cfg.split_seed = a.split_seed;
  cfg.label_fraction = 1.0;

  std::uint64_t split_seed = cfg.split_seed != 0 ? cfg.split_seed : cfg.seed;
  std::vector<std::string> ids;
  if (cfg.cv_folds < 2) {
    for (const auto& e : manifest.entries) ids.push_back(e.id);
  } else {
    ids = hgs::kfold_split(manifest, cfg.cv_folds, split_seed, true)[cfg.cv_fold]
              .test_ids();
  }
  hgs::TrainingSet set =
      hgs::build_training_set(manifest, ids, nullptr, cfg.clips);

  const hgs::ModelParams<float>& params =
      a.branch == "student" ? ckpt.student : ckpt.teacher;
  std::vector<int> y_true;
  std::vector<int> y_pred;
  for (const auto& sample : set.samples) {
    if (!sample.label) continue;
    std::vector<hgs::FeatureSequence> pooled =
        hgs::pooled_clips(params, sample, cfg);
    hgs::ForwardTrace trace =
        hgs::session_forward(pooled, sample.clip_sessions, params);
    y_true.push_back(*sample.label);
    y_pred.push_back(hgs::softmax_confidence(trace.session_logits).label);
  }
  if (y_true.empty()) {
    throw hgs::EmptySelectionError("no labeled samples to evaluate");
  }

  int C = manifest.num_classes;
  std::vector<std::vector<int>> cm = hgs::confusion_matrix(y_true, y_pred, C);
  std::printf("confusion matrix (%s branch, rows true, cols predicted):\n",
              a.branch.c_str());
  std::printf("%8s", "");
  for (int j = 0; j < C; ++j) {
    std::printf(" %8s", ("pred_" + std::to_string(j)).c_str());
  }
  std::printf("\n");
  for (int i = 0; i < C; ++i) {
    std::printf("%8s", ("true_" + std::to_string(i)).c_str());
    for (int j = 0; j < C; ++j) std::printf(" %8d", cm[i][j]);
    std::printf("\n");
  }
  std::printf("macro_f1 %.6f\n", hgs::macro_f1(y_true, y_pred, C));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string manifest;
  std::string out;
  std::string config;
  std::vector<double> fractions = {0.3, 1.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int folds = 3;
  int parallel = 1;
  bool force = false;
};

struct SweepCell {
  std::string method;
  double fraction = 1.0;
  std::uint64_t seed = 1;
  int fold = 0;
  std::string run_dir;
  double macro_f1 = std::numeric_limits<double>::quiet_NaN();
};

std::string cell_dir_name(const SweepCell& c) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s_frac%03d_seed%llu_fold%d",
                c.method.c_str(),
                static_cast<int>(std::lround(c.fraction * 100.0)),
                static_cast<unsigned long long>(c.seed), c.fold);
  return buf;
}

// Renders the method-by-fraction grid of mean(std) macro F1 percentages.
std::string render_grid(const std::vector<SweepCell>& cells,
                        const std::vector<std::string>& methods,
                        const std::vector<double>& fractions) {
  std::ostringstream os;
  os << "macro F1, mean(std) over seeds x folds, percent\n";
  os << std::left << std::setw(12) << "method";
  for (double f : fractions) {
    char head[32];
    std::snprintf(head, sizeof(head), "frac=%.2f", f);
    os << std::setw(16) << head;
  }
  os << "\n";
  for (const std::string& m : methods) {
    os << std::setw(12) << m;
    for (double f : fractions) {
      std::vector<double> values;
      for (const SweepCell& c : cells) {
        if (c.method == m && c.fraction == f && std::isfinite(c.macro_f1)) {
          values.push_back(100.0 * c.macro_f1);
        }
      }
      os << std::setw(16)
         << (values.empty() ? std::string("n/a")
                            : hgs::format_mean_std(hgs::cv_aggregate(values)));
    }
    os << "\n";
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw hgs::IoError("cannot write " + path);
}

int cmd_sweep(const SweepArgs& a) {
  if (a.fractions.empty() || a.seeds.empty()) {
    throw hgs::InvalidConfigError("sweep needs at least one fraction and seed");
  }
  for (double f : a.fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw hgs::InvalidConfigError("sweep fractions must lie in (0, 1]");
    }
  }
  if (a.folds < 1) throw hgs::InvalidConfigError("--folds must be >= 1");
  if (a.parallel < 1) throw hgs::InvalidConfigError("--parallel must be >= 1");

  hgs::TrainConfig base;
  if (!a.config.empty()) {
    base = hgs::train_config_from_kv(hgs::KvConfig::load(a.config));
  }
  hgs::Manifest manifest = hgs::load_manifest(a.manifest);
  base.dims.num_classes = manifest.num_classes;
  claim_out_dir(a.out, a.force);
  fs::create_directories(fs::path(a.out) / "runs");

  const std::vector<std::string> methods = {"baseline", "full"};
  std::vector<SweepCell> cells;
  for (const std::string& m : methods) {
    for (double f : a.fractions) {
      for (std::uint64_t s : a.seeds) {
        for (int fold = 0; fold < a.folds; ++fold) {
          SweepCell c;
          c.method = m;
          c.fraction = f;
          c.seed = s;
          c.fold = fold;
          c.run_dir = (fs::path(a.out) / "runs" / cell_dir_name(c)).string();
          cells.push_back(c);
        }
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(cells.size());
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& c = cells[i];
      try {
        hgs::TrainConfig cfg = base;
        if (c.method == "baseline") {
          cfg.enable_session_pl = false;
          cfg.enable_clip = false;
          cfg.enable_frame = false;
        }
        cfg.label_fraction = c.fraction;
        cfg.seed = c.seed;
        cfg.cv_folds = a.folds;
        cfg.cv_fold = c.fold;
        cfg.validate();
        SplitSets sets = make_split_sets(manifest, cfg);
        fs::create_directories(c.run_dir);
        hgs::TrainResult r =
            hgs::run_training(sets.train_set, sets.eval_set, cfg, c.run_dir);
        c.macro_f1 = r.final_macro_f1;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  int n_threads = std::min<int>(a.parallel, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  nlohmann::json cj = nlohmann::json::array();
  for (const SweepCell& c : cells) {
    cj.push_back({{"method", c.method},
                  {"fraction", c.fraction},
                  {"seed", c.seed},
                  {"fold", c.fold},
                  {"run_dir", c.run_dir},
                  {"macro_f1", c.macro_f1}});
  }
  write_text_file((fs::path(a.out) / "cells.json").string(), cj.dump(2) + "\n");

  std::string grid = render_grid(cells, methods, a.fractions);
  write_text_file((fs::path(a.out) / "sweep_grid.txt").string(), grid);
  std::fputs(grid.c_str(), stdout);
  return 0;
}

// ---------------------------------------------------------------------------
// export-curves

struct ExportArgs {
  std::string run;
  std::string sweep;
  std::string out;
};

// Rebuilds plabel_curve.csv from the refresh rows of metrics.csv.
std::string curve_from_metrics(const std::string& metrics_path) {
  std::ifstream in(metrics_path);
  if (!in) throw hgs::MissingFileError("cannot open " + metrics_path);
  std::string line;
  if (!std::getline(in, line)) {
    throw hgs::SchemaError(metrics_path + " is empty");
  }
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  int step_col = -1;
  int pl_col = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "step") step_col = i;
    if (header[i] == "pl_accuracy") pl_col = i;
  }
  if (step_col < 0 || pl_col < 0) {
    throw hgs::SchemaError(metrics_path + " lacks step/pl_accuracy columns");
  }
  std::ostringstream os;
  os << "refresh_step,pl_accuracy\n";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (pl_col >= static_cast<int>(cells.size())) continue;
    // Refresh rows are exactly the rows carrying a finite pl_accuracy.
    if (cells[pl_col] == "nan") continue;
    os << cells[step_col] << "," << cells[pl_col] << "\n";
  }
  return os.str();
}

int cmd_export_curves(const ExportArgs& a) {
  if (a.run.empty() == a.sweep.empty()) {
    throw hgs::InvalidConfigError(
        "export-curves needs exactly one of --run or --sweep");
  }
  if (!a.run.empty()) {
    std::string text =
        curve_from_metrics((fs::path(a.run) / "metrics.csv").string());
    std::string out_path = a.out.empty()
                               ? (fs::path(a.run) / "plabel_curve.csv").string()
                               : a.out;
    write_text_file(out_path, text);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  }

  std::string cells_path = (fs::path(a.sweep) / "cells.json").string();
  std::ifstream in(cells_path);
  if (!in) throw hgs::MissingFileError("cannot open " + cells_path);
  nlohmann::json cj;
  try {
    in >> cj;
  } catch (const nlohmann::json::exception& e) {
    throw hgs::SchemaError(cells_path + ": " + e.what());
  }
  std::vector<SweepCell> cells;
  std::vector<std::string> methods;
  std::vector<double> fractions;
  for (const auto& item : cj) {
    SweepCell c;
    c.method = item.at("method").get<std::string>();
    c.fraction = item.at("fraction").get<double>();
    c.seed = item.at("seed").get<std::uint64_t>();
    c.fold = item.at("fold").get<int>();
    c.run_dir = item.value("run_dir", std::string());
    c.macro_f1 = item.at("macro_f1").is_number()
                     ? item.at("macro_f1").get<double>()
                     : std::numeric_limits<double>::quiet_NaN();
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
      methods.push_back(c.method);
    }
    if (std::find(fractions.begin(), fractions.end(), c.fraction) ==
        fractions.end()) {
      fractions.push_back(c.fraction);
    }
    cells.push_back(c);
  }
  std::string grid = render_grid(cells, methods, fractions);
  std::string out_path = a.out.empty()
                             ? (fs::path(a.sweep) / "sweep_grid.txt").string()
                             : a.out;
  write_text_file(out_path, grid);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical semi-supervised trainer for session-labeled "
               "long-form audio"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hgs 0.1.0");

  GenDataArgs gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen-data", "Generate a synthetic marker corpus");
  gen_cmd->add_option("--out", gen.out, "Output corpus directory")->required();
  gen_cmd->add_option("-n,--n-samples", gen.n_samples, "Number of samples");
  gen_cmd->add_option("--positive-fraction", gen.positive_fraction,
                      "Fraction of positive-class samples");
  gen_cmd->add_option("--sparsity", gen.marker_sparsity,
                      "Per-utterance marker probability");
  gen_cmd->add_option("--snr-db", gen.snr_db, "Marker SNR in dB");
  gen_cmd->add_option("--sample-rate", gen.sample_rate_hz, "Sample rate (Hz)");
  CLI::Option* gen_seed = gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_flag("--force", gen.force, "Reuse a non-empty output directory");

  TrainArgs tr;
  CLI::App* train_cmd = app.add_subcommand("train", "Train one model");
  train_cmd->add_option("--manifest", tr.manifest, "Corpus manifest path")
      ->required();
  train_cmd->add_option("--out", tr.out, "Run output directory")->required();
  train_cmd->add_option("--config", tr.config, "Key=value config file");
  train_cmd->add_flag("--force", tr.force, "Reuse a non-empty run directory");
  train_cmd->add_option("--ablate", tr.ablate,
                        "Disable a branch: frame, clip, or session_pl");
  CLI::Option* tr_seed = train_cmd->add_option("--seed", tr.seed, "RNG seed");
  CLI::Option* tr_frac = train_cmd->add_option(
      "--fraction", tr.fraction, "Labeled fraction of the training fold");
  CLI::Option* tr_folds =
      train_cmd->add_option("--folds", tr.folds, "Cross-validation fold count");
  CLI::Option* tr_fold =
      train_cmd->add_option("--fold", tr.fold, "Held-out fold index");
  CLI::Option* tr_ssd = train_cmd->add_option("--split-seed", tr.split_seed,
                                              "Split seed (0: use --seed)");
  CLI::Option* tr_steps =
      train_cmd->add_option("--steps", tr.steps, "Training steps");
  CLI::Option* tr_lr = train_cmd->add_option("--lr", tr.lr, "Learning rate");
  CLI::Option* tr_branch = train_cmd->add_option(
      "--eval-branch", tr.eval_branch, "Branch to evaluate: teacher or student");

  EvalArgs ev;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "Checkpoint path")
      ->required();
  eval_cmd->add_option("--manifest", ev.manifest, "Corpus manifest path")
      ->required();
  eval_cmd->add_option("--config", ev.config,
                       "Config file for clip partitioning");
  eval_cmd->add_option("--branch", ev.branch,
                       "Branch to evaluate: teacher or student");
  CLI::Option* ev_folds = eval_cmd->add_option(
      "--folds", ev.folds, "Fold count (evaluate the held-out fold)");
  eval_cmd->add_option("--fold", ev.fold, "Held-out fold index");
  eval_cmd->add_option("--split-seed", ev.split_seed, "Split seed");
  eval_cmd->add_option("--seed", ev.seed, "Seed (split fallback)");

  SweepArgs sw;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run the baseline/full grid over fractions, seeds, and folds");
  sweep_cmd->add_option("--manifest", sw.manifest, "Corpus manifest path")
      ->required();
  sweep_cmd->add_option("--out", sw.out, "Sweep output directory")->required();
  sweep_cmd->add_option("--config", sw.config, "Key=value config file");
  sweep_cmd->add_option("--fractions", sw.fractions, "Labeled fractions")
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sw.seeds, "Seeds")->delimiter(',');
  sweep_cmd->add_option("--folds", sw.folds, "Cross-validation fold count");
  sweep_cmd->add_option("--parallel", sw.parallel, "Worker thread count");
  sweep_cmd->add_flag("--force", sw.force,
                      "Reuse a non-empty output directory");

  ExportArgs ex;
  CLI::App* export_cmd = app.add_subcommand(
      "export-curves", "Re-emit derived curves and sweep grids");
  export_cmd->add_option("--run", ex.run, "Run directory (pseudo-label curve)");
  export_cmd->add_option("--sweep", ex.sweep, "Sweep directory (grid)");
  export_cmd->add_option("--out", ex.out, "Redirect output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  gen.seed_given = gen_seed->count() > 0;
  tr.seed_given = tr_seed->count() > 0;
  tr.fraction_given = tr_frac->count() > 0;
  tr.folds_given = tr_folds->count() > 0;
  tr.fold_given = tr_fold->count() > 0;
  tr.split_seed_given = tr_ssd->count() > 0;
  tr.steps_given = tr_steps->count() > 0;
  tr.lr_given = tr_lr->count() > 0;
  tr.eval_branch_given = tr_branch->count() > 0;
  ev.folds_given = ev_folds->count() > 0;

  try {
    if (gen_cmd->parsed()) return cmd_gen_data(gen);
    if (train_cmd->parsed()) return cmd_train(tr);
    if (eval_cmd->parsed()) return cmd_eval(ev);
    if (sweep_cmd->parsed()) return cmd_sweep(sw);
    if (export_cmd->parsed()) return cmd_export_curves(ex);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  }
  return 0;
}
