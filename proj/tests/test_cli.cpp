// tests/test_cli.cpp

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

// End-to-end tests over the installed binary. The binary path comes from
// HGS_BIN (set by ctest); a couple of build-tree locations are probed as a
// fallback for manual runs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "hgs/kvconfig.hpp"
#include "hgs/manifest.hpp"
#include "hgs/train.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

std::string hgs_bin() {
  static const std::string found = [] {
    if (const char* env = std::getenv("HGS_BIN")) return std::string(env);
    for (const char* probe :
         {"build/tools/hgs", "../tools/hgs", "./tools/hgs"}) {
      if (fs::exists(probe)) return fs::absolute(probe).string();
    }
    return std::string();
  }();
  REQUIRE_MESSAGE(!found.empty(), "set HGS_BIN to the hgs binary");
  return found;
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the binary with HGS_SEED scrubbed unless `env` re-sets it.
CliResult run_cli(const std::string& args, const hgs_test::TempDir& scratch,
                  const std::string& env = "") {
  const std::string out_file = scratch.str("cli_stdout.txt");
  const std::string err_file = scratch.str("cli_stderr.txt");
  const std::string cmd = "env -u HGS_SEED " + env + (env.empty() ? "" : " ") +
                          "'" + hgs_bin() + "' " + args + " > '" + out_file +
                          "' 2> '" + err_file + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// Training config small enough that a run completes in well under a
// second against the 2 kHz default corpus.
hgs::TrainConfig cli_train_config() {
  hgs::TrainConfig c = hgs_test::tiny_train_config(1);
  c.dims.max_positions = 256;
  c.dims.encoder.downsample = 40;
  c.max_steps = 4;
  c.eval_every = 2;
  c.tau = 0.55;
  c.grad_accum = 1;
  c.cv_folds = 0;
  return c;
}

// Corpus plus saved config, generated once and reused read-only.
struct CliFixture {
  CliFixture() : dir("cli") {
    CliResult gen = run_cli("gen-data --out '" + dir.str("corpus") +
                                "' -n 8 --seed 5",
                            dir);
    REQUIRE(gen.code == 0);
    hgs::KvConfig kv;
    hgs::train_config_to_kv(cli_train_config(), &kv);
    kv.save(dir.str("tiny.kv"));
  }

  std::string corpus() const { return dir.str("corpus"); }
  std::string manifest() const { return dir.str("corpus/manifest.tsv"); }
  std::string config() const { return dir.str("tiny.kv"); }

  hgs_test::TempDir dir;
};

CliFixture& fixture() {
  static CliFixture f;
  return f;
}

}  // namespace

TEST_CASE("cli reports its version and rejects bad invocations") {
  hgs_test::TempDir dir("cliver");
  CliResult ver = run_cli("--version", dir);
  CHECK(ver.code == 0);
  CHECK(ver.out == "hgs 0.1.0\n");

  CliResult help = run_cli("--help", dir);
  CHECK(help.code == 0);
  CHECK(help.out.find("gen-data") != std::string::npos);
  CHECK(help.out.find("export-curves") != std::string::npos);

  CHECK(run_cli("", dir).code == 2);               // a subcommand is required
  CHECK(run_cli("train --bogus x", dir).code == 2);
  CHECK(run_cli("frobnicate", dir).code == 2);
}

TEST_CASE("gen-data writes a loadable corpus and guards its directory") {
  hgs_test::TempDir dir("cligen");
  const std::string corpus = dir.str("c");
  CliResult r = run_cli("gen-data --out '" + corpus + "' -n 6 --seed 3", dir);
  CHECK(r.code == 0);
  CHECK(r.out.find("generated 6 samples") != std::string::npos);
  CHECK(r.out.find("marker rate") != std::string::npos);
  CHECK(fs::exists(corpus + "/manifest.tsv"));
  CHECK(fs::exists(corpus + "/markers.tsv"));
  CHECK(fs::is_directory(corpus + "/audio"));

  const hgs::Manifest m = hgs::load_manifest(corpus + "/manifest.tsv");
  CHECK(static_cast<int>(m.entries.size()) == 6);
  CHECK(m.num_classes == 2);

  CliResult again = run_cli("gen-data --out '" + corpus + "' -n 6", dir);
  CHECK(again.code == 2);
  CHECK(again.err.find("not empty") != std::string::npos);
  CHECK(run_cli("gen-data --out '" + corpus + "' -n 6 --seed 3 --force", dir)
            .code == 0);
}

TEST_CASE("gen-data seeds come from the flag, then the environment") {
  hgs_test::TempDir dir("cliseed");
  CHECK(run_cli("gen-data --out '" + dir.str("a") + "' -n 4", dir,
                "HGS_SEED=77")
            .code == 0);
  CHECK(run_cli("gen-data --out '" + dir.str("b") + "' -n 4", dir,
                "HGS_SEED=77")
            .code == 0);
  CHECK(slurp(dir.str("a/markers.tsv")) == slurp(dir.str("b/markers.tsv")));
  CHECK(slurp(dir.str("a/manifest.tsv")) == slurp(dir.str("b/manifest.tsv")));

  // An explicit flag wins over the environment.
  CHECK(run_cli("gen-data --out '" + dir.str("c") + "' -n 4 --seed 78", dir,
                "HGS_SEED=77")
            .code == 0);
  CHECK(slurp(dir.str("c/markers.tsv")) != slurp(dir.str("a/markers.tsv")));

  CliResult bad = run_cli("gen-data --out '" + dir.str("d") + "' -n 4", dir,
                          "HGS_SEED=banana");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("HGS_SEED") != std::string::npos);
}

TEST_CASE("train produces a reproducible run that its own config replays") {
  CliFixture& f = fixture();
  hgs_test::TempDir dir("clitrain");
  const std::string base_args = "train --manifest '" + f.manifest() +
                                "' --config '" + f.config() + "'";

  CliResult r1 = run_cli(base_args + " --out '" + dir.str("run1") + "'", dir);
  CHECK(r1.code == 0);
  CHECK(r1.out.find("test_macro_f1 ") != std::string::npos);
  for (const char* name :
       {"metrics.csv", "plabel_curve.csv", "config.resolved", "summary.json",
        "checkpoint_final.hgc1"}) {
    CHECK(fs::exists(dir.str("run1/") + name));
  }

  CliResult r2 = run_cli(base_args + " --out '" + dir.str("run2") + "'", dir);
  CHECK(r2.code == 0);
  CHECK(slurp(dir.str("run1/metrics.csv")) ==
        slurp(dir.str("run2/metrics.csv")));
  CHECK(r1.out == r2.out);

  // The resolved config alone reproduces the run bit-for-bit.
  CliResult r3 = run_cli("train --manifest '" + f.manifest() +
                             "' --config '" + dir.str("run1/config.resolved") +
                             "' --out '" + dir.str("run3") + "'",
                         dir);
  CHECK(r3.code == 0);
  CHECK(slurp(dir.str("run1/metrics.csv")) ==
        slurp(dir.str("run3/metrics.csv")));
  CHECK(slurp(dir.str("run1/config.resolved")) ==
        slurp(dir.str("run3/config.resolved")));

  // Flags override the file; the override lands in config.resolved.
  CliResult r4 = run_cli(base_args + " --out '" + dir.str("run4") +
                             "' --steps 2 --fraction 0.5",
                         dir);
  CHECK(r4.code == 0);
  const hgs::TrainConfig resolved = hgs::train_config_from_kv(
      hgs::KvConfig::load(dir.str("run4/config.resolved")));
  CHECK(resolved.max_steps == 2);
  CHECK(resolved.label_fraction == 0.5);
}

TEST_CASE("train maps failures to the documented exit codes") {
  CliFixture& f = fixture();
  hgs_test::TempDir dir("clierr");

  CliResult missing = run_cli("train --manifest '" + dir.str("nope.tsv") +
                                  "' --config '" + f.config() + "' --out '" +
                                  dir.str("r") + "'",
                              dir);
  CHECK(missing.code == 3);
  CHECK(missing.err.find("error:") != std::string::npos);

  CliResult ablate = run_cli("train --manifest '" + f.manifest() +
                                 "' --config '" + f.config() + "' --out '" +
                                 dir.str("r2") + "' --ablate everything",
                             dir);
  CHECK(ablate.code == 2);
  CHECK(ablate.err.find("ablate") != std::string::npos);

  CHECK(run_cli("train --manifest '" + f.manifest() + "' --config '" +
                    f.config() + "' --out '" + dir.str("r3") + "' --steps 0",
                dir)
            .code == 2);

  fs::create_directories(dir.str("busy"));
  std::ofstream(dir.str("busy/existing.txt")) << "x\n";
  CHECK(run_cli("train --manifest '" + f.manifest() + "' --config '" +
                    f.config() + "' --out '" + dir.str("busy") + "'",
                dir)
            .code == 2);
}

TEST_CASE("train ablation flags disable branches in the resolved config") {
  CliFixture& f = fixture();
  hgs_test::TempDir dir("cliabl");
  CliResult r = run_cli("train --manifest '" + f.manifest() + "' --config '" +
                            f.config() + "' --out '" + dir.str("run") +
                            "' --ablate frame --ablate clip",
                        dir);
  CHECK(r.code == 0);
  const hgs::TrainConfig resolved = hgs::train_config_from_kv(
      hgs::KvConfig::load(dir.str("run/config.resolved")));
  CHECK(!resolved.enable_frame);
  CHECK(resolved.gamma == 0.0);
  CHECK(!resolved.enable_clip);
  CHECK(resolved.beta == 0.0);
  CHECK(resolved.enable_session_pl);
}

TEST_CASE("eval prints a confusion matrix for a trained checkpoint") {
  CliFixture& f = fixture();
  hgs_test::TempDir dir("clieval");
  REQUIRE(run_cli("train --manifest '" + f.manifest() + "' --config '" +
                      f.config() + "' --out '" + dir.str("run") + "'",
                  dir)
              .code == 0);

  CliResult ev = run_cli("eval --checkpoint '" +
                             dir.str("run/checkpoint_final.hgc1") +
                             "' --manifest '" + f.manifest() + "'",
                         dir);
  CHECK(ev.code == 0);
  CHECK(ev.out.find("confusion matrix (teacher branch") != std::string::npos);
  CHECK(ev.out.find("pred_0") != std::string::npos);
  CHECK(ev.out.find("true_1") != std::string::npos);
  CHECK(ev.out.find("macro_f1 ") != std::string::npos);

  CHECK(run_cli("eval --checkpoint '" + dir.str("run/checkpoint_final.hgc1") +
                    "' --manifest '" + f.manifest() + "' --branch student",
                dir)
            .code == 0);
  CHECK(run_cli("eval --checkpoint '" + dir.str("run/checkpoint_final.hgc1") +
                    "' --manifest '" + f.manifest() + "' --branch ema",
                dir)
            .code == 2);
  CHECK(run_cli("eval --checkpoint '" + dir.str("missing.hgc1") +
                    "' --manifest '" + f.manifest() + "'",
                dir)
            .code == 3);
}

TEST_CASE("export-curves re-derives the curve the run already wrote") {
  CliFixture& f = fixture();
  hgs_test::TempDir dir("clicurve");
  REQUIRE(run_cli("train --manifest '" + f.manifest() + "' --config '" +
                      f.config() + "' --out '" + dir.str("run") + "'",
                  dir)
              .code == 0);

  CliResult ex = run_cli("export-curves --run '" + dir.str("run") +
                             "' --out '" + dir.str("curve.csv") + "'",
                         dir);
  CHECK(ex.code == 0);
  CHECK(slurp(dir.str("curve.csv")) == slurp(dir.str("run/plabel_curve.csv")));

  CHECK(run_cli("export-curves", dir).code == 2);
  CHECK(run_cli("export-curves --run '" + dir.str("run") + "' --sweep '" +
                    dir.str("run") + "'",
                dir)
            .code == 2);
}

TEST_CASE("sweep runs the method-by-fraction grid and renders it") {
  CliFixture& f = fixture();
  hgs_test::TempDir dir("clisweep");
  CliResult r = run_cli("sweep --manifest '" + f.manifest() + "' --config '" +
                            f.config() + "' --out '" + dir.str("sw") +
                            "' --fractions 0.5 --seeds 9 --folds 2 "
                            "--parallel 2",
                        dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir.str("sw/cells.json")));
  CHECK(fs::exists(dir.str("sw/sweep_grid.txt")));
  for (const char* cell :
       {"baseline_frac050_seed9_fold0", "baseline_frac050_seed9_fold1",
        "full_frac050_seed9_fold0", "full_frac050_seed9_fold1"}) {
    CHECK(fs::exists(dir.str("sw/runs/") + std::string(cell) +
                     "/metrics.csv"));
  }
  const std::string grid = slurp(dir.str("sw/sweep_grid.txt"));
  CHECK(grid.find("frac=0.50") != std::string::npos);
  CHECK(grid.find("baseline") != std::string::npos);
  CHECK(grid.find("full") != std::string::npos);
  CHECK(grid.find("(") != std::string::npos);  // mean(std) cells
  CHECK(r.out.find("frac=0.50") != std::string::npos);

  // The grid regenerates byte-identically from cells.json.
  fs::remove(dir.str("sw/sweep_grid.txt"));
  CHECK(run_cli("export-curves --sweep '" + dir.str("sw") + "'", dir).code ==
        0);
  CHECK(slurp(dir.str("sw/sweep_grid.txt")) == grid);
}
