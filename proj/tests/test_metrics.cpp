// tests/test_metrics.cpp

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
#include <vector>

#include "doctest.h"

#include "hgs/metrics.hpp"
#include "hgs/pseudo.hpp"
#include "hgs/rng.hpp"

using namespace hgs;

namespace {

// Independent macro-F1: per-class counts tallied pair by pair, F1 composed
// from first principles, no shared code with the library implementation.
double oracle_macro_f1(const std::vector<int>& yt, const std::vector<int>& yp,
                       int C) {
  double sum = 0.0;
  for (int c = 0; c < C; ++c) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < yt.size(); ++i) {
      const bool t = yt[i] == c;
      const bool p = yp[i] == c;
      if (t && p) ++tp;
      if (!t && p) ++fp;
      if (t && !p) ++fn;
    }
    const double denom = 2.0 * tp + fp + fn;
    sum += denom > 0.0 ? 2.0 * tp / denom : 0.0;
  }
  return sum / C;
}

}  // namespace

TEST_CASE("confusion matrix counts every pair once") {
  std::vector<int> yt = {0, 0, 1, 1, 2, 2, 2};
  std::vector<int> yp = {0, 1, 1, 1, 0, 2, 2};
  auto cm = confusion_matrix(yt, yp, 3);
  CHECK(cm[0][0] == 1);
  CHECK(cm[0][1] == 1);
  CHECK(cm[1][1] == 2);
  CHECK(cm[2][0] == 1);
  CHECK(cm[2][2] == 2);
  int total = 0;
  for (const auto& row : cm) {
    for (int v : row) total += v;
  }
  CHECK(total == 7);
}

TEST_CASE("macro F1 matches the brute-force oracle on random instances") {
  Rng rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int C = std::vector<int>{2, 3, 5}[trial % 3];
    const int n = static_cast<int>(rng.uniform_int(1, 40));
    std::vector<int> yt(n), yp(n);
    for (int i = 0; i < n; ++i) {
      yt[i] = static_cast<int>(rng.uniform_int(0, C - 1));
      // Skewed predictions exercise absent classes and zero denominators.
      yp[i] = rng.uniform() < 0.3 ? 0
                                  : static_cast<int>(rng.uniform_int(0, C - 1));
    }
    const double got = macro_f1(yt, yp, C);
    const double want = oracle_macro_f1(yt, yp, C);
    worst = std::max(worst, std::fabs(got - want));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("macro F1 edge cases") {
  CHECK(macro_f1({0, 1}, {0, 1}, 2) == doctest::Approx(1.0));
  CHECK(macro_f1({0, 0}, {1, 1}, 2) == doctest::Approx(0.0));
  // A class absent from truth and prediction contributes zero, not NaN.
  const double v = macro_f1({0, 0}, {0, 0}, 3);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("pseudo-label accuracy scores active sessions against sealed truth") {
  PseudoLabelStore store;
  store.session.resize(4);
  store.session[0] = {1, 0.95, true, 10};
  store.session[1] = {0, 0.99, true, 10};
  store.session[2] = {1, 0.40, false, 10};  // inactive: not scored
  store.session[3] = {1, 0.97, true, 10};
  std::vector<int> truth = {1, 1, 0, -1};  // slot 3 has no sealed label

  PlAccuracy acc = pl_accuracy(store, truth);
  // Active and sealed: slots 0 (right) and 1 (wrong).
  CHECK(acc.session_accuracy == doctest::Approx(0.5));

  PseudoLabelStore empty;
  empty.session.resize(2);
  PlAccuracy none = pl_accuracy(empty, {0, 1});
  CHECK(std::isnan(none.session_accuracy));
}

TEST_CASE("cross-validation aggregate uses the population deviation") {
  MeanStd ms = cv_aggregate({2.0, 4.0, 6.0});
  CHECK(ms.mean == doctest::Approx(4.0));
  CHECK(ms.std == doctest::Approx(std::sqrt(8.0 / 3.0)));

  MeanStd one = cv_aggregate({5.0});
  CHECK(one.mean == doctest::Approx(5.0));
  CHECK(one.std == doctest::Approx(0.0));
}

TEST_CASE("mean(std) cells render with two decimals") {
  CHECK(format_mean_std({63.256, 1.337}) == "63.26(1.34)");
  CHECK(format_mean_std({100.0, 0.0}) == "100.00(0.00)");
  CHECK(format_mean_std({7.5, 0.049}) == "7.50(0.05)");
}
