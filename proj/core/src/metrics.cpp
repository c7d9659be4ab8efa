// core/src/metrics.cpp

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

#include "hgs/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "hgs/errors.hpp"

namespace hgs {

std::vector<std::vector<int>> confusion_matrix(const std::vector<int>& y_true,
                                               const std::vector<int>& y_pred,
                                               int num_classes) {
  if (y_true.empty()) throw LengthMismatchError("empty label lists");
  if (y_true.size() != y_pred.size()) {
    throw LengthMismatchError("y_true has " + std::to_string(y_true.size()) +
                              " entries, y_pred has " +
                              std::to_string(y_pred.size()));
  }
  std::vector<std::vector<int>> cm(num_classes,
                                   std::vector<int>(num_classes, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes) {
      throw ValueOutOfRangeError("label outside [0, " +
                                 std::to_string(num_classes) + ")");
    }
    cm[t][p] += 1;
  }
  return cm;
}

double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                int num_classes) {
  const auto cm = confusion_matrix(y_true, y_pred, num_classes);
  double sum = 0.0;
  for (int c = 0; c < num_classes; ++c) {
    int tp = cm[c][c];
    int pred_c = 0, true_c = 0;
    for (int k = 0; k < num_classes; ++k) {
      pred_c += cm[k][c];
      true_c += cm[c][k];
    }
    const double precision = pred_c > 0 ? static_cast<double>(tp) / pred_c : 0.0;
    const double recall = true_c > 0 ? static_cast<double>(tp) / true_c : 0.0;
    const double pr = precision + recall;
    sum += pr > 0.0 ? 2.0 * precision * recall / pr : 0.0;
  }
  return sum / num_classes;
}

PlAccuracy pl_accuracy(const PseudoLabelStore& store,
                       const std::vector<int>& sealed_truth) {
  if (store.session.size() != sealed_truth.size()) {
    throw LengthMismatchError("store has " +
                              std::to_string(store.session.size()) +
                              " session records, truth has " +
                              std::to_string(sealed_truth.size()));
  }
  int active = 0, scored = 0, correct = 0;
  for (std::size_t i = 0; i < store.session.size(); ++i) {
    if (!store.session[i].active) continue;
    ++active;
    if (sealed_truth[i] < 0) continue;  // no sealed label: unscorable
    ++scored;
    if (store.session[i].label == sealed_truth[i]) ++correct;
  }
  PlAccuracy out;
  out.coverage = store.session.empty()
                     ? 0.0
                     : static_cast<double>(active) / store.session.size();
  out.session_accuracy =
      scored > 0 ? static_cast<double>(correct) / scored
                 : std::numeric_limits<double>::quiet_NaN();
  return out;
}

MeanStd cv_aggregate(const std::vector<double>& values) {
  if (values.empty()) throw LengthMismatchError("cv_aggregate of nothing");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return MeanStd{mean, std::sqrt(var)};
}

std::string format_mean_std(const MeanStd& ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f(%.2f)", ms.mean, ms.std);
  return std::string(buf);
}

}  // namespace hgs
