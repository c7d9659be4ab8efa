// core/include/hgs/metrics.hpp

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

#ifndef HGS_METRICS_HPP_
#define HGS_METRICS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "hgs/pseudo.hpp"

namespace hgs {

/// Entry (i, j) counts samples with true class i predicted as class j.
/// Empty inputs and length mismatches raise LengthMismatchError; values
/// outside [0, C) raise ValueOutOfRangeError.
std::vector<std::vector<int>> confusion_matrix(const std::vector<int>& y_true,
                                               const std::vector<int>& y_pred,
                                               int num_classes);

/// Unweighted mean of per-class F1 over all C classes. A class with
/// precision + recall == 0 contributes F1 = 0.
double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                int num_classes);

struct PlAccuracy {
  double session_accuracy;  // NaN when no record is active
  double coverage;          // active / total unlabeled
};

/// Accuracy of active session pseudo-labels against the sealed true labels
/// (indexed like store.session). This is the only consumer of sealed labels.
PlAccuracy pl_accuracy(const PseudoLabelStore& store,
                       const std::vector<int>& sealed_truth);

struct MeanStd {
  double mean;
  double std;  // population standard deviation
};

MeanStd cv_aggregate(const std::vector<double>& values);

/// Renders a MeanStd as `63.26(1.34)`-style fixed two-decimal text.
std::string format_mean_std(const MeanStd& ms);

}  // namespace hgs

#endif  // HGS_METRICS_HPP_
