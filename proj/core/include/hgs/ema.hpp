// core/include/hgs/ema.hpp

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

#ifndef HGS_EMA_HPP_
#define HGS_EMA_HPP_

#include "hgs/model.hpp"

namespace hgs {

/// teacher = momentum * teacher + (1 - momentum) * student, elementwise
/// over every parameter. The blend is computed in double and rounded once
/// to the storage type, so a replay of the same update sequence reproduces
/// the stored values exactly.
template <typename T>
void ema_update(ModelParams<T>& teacher, const ModelParams<T>& student,
                double momentum) {
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw InvalidConfigError("ema momentum must lie in [0, 1)");
  }
  auto tp = collect_params(teacher);
  auto sp = collect_params(const_cast<ModelParams<T>&>(student));
  if (tp.size() != sp.size()) {
    throw ShapeMismatchError("ema: parameter sets differ");
  }
  for (std::size_t i = 0; i < tp.size(); ++i) {
    Mat<T>& t = *tp[i].second;
    const Mat<T>& s = *sp[i].second;
    if (!t.same_shape(s)) {
      throw ShapeMismatchError("ema: shape mismatch at " + tp[i].first);
    }
    for (std::size_t j = 0; j < t.a.size(); ++j) {
      t.a[j] = static_cast<T>(momentum * static_cast<double>(t.a[j]) +
                              (1.0 - momentum) * static_cast<double>(s.a[j]));
    }
  }
}

}  // namespace hgs

#endif  // HGS_EMA_HPP_
