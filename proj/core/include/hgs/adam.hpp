// core/include/hgs/adam.hpp

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

#ifndef HGS_ADAM_HPP_
#define HGS_ADAM_HPP_

#include <cmath>
#include <cstdint>

#include "hgs/model.hpp"

namespace hgs {

struct AdamConfig {
  double lr = 2e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-8;  // decoupled, applied outside the moments
};

template <typename T>
struct AdamState {
  ModelParams<T> m;  // first moment
  ModelParams<T> v;  // second moment
  std::int64_t t = 0;

  static AdamState init(const ModelDims& dims) {
    AdamState s;
    s.m = zero_params<T>(dims);
    s.v = zero_params<T>(dims);
    return s;
  }
};

template <typename T>
void zero_grads(ModelParams<T>& grads) {
  for_each_param(grads,
                 [](const std::string&, Mat<T>& g) { g.fill(T(0)); });
}

/// One decoupled-weight-decay Adam update with bias correction. A frozen
/// encoder is skipped entirely, so neither the moment buffers nor the decay
/// term can drift its parameters.
template <typename T>
void adam_step(ModelParams<T>& params, const ModelParams<T>& grads,
               AdamState<T>& state, const AdamConfig& cfg,
               bool update_encoder) {
  auto pp = collect_params(params);
  auto gp = collect_params(const_cast<ModelParams<T>&>(grads));
  auto mp = collect_params(state.m);
  auto vp = collect_params(state.v);
  if (pp.size() != gp.size() || pp.size() != mp.size() ||
      pp.size() != vp.size()) {
    throw ShapeMismatchError("adam: parameter sets differ");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < pp.size(); ++i) {
    if (!update_encoder && pp[i].first.rfind("enc.", 0) == 0) continue;
    Mat<T>& p = *pp[i].second;
    const Mat<T>& g = *gp[i].second;
    Mat<T>& m = *mp[i].second;
    Mat<T>& v = *vp[i].second;
    if (!p.same_shape(g) || !p.same_shape(m) || !p.same_shape(v)) {
      throw ShapeMismatchError("adam: shape mismatch at " + pp[i].first);
    }
    for (std::size_t j = 0; j < p.a.size(); ++j) {
      const double gj = static_cast<double>(g.a[j]);
      const double mj =
          cfg.beta1 * static_cast<double>(m.a[j]) + (1.0 - cfg.beta1) * gj;
      const double vj = cfg.beta2 * static_cast<double>(v.a[j]) +
                        (1.0 - cfg.beta2) * gj * gj;
      m.a[j] = static_cast<T>(mj);
      v.a[j] = static_cast<T>(vj);
      const double mhat = mj / bc1;
      const double vhat = vj / bc2;
      const double pj = static_cast<double>(p.a[j]);
      p.a[j] = static_cast<T>(pj - cfg.lr * (mhat / (std::sqrt(vhat) +
                                                     cfg.eps) +
                                             cfg.weight_decay * pj));
    }
  }
}

}  // namespace hgs

#endif  // HGS_ADAM_HPP_
