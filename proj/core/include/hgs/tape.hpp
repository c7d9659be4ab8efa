// core/include/hgs/tape.hpp

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

#ifndef HGS_TAPE_HPP_
#define HGS_TAPE_HPP_

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hgs/mat.hpp"

namespace hgs {

/// Reverse-mode tape over dense matrices.
///
/// A graph is built per forward pass. Leaves are either constants (no
/// gradient) or parameters bound to an external gradient sink; backward()
/// accumulates into the sinks, so several graphs can add into the same
/// buffers across micro-batches. Composite layers that would otherwise
/// produce many small nodes (convolution, LSTM) are single fused nodes
/// with hand-written backward passes.
template <typename T>
class Tape {
 public:
  using Id = int;

  void reset() { nodes_.clear(); }
  int size() const { return static_cast<int>(nodes_.size()); }

  const Mat<T>& val(Id id) const { return nodes_[id].val; }
  bool needs_grad(Id id) const { return nodes_[id].needs; }

  Mat<T>& grad(Id id) {
    Node& n = nodes_[id];
    if (!n.has_grad) {
      n.grad = Mat<T>(n.val.rows, n.val.cols);
      n.has_grad = true;
    }
    return n.grad;
  }

  Id constant(Mat<T> v) {
    return push(std::move(v), false, nullptr, {});
  }

  /// Parameter leaf. `sink` receives the accumulated gradient after
  /// backward(); pass nullptr for a frozen parameter.
  Id leaf(const Mat<T>& v, Mat<T>* sink) {
    Id id = push(Mat<T>(v), sink != nullptr, nullptr, {});
    nodes_[id].sink = sink;
    return id;
  }

  void backward(Id root) {
    if (val(root).rows != 1 || val(root).cols != 1) {
      throw ShapeMismatchError("backward: root must be a scalar");
    }
    grad(root)(0, 0) = T(1);
    for (Id i = root; i >= 0; --i) {
      Node& n = nodes_[i];
      if (!n.needs || !n.has_grad) continue;
      if (n.back) n.back(*this, i);
      if (n.sink) axpy(T(1), n.grad, *n.sink);
    }
  }

  // ---- primitive ops ----

  Id matmul(Id a, Id b) {
    Mat<T> out = hgs::matmul(val(a), val(b));
    return push(std::move(out), any(a, b), [a, b](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      if (t.needs_grad(a)) gemm_nt_acc(g, t.val(b), t.grad(a));
      if (t.needs_grad(b)) gemm_tn_acc(t.val(a), g, t.grad(b));
    }, {a, b});
  }

  // A * B^T
  Id matmul_nt(Id a, Id b) {
    Mat<T> out(val(a).rows, val(b).rows);
    gemm_nt_acc(val(a), val(b), out);
    return push(std::move(out), any(a, b), [a, b](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      if (t.needs_grad(a)) gemm_acc(g, t.val(b), t.grad(a));
      if (t.needs_grad(b)) gemm_tn_acc(g, t.val(a), t.grad(b));
    }, {a, b});
  }

  Id transpose_op(Id a) {
    return push(transpose(val(a)), any(a), [a](Tape& t, Id self) {
      if (!t.needs_grad(a)) return;
      const Mat<T>& g = t.grad(self);
      Mat<T>& ga = t.grad(a);
      for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) ga(c, r) += g(r, c);
    }, {a});
  }

  Id add(Id a, Id b) {
    Mat<T> out = val(a);
    axpy(T(1), val(b), out);
    return push(std::move(out), any(a, b), [a, b](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      if (t.needs_grad(a)) axpy(T(1), g, t.grad(a));
      if (t.needs_grad(b)) axpy(T(1), g, t.grad(b));
    }, {a, b});
  }

  Id sub(Id a, Id b) {
    Mat<T> out = val(a);
    axpy(T(-1), val(b), out);
    return push(std::move(out), any(a, b), [a, b](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      if (t.needs_grad(a)) axpy(T(1), g, t.grad(a));
      if (t.needs_grad(b)) axpy(T(-1), g, t.grad(b));
    }, {a, b});
  }

  Id scale(Id a, T c) {
    Mat<T> out = val(a);
    for (T& v : out.a) v *= c;
    return push(std::move(out), any(a), [a, c](Tape& t, Id self) {
      if (t.needs_grad(a)) axpy(c, t.grad(self), t.grad(a));
    }, {a});
  }

  // X (t x d) + broadcast row bias (1 x d)
  Id add_rowbias(Id x, Id b) {
    if (val(b).rows != 1 || val(b).cols != val(x).cols) {
      throw ShapeMismatchError("add_rowbias: bias must be 1 x cols");
    }
    Mat<T> out = val(x);
    const Mat<T>& bias = val(b);
    for (int r = 0; r < out.rows; ++r) {
      T* orow = out.row(r);
      for (int c = 0; c < out.cols; ++c) orow[c] += bias(0, c);
    }
    return push(std::move(out), any(x, b), [x, b](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      if (t.needs_grad(x)) axpy(T(1), g, t.grad(x));
      if (t.needs_grad(b)) {
        Mat<T>& gb = t.grad(b);
        for (int r = 0; r < g.rows; ++r) {
          const T* grow = g.row(r);
          for (int c = 0; c < g.cols; ++c) gb(0, c) += grow[c];
        }
      }
    }, {x, b});
  }

  Id mul_elem(Id a, Id b) {
    if (!val(a).same_shape(val(b))) {
      throw ShapeMismatchError("mul_elem: shape mismatch");
    }
    Mat<T> out = val(a);
    const Mat<T>& vb = val(b);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] *= vb.a[i];
    return push(std::move(out), any(a, b), [a, b](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      if (t.needs_grad(a)) {
        Mat<T>& ga = t.grad(a);
        const Mat<T>& vb = t.val(b);
        for (std::size_t i = 0; i < g.a.size(); ++i) ga.a[i] += g.a[i] * vb.a[i];
      }
      if (t.needs_grad(b)) {
        Mat<T>& gb = t.grad(b);
        const Mat<T>& va = t.val(a);
        for (std::size_t i = 0; i < g.a.size(); ++i) gb.a[i] += g.a[i] * va.a[i];
      }
    }, {a, b});
  }

  Id tanh_op(Id a) {
    Mat<T> out = val(a);
    for (T& v : out.a) v = std::tanh(v);
    Id id = push(std::move(out), any(a), nullptr, {a});
    if (nodes_[id].needs) {
      nodes_[id].back = [a](Tape& t, Id self) {
        const Mat<T>& g = t.grad(self);
        const Mat<T>& y = t.val(self);
        Mat<T>& ga = t.grad(a);
        for (std::size_t i = 0; i < g.a.size(); ++i)
          ga.a[i] += g.a[i] * (T(1) - y.a[i] * y.a[i]);
      };
    }
    return id;
  }

  Id sigmoid_op(Id a) {
    Mat<T> out = val(a);
    for (T& v : out.a) v = T(1) / (T(1) + std::exp(-v));
    Id id = push(std::move(out), any(a), nullptr, {a});
    if (nodes_[id].needs) {
      nodes_[id].back = [a](Tape& t, Id self) {
        const Mat<T>& g = t.grad(self);
        const Mat<T>& y = t.val(self);
        Mat<T>& ga = t.grad(a);
        for (std::size_t i = 0; i < g.a.size(); ++i)
          ga.a[i] += g.a[i] * y.a[i] * (T(1) - y.a[i]);
      };
    }
    return id;
  }

  Id relu_op(Id a) {
    Mat<T> out = val(a);
    for (T& v : out.a) v = v > T(0) ? v : T(0);
    return push(std::move(out), any(a), [a](Tape& t, Id self) {
      if (!t.needs_grad(a)) return;
      const Mat<T>& g = t.grad(self);
      const Mat<T>& x = t.val(a);
      Mat<T>& ga = t.grad(a);
      for (std::size_t i = 0; i < g.a.size(); ++i)
        if (x.a[i] > T(0)) ga.a[i] += g.a[i];
    }, {a});
  }

  Id softmax_rows(Id a) {
    Mat<T> out = val(a);
    for (int r = 0; r < out.rows; ++r) {
      T* row = out.row(r);
      T mx = row[0];
      for (int c = 1; c < out.cols; ++c) mx = std::max(mx, row[c]);
      T sum = T(0);
      for (int c = 0; c < out.cols; ++c) {
        row[c] = std::exp(row[c] - mx);
        sum += row[c];
      }
      for (int c = 0; c < out.cols; ++c) row[c] /= sum;
    }
    Id id = push(std::move(out), any(a), nullptr, {a});
    if (!nodes_[id].needs) return id;
    nodes_[id].back = [a](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      const Mat<T>& y = t.val(self);
      Mat<T>& ga = t.grad(a);
      for (int r = 0; r < g.rows; ++r) {
        const T* grow = g.row(r);
        const T* yrow = y.row(r);
        T dot = T(0);
        for (int c = 0; c < g.cols; ++c) dot += grow[c] * yrow[c];
        T* garow = ga.row(r);
        for (int c = 0; c < g.cols; ++c)
          garow[c] += yrow[c] * (grow[c] - dot);
      }
    };
    return id;
  }

  // Per-row layer normalization with learnable gain and bias (both 1 x d).
  Id layernorm_rows(Id x, Id gain, Id bias, T eps) {
    const Mat<T>& xv = val(x);
    const int d = xv.cols;
    Mat<T> out(xv.rows, d);
    Mat<T> xhat(xv.rows, d);
    Mat<T> istd(xv.rows, 1);
    const Mat<T>& gv = val(gain);
    const Mat<T>& bv = val(bias);
    for (int r = 0; r < xv.rows; ++r) {
      const T* xr = xv.row(r);
      T mu = T(0);
      for (int c = 0; c < d; ++c) mu += xr[c];
      mu /= T(d);
      T var = T(0);
      for (int c = 0; c < d; ++c) {
        const T dv = xr[c] - mu;
        var += dv * dv;
      }
      var /= T(d);
      const T is = T(1) / std::sqrt(var + eps);
      istd(r, 0) = is;
      T* hr = xhat.row(r);
      T* orow = out.row(r);
      for (int c = 0; c < d; ++c) {
        hr[c] = (xr[c] - mu) * is;
        orow[c] = gv(0, c) * hr[c] + bv(0, c);
      }
    }
    Id id = push(std::move(out), any(x, gain, bias), nullptr, {x, gain, bias});
    if (!nodes_[id].needs) return id;
    nodes_[id].back = [x, gain, bias, xh = std::move(xhat),
                       is = std::move(istd)](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      const Mat<T>& gv = t.val(gain);
      const int d = g.cols;
      if (t.needs_grad(gain) || t.needs_grad(bias)) {
        Mat<T>& gg = t.grad(gain);
        Mat<T>& gb = t.grad(bias);
        for (int r = 0; r < g.rows; ++r) {
          const T* grow = g.row(r);
          const T* hrow = xh.row(r);
          for (int c = 0; c < d; ++c) {
            if (t.needs_grad(gain)) gg(0, c) += grow[c] * hrow[c];
            if (t.needs_grad(bias)) gb(0, c) += grow[c];
          }
        }
      }
      if (t.needs_grad(x)) {
        Mat<T>& gx = t.grad(x);
        for (int r = 0; r < g.rows; ++r) {
          const T* grow = g.row(r);
          const T* hrow = xh.row(r);
          // dxhat = g * gain; dx = istd * (dxhat - mean(dxhat) - xhat * mean(dxhat*xhat))
          T s1 = T(0), s2 = T(0);
          for (int c = 0; c < d; ++c) {
            const T dh = grow[c] * gv(0, c);
            s1 += dh;
            s2 += dh * hrow[c];
          }
          s1 /= T(d);
          s2 /= T(d);
          T* gxr = gx.row(r);
          for (int c = 0; c < d; ++c) {
            const T dh = grow[c] * gv(0, c);
            gxr[c] += is(r, 0) * (dh - s1 - hrow[c] * s2);
          }
        }
      }
    };
    return id;
  }

  Id concat_rows(const std::vector<Id>& xs) {
    int rows = 0;
    const int cols = val(xs.front()).cols;
    for (Id x : xs) rows += val(x).rows;
    Mat<T> out(rows, cols);
    int r0 = 0;
    bool needs = false;
    for (Id x : xs) {
      const Mat<T>& v = val(x);
      std::copy(v.a.begin(), v.a.end(), out.row(r0));
      r0 += v.rows;
      needs = needs || needs_grad(x);
    }
    return push(std::move(out), needs, [xs](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      int r0 = 0;
      for (Id x : xs) {
        const int n = t.val(x).rows;
        if (t.needs_grad(x)) {
          Mat<T>& gx = t.grad(x);
          for (int r = 0; r < n; ++r) {
            const T* grow = g.row(r0 + r);
            T* gxr = gx.row(r);
            for (int c = 0; c < g.cols; ++c) gxr[c] += grow[c];
          }
        }
        r0 += n;
      }
    }, xs);
  }

  Id slice_rows(Id x, int r0, int n) {
    const Mat<T>& v = val(x);
    Mat<T> out(n, v.cols);
    std::copy(v.row(r0), v.row(r0) + static_cast<std::size_t>(n) * v.cols,
              out.data());
    return push(std::move(out), any(x), [x, r0](Tape& t, Id self) {
      if (!t.needs_grad(x)) return;
      const Mat<T>& g = t.grad(self);
      Mat<T>& gx = t.grad(x);
      for (int r = 0; r < g.rows; ++r) {
        const T* grow = g.row(r);
        T* gxr = gx.row(r0 + r);
        for (int c = 0; c < g.cols; ++c) gxr[c] += grow[c];
      }
    }, {x});
  }

  Id concat_cols(const std::vector<Id>& xs) {
    const int rows = val(xs.front()).rows;
    int cols = 0;
    for (Id x : xs) cols += val(x).cols;
    Mat<T> out(rows, cols);
    int c0 = 0;
    bool needs = false;
    for (Id x : xs) {
      const Mat<T>& v = val(x);
      for (int r = 0; r < rows; ++r)
        std::copy(v.row(r), v.row(r) + v.cols, out.row(r) + c0);
      c0 += v.cols;
      needs = needs || needs_grad(x);
    }
    return push(std::move(out), needs, [xs](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      int c0 = 0;
      for (Id x : xs) {
        const int n = t.val(x).cols;
        if (t.needs_grad(x)) {
          Mat<T>& gx = t.grad(x);
          for (int r = 0; r < g.rows; ++r) {
            const T* grow = g.row(r) + c0;
            T* gxr = gx.row(r);
            for (int c = 0; c < n; ++c) gxr[c] += grow[c];
          }
        }
        c0 += n;
      }
    }, xs);
  }

  Id slice_cols(Id x, int c0, int n) {
    const Mat<T>& v = val(x);
    Mat<T> out(v.rows, n);
    for (int r = 0; r < v.rows; ++r)
      std::copy(v.row(r) + c0, v.row(r) + c0 + n, out.row(r));
    return push(std::move(out), any(x), [x, c0](Tape& t, Id self) {
      if (!t.needs_grad(x)) return;
      const Mat<T>& g = t.grad(self);
      Mat<T>& gx = t.grad(x);
      for (int r = 0; r < g.rows; ++r) {
        const T* grow = g.row(r);
        T* gxr = gx.row(r) + c0;
        for (int c = 0; c < g.cols; ++c) gxr[c] += grow[c];
      }
    }, {x});
  }

  // Non-overlapping mean pooling over row windows; the final partial window
  // is averaged over its actual width.
  Id mean_pool_rows(Id x, int kernel) {
    const Mat<T>& v = val(x);
    const int t_out = (v.rows + kernel - 1) / kernel;
    Mat<T> out(t_out, v.cols);
    for (int i = 0; i < t_out; ++i) {
      const int r0 = i * kernel;
      const int w = std::min(kernel, v.rows - r0);
      T* orow = out.row(i);
      for (int r = r0; r < r0 + w; ++r) {
        const T* vr = v.row(r);
        for (int c = 0; c < v.cols; ++c) orow[c] += vr[c];
      }
      for (int c = 0; c < v.cols; ++c) orow[c] /= T(w);
    }
    return push(std::move(out), any(x), [x, kernel](Tape& t, Id self) {
      if (!t.needs_grad(x)) return;
      const Mat<T>& g = t.grad(self);
      Mat<T>& gx = t.grad(x);
      for (int i = 0; i < g.rows; ++i) {
        const int r0 = i * kernel;
        const int w = std::min(kernel, gx.rows - r0);
        const T* grow = g.row(i);
        for (int r = r0; r < r0 + w; ++r) {
          T* gxr = gx.row(r);
          for (int c = 0; c < g.cols; ++c) gxr[c] += grow[c] / T(w);
        }
      }
    }, {x});
  }

  // 1-D convolution over time. X is t_in x ch_in (time-major), W is
  // out_ch x (ch_in * k), bias 1 x out_ch. The input is virtually
  // zero-padded on the right by (k - stride) rows; t_in must be divisible
  // by stride so that t_out = t_in / stride.
  Id conv1d(Id x, Id w, Id b, int stride, int k) {
    const Mat<T>& xv = val(x);
    const Mat<T>& wv = val(w);
    const Mat<T>& bv = val(b);
    const int ch_in = xv.cols;
    const int out_ch = wv.rows;
    if (wv.cols != ch_in * k) throw ShapeMismatchError("conv1d: weight shape");
    if (xv.rows % stride != 0) {
      throw ShapeMismatchError("conv1d: input length not divisible by stride");
    }
    const int t_out = xv.rows / stride;
    Mat<T> out(t_out, out_ch);
    for (int i = 0; i < t_out; ++i) {
      T* orow = out.row(i);
      for (int oc = 0; oc < out_ch; ++oc) orow[oc] = bv(0, oc);
      const int base = i * stride;
      for (int j = 0; j < k; ++j) {
        const int r = base + j;
        if (r >= xv.rows) break;
        const T* xr = xv.row(r);
        for (int ci = 0; ci < ch_in; ++ci) {
          const T xval = xr[ci];
          if (xval == T(0)) continue;
          const int wc = ci * k + j;
          for (int oc = 0; oc < out_ch; ++oc) orow[oc] += xval * wv(oc, wc);
        }
      }
    }
    return push(std::move(out), any(x, w, b),
                [x, w, b, stride, k](Tape& t, Id self) {
      const Mat<T>& g = t.grad(self);
      const Mat<T>& xv = t.val(x);
      const Mat<T>& wv = t.val(w);
      const int ch_in = xv.cols;
      const int out_ch = wv.rows;
      const bool nx = t.needs_grad(x);
      const bool nw = t.needs_grad(w);
      const bool nb = t.needs_grad(b);
      Mat<T>* gx = nx ? &t.grad(x) : nullptr;
      Mat<T>* gw = nw ? &t.grad(w) : nullptr;
      Mat<T>* gb = nb ? &t.grad(b) : nullptr;
      for (int i = 0; i < g.rows; ++i) {
        const T* grow = g.row(i);
        if (nb) {
          for (int oc = 0; oc < out_ch; ++oc) (*gb)(0, oc) += grow[oc];
        }
        const int base = i * stride;
        for (int j = 0; j < k; ++j) {
          const int r = base + j;
          if (r >= xv.rows) break;
          const T* xr = xv.row(r);
          T* gxr = nx ? gx->row(r) : nullptr;
          for (int ci = 0; ci < ch_in; ++ci) {
            const int wc = ci * k + j;
            if (nw) {
              const T xval = xr[ci];
              if (xval != T(0)) {
                for (int oc = 0; oc < out_ch; ++oc)
                  (*gw)(oc, wc) += grow[oc] * xval;
              }
            }
            if (nx) {
              T acc = T(0);
              for (int oc = 0; oc < out_ch; ++oc)
                acc += grow[oc] * wv(oc, wc);
              gxr[ci] += acc;
            }
          }
        }
      }
    }, {x, w, b});
  }

  Id gather_rows(Id table, std::vector<int> idx) {
    const Mat<T>& v = val(table);
    Mat<T> out(static_cast<int>(idx.size()), v.cols);
    for (std::size_t r = 0; r < idx.size(); ++r)
      std::copy(v.row(idx[r]), v.row(idx[r]) + v.cols,
                out.row(static_cast<int>(r)));
    return push(std::move(out), any(table),
                [table, ix = std::move(idx)](Tape& t, Id self) {
      if (!t.needs_grad(table)) return;
      const Mat<T>& g = t.grad(self);
      Mat<T>& gt = t.grad(table);
      for (std::size_t r = 0; r < ix.size(); ++r) {
        const T* grow = g.row(static_cast<int>(r));
        T* trow = gt.row(ix[r]);
        for (int c = 0; c < g.cols; ++c) trow[c] += grow[c];
      }
    }, {table});
  }

  // Zeroes whole rows where mask[r] != 0. This is the in-graph form of
  // feature-sequence time masking.
  Id zero_rows(Id x, std::vector<unsigned char> mask) {
    const Mat<T>& v = val(x);
    Mat<T> out = v;
    for (int r = 0; r < v.rows; ++r) {
      if (mask[r]) std::fill(out.row(r), out.row(r) + v.cols, T(0));
    }
    return push(std::move(out), any(x),
                [x, m = std::move(mask)](Tape& t, Id self) {
      if (!t.needs_grad(x)) return;
      const Mat<T>& g = t.grad(self);
      Mat<T>& gx = t.grad(x);
      for (int r = 0; r < g.rows; ++r) {
        if (m[r]) continue;
        const T* grow = g.row(r);
        T* gxr = gx.row(r);
        for (int c = 0; c < g.cols; ++c) gxr[c] += grow[c];
      }
    }, {x});
  }

  /// Unidirectional LSTM over a whole sequence as one fused node.
  /// X: t x d_in, Wx: d_in x 4h, Wh: h x 4h, b: 1 x 4h. Returns the full
  /// hidden sequence t x h. Gate order i, f, g, o. When `reverse` is set
  /// the sequence is consumed from the end and the output stays aligned
  /// with input positions (row r is the state after consuming rows t-1..r).
  Id lstm_seq(Id x, Id wx, Id wh, Id b, bool reverse) {
    const Mat<T>& xv = val(x);
    const Mat<T>& wxv = val(wx);
    const Mat<T>& whv = val(wh);
    const Mat<T>& bv = val(b);
    const int tlen = xv.rows;
    const int h = whv.rows;
    if (wxv.cols != 4 * h || bv.cols != 4 * h) {
      throw ShapeMismatchError("lstm_seq: gate shapes");
    }
    Mat<T> gates(tlen, 4 * h);  // post-activation i,f,g,o
    Mat<T> cs(tlen, h);         // cell states (in consumption order)
    Mat<T> hs(tlen, h);         // hidden states (in consumption order)
    std::vector<T> hprev(h, T(0)), cprev(h, T(0));
    for (int step = 0; step < tlen; ++step) {
      const int r = reverse ? tlen - 1 - step : step;
      const T* xr = xv.row(r);
      T* gr = gates.row(step);
      // z = x Wx + h_prev Wh + b
      for (int j = 0; j < 4 * h; ++j) gr[j] = bv(0, j);
      for (int ci = 0; ci < xv.cols; ++ci) {
        const T xval = xr[ci];
        if (xval == T(0)) continue;
        const T* wxr = wxv.row(ci);
        for (int j = 0; j < 4 * h; ++j) gr[j] += xval * wxr[j];
      }
      for (int ci = 0; ci < h; ++ci) {
        const T hval = hprev[ci];
        if (hval == T(0)) continue;
        const T* whr = whv.row(ci);
        for (int j = 0; j < 4 * h; ++j) gr[j] += hval * whr[j];
      }
      T* cr = cs.row(step);
      T* hr = hs.row(step);
      for (int j = 0; j < h; ++j) {
        const T ig = T(1) / (T(1) + std::exp(-gr[j]));
        const T fg = T(1) / (T(1) + std::exp(-gr[h + j]));
        const T gg = std::tanh(gr[2 * h + j]);
        const T og = T(1) / (T(1) + std::exp(-gr[3 * h + j]));
        gr[j] = ig;
        gr[h + j] = fg;
        gr[2 * h + j] = gg;
        gr[3 * h + j] = og;
        cr[j] = fg * cprev[j] + ig * gg;
        hr[j] = og * std::tanh(cr[j]);
      }
      std::copy(cr, cr + h, cprev.begin());
      std::copy(hr, hr + h, hprev.begin());
    }
    Mat<T> out(tlen, h);
    for (int step = 0; step < tlen; ++step) {
      const int r = reverse ? tlen - 1 - step : step;
      std::copy(hs.row(step), hs.row(step) + h, out.row(r));
    }
    Id id = push(std::move(out), any4(x, wx, wh, b), nullptr, {x, wx, wh, b});
    if (!nodes_[id].needs) return id;
    nodes_[id].back = [x, wx, wh, b, reverse, g8 = std::move(gates),
                       cseq = std::move(cs), hseq = std::move(hs)](
                          Tape& t, Id self) {
      const Mat<T>& gout = t.grad(self);
      const Mat<T>& xv = t.val(x);
      const Mat<T>& wxv = t.val(wx);
      const Mat<T>& whv = t.val(wh);
      const int tlen = xv.rows;
      const int h = whv.rows;
      const bool nx = t.needs_grad(x);
      const bool nwx = t.needs_grad(wx);
      const bool nwh = t.needs_grad(wh);
      const bool nb = t.needs_grad(b);
      Mat<T>* gx = nx ? &t.grad(x) : nullptr;
      Mat<T>* gwx = nwx ? &t.grad(wx) : nullptr;
      Mat<T>* gwh = nwh ? &t.grad(wh) : nullptr;
      Mat<T>* gb = nb ? &t.grad(b) : nullptr;
      std::vector<T> dh(h, T(0)), dc(h, T(0)), dz(4 * h);
      for (int step = tlen - 1; step >= 0; --step) {
        const int r = reverse ? tlen - 1 - step : step;
        const T* grow = gout.row(r);
        for (int j = 0; j < h; ++j) dh[j] += grow[j];
        const T* gr = g8.row(step);
        const T* cr = cseq.row(step);
        const T* cprev = step > 0 ? cseq.row(step - 1) : nullptr;
        const T* hprev = step > 0 ? hseq.row(step - 1) : nullptr;
        for (int j = 0; j < h; ++j) {
          const T ig = gr[j], fg = gr[h + j], gg = gr[2 * h + j],
                  og = gr[3 * h + j];
          const T tc = std::tanh(cr[j]);
          const T dcj = dc[j] + dh[j] * og * (T(1) - tc * tc);
          const T doj = dh[j] * tc;
          const T dij = dcj * gg;
          const T dgj = dcj * ig;
          const T dfj = cprev ? dcj * cprev[j] : T(0);
          dz[j] = dij * ig * (T(1) - ig);
          dz[h + j] = dfj * fg * (T(1) - fg);
          dz[2 * h + j] = dgj * (T(1) - gg * gg);
          dz[3 * h + j] = doj * og * (T(1) - og);
          dc[j] = dcj * fg;
          dh[j] = T(0);
        }
        if (nb) {
          for (int j = 0; j < 4 * h; ++j) (*gb)(0, j) += dz[j];
        }
        const T* xr = xv.row(r);
        if (nwx) {
          for (int ci = 0; ci < xv.cols; ++ci) {
            const T xval = xr[ci];
            if (xval == T(0)) continue;
            T* wr = gwx->row(ci);
            for (int j = 0; j < 4 * h; ++j) wr[j] += xval * dz[j];
          }
        }
        if (nx) {
          T* gxr = gx->row(r);
          for (int ci = 0; ci < xv.cols; ++ci) {
            const T* wxr = wxv.row(ci);
            T acc = T(0);
            for (int j = 0; j < 4 * h; ++j) acc += wxr[j] * dz[j];
            gxr[ci] += acc;
          }
        }
        if (hprev) {
          if (nwh) {
            for (int ci = 0; ci < h; ++ci) {
              const T hval = hprev[ci];
              if (hval == T(0)) continue;
              T* wr = gwh->row(ci);
              for (int j = 0; j < 4 * h; ++j) wr[j] += hval * dz[j];
            }
          }
          for (int ci = 0; ci < h; ++ci) {
            const T* whr = whv.row(ci);
            T acc = T(0);
            for (int j = 0; j < 4 * h; ++j) acc += whr[j] * dz[j];
            dh[ci] += acc;
          }
        }
      }
    };
    return id;
  }

  // Cross-entropy from logits (1 x C) against an integer label; returns 1x1.
  Id ce_logits(Id logits, int label) {
    const Mat<T>& z = val(logits);
    const int C = z.cols;
    T mx = z(0, 0);
    for (int c = 1; c < C; ++c) mx = std::max(mx, z(0, c));
    T sum = T(0);
    for (int c = 0; c < C; ++c) sum += std::exp(z(0, c) - mx);
    Mat<T> out(1, 1);
    out(0, 0) = mx + std::log(sum) - z(0, label);
    return push(std::move(out), any(logits), [logits, label](Tape& t, Id self) {
      if (!t.needs_grad(logits)) return;
      const T g = t.grad(self)(0, 0);
      const Mat<T>& z = t.val(logits);
      Mat<T>& gz = t.grad(logits);
      const int C = z.cols;
      T mx = z(0, 0);
      for (int c = 1; c < C; ++c) mx = std::max(mx, z(0, c));
      T sum = T(0);
      for (int c = 0; c < C; ++c) sum += std::exp(z(0, c) - mx);
      for (int c = 0; c < C; ++c) {
        const T p = std::exp(z(0, c) - mx) / sum;
        gz(0, c) += g * (p - (c == label ? T(1) : T(0)));
      }
    }, {logits});
  }

  // Mean over all elements of (x - y)^2; returns 1x1.
  Id mse_mean(Id x, Id y) {
    const Mat<T>& xv = val(x);
    const Mat<T>& yv = val(y);
    if (!xv.same_shape(yv)) throw ShapeMismatchError("mse_mean: shape mismatch");
    T acc = T(0);
    for (std::size_t i = 0; i < xv.a.size(); ++i) {
      const T d = xv.a[i] - yv.a[i];
      acc += d * d;
    }
    Mat<T> out(1, 1);
    out(0, 0) = acc / T(xv.a.size());
    return push(std::move(out), any(x, y), [x, y](Tape& t, Id self) {
      const T g = t.grad(self)(0, 0);
      const Mat<T>& xv = t.val(x);
      const Mat<T>& yv = t.val(y);
      const T s = T(2) * g / T(xv.a.size());
      if (t.needs_grad(x)) {
        Mat<T>& gx = t.grad(x);
        for (std::size_t i = 0; i < xv.a.size(); ++i)
          gx.a[i] += s * (xv.a[i] - yv.a[i]);
      }
      if (t.needs_grad(y)) {
        Mat<T>& gy = t.grad(y);
        for (std::size_t i = 0; i < xv.a.size(); ++i)
          gy.a[i] -= s * (xv.a[i] - yv.a[i]);
      }
    }, {x, y});
  }

  // Weighted sum of scalar nodes; returns 1x1.
  Id weighted_sum(std::vector<Id> xs, std::vector<T> ws) {
    Mat<T> out(1, 1);
    bool needs = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out(0, 0) += ws[i] * val(xs[i])(0, 0);
      needs = needs || needs_grad(xs[i]);
    }
    std::vector<Id> parents = xs;
    return push(std::move(out), needs,
                [xv = std::move(xs), wv = std::move(ws)](Tape& t, Id self) {
      const T g = t.grad(self)(0, 0);
      for (std::size_t i = 0; i < xv.size(); ++i) {
        if (t.needs_grad(xv[i])) t.grad(xv[i])(0, 0) += g * wv[i];
      }
    }, parents);
  }

 private:
  struct Node {
    Mat<T> val;
    Mat<T> grad;
    bool has_grad = false;
    bool needs = false;
    std::function<void(Tape&, Id)> back;
    Mat<T>* sink = nullptr;
  };

  bool any(Id a) const { return needs_grad(a); }
  bool any(Id a, Id b) const { return needs_grad(a) || needs_grad(b); }
  bool any(Id a, Id b, Id c) const { return any(a, b) || needs_grad(c); }
  bool any4(Id a, Id b, Id c, Id d) const { return any(a, b, c) || needs_grad(d); }

  Id push(Mat<T> v, bool needs, std::function<void(Tape&, Id)> back,
          const std::vector<Id>& /*parents*/) {
    Node n;
    n.val = std::move(v);
    n.needs = needs;
    if (needs) n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size()) - 1;
  }

  std::vector<Node> nodes_;
};

}  // namespace hgs

#endif  // HGS_TAPE_HPP_
