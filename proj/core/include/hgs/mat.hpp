// core/include/hgs/mat.hpp

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

#ifndef HGS_MAT_HPP_
#define HGS_MAT_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "hgs/errors.hpp"

namespace hgs {

/// Dense row-major matrix. Row vectors are 1xN, column vectors Nx1.
template <typename T>
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, T(0)) {}
  Mat(int r, int c, T fill)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  std::size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }

  T* data() { return a.data(); }
  const T* data() const { return a.data(); }
  T* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
  const T* row(int r) const {
    return a.data() + static_cast<std::size_t>(r) * cols;
  }

  T& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  T operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }

  void fill(T v) { std::fill(a.begin(), a.end(), v); }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  bool all_finite() const {
    for (T v : a) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }

  template <typename U>
  Mat<U> cast() const {
    Mat<U> out(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = static_cast<U>(a[i]);
    return out;
  }
};

// out += A * B
template <typename T>
void gemm_acc(const Mat<T>& A, const Mat<T>& B, Mat<T>& out) {
  if (A.cols != B.rows || out.rows != A.rows || out.cols != B.cols) {
    throw ShapeMismatchError("gemm: incompatible shapes");
  }
  const int m = A.rows, k = A.cols, n = B.cols;
  for (int i = 0; i < m; ++i) {
    const T* ai = A.row(i);
    T* oi = out.row(i);
    for (int p = 0; p < k; ++p) {
      const T av = ai[p];
      if (av == T(0)) continue;
      const T* bp = B.row(p);
      for (int j = 0; j < n; ++j) oi[j] += av * bp[j];
    }
  }
}

template <typename T>
Mat<T> matmul(const Mat<T>& A, const Mat<T>& B) {
  Mat<T> out(A.rows, B.cols);
  gemm_acc(A, B, out);
  return out;
}

// out += A^T * B
template <typename T>
void gemm_tn_acc(const Mat<T>& A, const Mat<T>& B, Mat<T>& out) {
  if (A.rows != B.rows || out.rows != A.cols || out.cols != B.cols) {
    throw ShapeMismatchError("gemm_tn: incompatible shapes");
  }
  for (int p = 0; p < A.rows; ++p) {
    const T* ap = A.row(p);
    const T* bp = B.row(p);
    for (int i = 0; i < A.cols; ++i) {
      const T av = ap[i];
      if (av == T(0)) continue;
      T* oi = out.row(i);
      for (int j = 0; j < B.cols; ++j) oi[j] += av * bp[j];
    }
  }
}

// out += A * B^T
template <typename T>
void gemm_nt_acc(const Mat<T>& A, const Mat<T>& B, Mat<T>& out) {
  if (A.cols != B.cols || out.rows != A.rows || out.cols != B.rows) {
    throw ShapeMismatchError("gemm_nt: incompatible shapes");
  }
  for (int i = 0; i < A.rows; ++i) {
    const T* ai = A.row(i);
    T* oi = out.row(i);
    for (int j = 0; j < B.rows; ++j) {
      const T* bj = B.row(j);
      T acc = T(0);
      for (int p = 0; p < A.cols; ++p) acc += ai[p] * bj[p];
      oi[j] += acc;
    }
  }
}

template <typename T>
Mat<T> transpose(const Mat<T>& x) {
  Mat<T> out(x.cols, x.rows);
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c) out(c, r) = x(r, c);
  return out;
}

template <typename T>
void axpy(T alpha, const Mat<T>& x, Mat<T>& y) {
  if (!x.same_shape(y)) throw ShapeMismatchError("axpy: shape mismatch");
  for (std::size_t i = 0; i < x.a.size(); ++i) y.a[i] += alpha * x.a[i];
}

}  // namespace hgs

#endif  // HGS_MAT_HPP_
