// Small column-major matrix blocks and the handful of dense operations the
// solver needs. Sizes here are n x m0 or m0 x m0, so plain loops are fine.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "core/types.hpp"

namespace spslice {

template <class T>
struct Block {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  Block() = default;
  Block(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}

  void resize(int r, int c) {
    rows = r;
    cols = c;
    data.assign(static_cast<size_t>(r) * c, T{});
  }
  void zero() { std::fill(data.begin(), data.end(), T{}); }

  T* col(int j) { return data.data() + static_cast<size_t>(j) * rows; }
  const T* col(int j) const { return data.data() + static_cast<size_t>(j) * rows; }
  T& at(int i, int j) { return data[static_cast<size_t>(j) * rows + i]; }
  const T& at(int i, int j) const { return data[static_cast<size_t>(j) * rows + i]; }
};

using BlockC = Block<cplx>;
using BlockR = Block<double>;

namespace blk {

inline double conj_mul(double a, double b) { return a * b; }
inline cplx conj_mul(const cplx& a, const cplx& b) { return std::conj(a) * b; }

template <class T>
T dot_conj(const T* x, const T* y, int n) {
  T s{};
  for (int i = 0; i < n; ++i) s += conj_mul(x[i], y[i]);
  return s;
}

template <class T>
double norm2(const T* x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::norm(x[i]);
  return std::sqrt(s);
}
inline double norm2(const double* x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

template <class T>
void axpy(int n, T a, const T* x, T* y) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

template <class T>
double frobenius(const Block<T>& a) {
  double s = 0.0;
  for (const auto& v : a.data) s += std::norm(v);
  return std::sqrt(s);
}

/// G = X^H Y (or X^T Y when `conjugate` is false).
template <class T>
void project(const Block<T>& x, const Block<T>& y, Block<T>& g, bool conjugate = true) {
  g.resize(x.cols, y.cols);
  for (int j = 0; j < y.cols; ++j) {
    for (int i = 0; i < x.cols; ++i) {
      T s{};
      const T* xi = x.col(i);
      const T* yj = y.col(j);
      if (conjugate)
        for (int r = 0; r < x.rows; ++r) s += conj_mul(xi[r], yj[r]);
      else
        for (int r = 0; r < x.rows; ++r) s += xi[r] * yj[r];
      g.at(i, j) = s;
    }
  }
}

/// Y = X * G.
template <class T>
void combine(const Block<T>& x, const Block<T>& g, Block<T>& y) {
  y.resize(x.rows, g.cols);
  y.zero();
  for (int j = 0; j < g.cols; ++j) {
    T* yj = y.col(j);
    for (int k = 0; k < x.cols; ++k) {
      const T gkj = g.at(k, j);
      if (gkj == T{}) continue;
      const T* xk = x.col(k);
      for (int r = 0; r < x.rows; ++r) yj[r] += xk[r] * gkj;
    }
  }
}

} // namespace blk
} // namespace spslice
