// Sparse and dense block multiplies. The adjoint variants compute A^H X
// without forming A^H.
#pragma once

#include "core/csr.hpp"
#include "core/dense.hpp"
#include "linalg/blocks.hpp"

namespace spslice {

enum class MulMode { Normal, ConjugateTranspose };

namespace detail {
template <class T>
T adj(const T& v) {
  if constexpr (std::is_same_v<T, double> || std::is_same_v<T, float>)
    return v;
  else
    return std::conj(v);
}
} // namespace detail

/// y(:, 0..k-1) = op(A) x(:, 0..k-1) for a full (expanded) CSR matrix.
template <class T, class S>
void csr_matvec(const Csr<T>& a, const S* x, S* y, int k, MulMode mode = MulMode::Normal) {
  const int n = a.n;
  for (int col = 0; col < k; ++col) {
    const S* xc = x + static_cast<size_t>(col) * n;
    S* yc = y + static_cast<size_t>(col) * n;
    if (mode == MulMode::Normal) {
      for (int i = 0; i < n; ++i) {
        S s{};
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
          s += a.values[p] * xc[a.col_idx[p]];
        yc[i] = s;
      }
    } else {
      for (int i = 0; i < n; ++i) yc[i] = S{};
      for (int i = 0; i < n; ++i) {
        const S xi = xc[i];
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
          yc[a.col_idx[p]] += detail::adj(a.values[p]) * xi;
      }
    }
  }
}

/// y(:, 0..k-1) = op(A) x(:, 0..k-1) for dense full storage.
template <class T, class S>
void dense_matvec(const Dense<T>& a, const S* x, S* y, int k, MulMode mode = MulMode::Normal) {
  const int n = a.n;
  for (int col = 0; col < k; ++col) {
    const S* xc = x + static_cast<size_t>(col) * n;
    S* yc = y + static_cast<size_t>(col) * n;
    for (int i = 0; i < n; ++i) yc[i] = S{};
    if (mode == MulMode::Normal) {
      for (int j = 0; j < n; ++j) {
        const S xj = xc[j];
        if (xj == S{}) continue;
        const T* ajcol = a.values.data() + static_cast<size_t>(j) * n;
        for (int i = 0; i < n; ++i) yc[i] += ajcol[i] * xj;
      }
    } else {
      for (int j = 0; j < n; ++j) {
        const T* ajcol = a.values.data() + static_cast<size_t>(j) * n;
        S s{};
        for (int i = 0; i < n; ++i) s += detail::adj(ajcol[i]) * xc[i];
        yc[j] = s;
      }
    }
  }
}

} // namespace spslice
