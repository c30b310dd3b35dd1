// Compressed sparse row storage. Row pointers and column indices are kept
// 0-based internally; file readers and the C surface convert from the 1-based
// convention used in coordinate files.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "core/types.hpp"

namespace spslice {

template <class T>
struct Csr {
  int n = 0;
  Uplo uplo = Uplo::Full;
  std::vector<int> row_ptr; // n+1, row_ptr[0] == 0
  std::vector<int> col_idx; // nnz, strictly increasing within each row
  std::vector<T> values;    // nnz

  int nnz() const { return row_ptr.empty() ? 0 : row_ptr[n]; }
};

using CsrReal = Csr<double>;
using CsrComplex = Csr<cplx>;

template <class T>
struct Triplet {
  int row = 0; // 0-based
  int col = 0;
  T value{};
};

/// Builds CSR from unordered triplets: entries are sorted row-major and
/// duplicates at the same (i, j) are summed.
template <class T>
Csr<T> csr_from_triplets(int n, std::vector<Triplet<T>> entries, Uplo uplo = Uplo::Full) {
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw std::invalid_argument("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet<T>& a, const Triplet<T>& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Csr<T> m;
  m.n = n;
  m.uplo = uplo;
  m.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (size_t k = 0; k < entries.size();) {
    size_t k2 = k;
    T sum{};
    while (k2 < entries.size() && entries[k2].row == entries[k].row &&
           entries[k2].col == entries[k].col) {
      sum += entries[k2].value;
      ++k2;
    }
    m.col_idx.push_back(entries[k].col);
    m.values.push_back(sum);
    ++m.row_ptr[static_cast<size_t>(entries[k].row) + 1];
    k = k2;
  }
  for (int i = 0; i < n; ++i) m.row_ptr[static_cast<size_t>(i) + 1] += m.row_ptr[i];
  return m;
}

/// Validates the structural CSR invariants (monotone row pointers, in-range
/// strictly increasing column indices).
template <class T>
bool csr_well_formed(const Csr<T>& m) {
  if (m.n < 0 || m.row_ptr.size() != static_cast<size_t>(m.n) + 1) return false;
  if (m.row_ptr[0] != 0) return false;
  if (m.col_idx.size() != m.values.size()) return false;
  if (m.row_ptr[m.n] != static_cast<int>(m.col_idx.size())) return false;
  for (int i = 0; i < m.n; ++i) {
    if (m.row_ptr[i] > m.row_ptr[i + 1]) return false;
    for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      if (m.col_idx[k] < 0 || m.col_idx[k] >= m.n) return false;
      if (k > m.row_ptr[i] && m.col_idx[k] <= m.col_idx[k - 1]) return false;
    }
  }
  return true;
}

namespace detail {
inline double conj_if(double v, bool) { return v; }
inline cplx conj_if(const cplx& v, bool c) { return c ? std::conj(v) : v; }
}

/// Mirrors a triangular CSR matrix into full storage, conjugating mirrored
/// entries for Hermitian structure. Full input is returned unchanged.
template <class T>
Csr<T> expand_uplo(const Csr<T>& m, Structure structure) {
  if (m.uplo == Uplo::Full) return m;
  const bool lower = m.uplo == Uplo::Lower;
  const bool conj = structure == Structure::ComplexHermitian;
  std::vector<Triplet<T>> tri;
  tri.reserve(static_cast<size_t>(m.nnz()) * 2);
  for (int i = 0; i < m.n; ++i) {
    for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      const int j = m.col_idx[k];
      const bool wrong_side = lower ? (j > i) : (j < i);
      if (wrong_side)
        throw std::invalid_argument("triangular CSR has an entry on the unreferenced side");
      tri.push_back({i, j, m.values[k]});
      if (i != j) tri.push_back({j, i, detail::conj_if(m.values[k], conj)});
    }
  }
  return csr_from_triplets(m.n, std::move(tri), Uplo::Full);
}

inline CsrComplex to_complex(const CsrReal& m) {
  CsrComplex out;
  out.n = m.n;
  out.uplo = m.uplo;
  out.row_ptr = m.row_ptr;
  out.col_idx = m.col_idx;
  out.values.resize(m.values.size());
  for (size_t k = 0; k < m.values.size(); ++k) out.values[k] = cplx(m.values[k], 0.0);
  return out;
}

inline const CsrComplex& to_complex(const CsrComplex& m) { return m; }

/// Identity pattern, used when a generalized driver is handed no mass matrix.
template <class T>
Csr<T> csr_identity(int n) {
  Csr<T> m;
  m.n = n;
  m.row_ptr.resize(static_cast<size_t>(n) + 1);
  m.col_idx.resize(n);
  m.values.assign(n, T(1));
  for (int i = 0; i <= n; ++i) m.row_ptr[i] = i;
  for (int i = 0; i < n; ++i) m.col_idx[i] = i;
  return m;
}

} // namespace spslice
