// Column-major dense storage, real or complex, with optional triangular
// input that can be mirrored into a full matrix.
#pragma once

#include <stdexcept>
#include <vector>

#include "core/types.hpp"

namespace spslice {

template <class T>
struct Dense {
  int n = 0;
  Uplo uplo = Uplo::Full;
  std::vector<T> values; // n*n, column-major; unreferenced triangle arbitrary

  Dense() = default;
  Dense(int n_, Uplo u = Uplo::Full) : n(n_), uplo(u), values(static_cast<size_t>(n_) * n_) {}

  T& at(int i, int j) { return values[static_cast<size_t>(j) * n + i]; }
  const T& at(int i, int j) const { return values[static_cast<size_t>(j) * n + i]; }
};

using DenseReal = Dense<double>;
using DenseComplex = Dense<cplx>;

namespace detail {
inline double mirror_entry(double v, bool) { return v; }
inline cplx mirror_entry(const cplx& v, bool conjugate) { return conjugate ? std::conj(v) : v; }
}

/// Mirrors the stored triangle across the diagonal (conjugating for Hermitian
/// structure). Full input is returned unchanged; idempotent.
template <class T>
Dense<T> expand_uplo(const Dense<T>& m, Structure structure) {
  if (m.uplo == Uplo::Full) return m;
  const bool conj = structure == Structure::ComplexHermitian;
  Dense<T> out(m.n, Uplo::Full);
  for (int j = 0; j < m.n; ++j) {
    for (int i = 0; i < m.n; ++i) {
      const bool stored = (m.uplo == Uplo::Lower) ? (i >= j) : (i <= j);
      if (stored)
        out.at(i, j) = m.at(i, j);
      else
        out.at(i, j) = detail::mirror_entry(m.at(j, i), conj);
    }
  }
  if constexpr (std::is_same_v<T, cplx>) {
    if (conj) // a Hermitian diagonal is real by definition
      for (int i = 0; i < m.n; ++i) out.at(i, i) = cplx(out.at(i, i).real(), 0.0);
  }
  return out;
}

/// Promote a real matrix to complex storage (drivers for real general
/// problems run in complex arithmetic).
inline DenseComplex to_complex(const DenseReal& m) {
  DenseComplex out(m.n, m.uplo);
  for (size_t k = 0; k < m.values.size(); ++k) out.values[k] = cplx(m.values[k], 0.0);
  return out;
}

inline const DenseComplex& to_complex(const DenseComplex& m) { return m; }

} // namespace spslice
