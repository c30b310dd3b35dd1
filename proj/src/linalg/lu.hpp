// Dense complex LU with partial pivoting. Factors can be held in single
// precision (the mixed-precision path); solves always return double-precision
// results.
#pragma once

#include <complex>
#include <vector>

#include "linalg/blocks.hpp"

namespace spslice {

enum class FactorStatus { Ok, Singular, PrecisionLoss };

class LuFactor {
public:
  /// Factorizes a copy of `a` (n x n). With `single_precision` the factors are
  /// stored and the triangular solves run in complex<float>.
  FactorStatus factorize(const BlockC& a, bool single_precision);

  /// In-place solve of A X = RHS (or A^H X = RHS) for k columns.
  void solve(cplx* rhs, int k, bool adjoint) const;

  int n() const { return n_; }
  bool single() const { return single_; }

private:
  template <class CT>
  static FactorStatus factorize_impl(std::vector<CT>& lu, std::vector<int>& piv, int n);
  template <class CT>
  void solve_impl(const std::vector<CT>& lu, cplx* rhs, int k, bool adjoint) const;

  int n_ = 0;
  bool single_ = false;
  std::vector<std::complex<float>> lu_f_;
  std::vector<cplx> lu_d_;
  std::vector<int> piv_; // row swapped with i at elimination step i
};

} // namespace spslice
