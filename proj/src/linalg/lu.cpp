#include "linalg/lu.hpp"

#include <cmath>
#include <limits>

namespace spslice {

template <class CT>
FactorStatus LuFactor::factorize_impl(std::vector<CT>& lu, std::vector<int>& piv, int n) {
  piv.resize(n);
  auto at = [&](int i, int j) -> CT& { return lu[static_cast<size_t>(j) * n + i]; };
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double m = std::abs(at(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    piv[k] = p;
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
    if (best == 0.0) return FactorStatus::Singular;
    const CT pivot = at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const CT l = at(i, k) / pivot;
      at(i, k) = l;
      if (l == CT{}) continue;
      for (int j = k + 1; j < n; ++j) at(i, j) -= l * at(k, j);
    }
  }
  return FactorStatus::Ok;
}

FactorStatus LuFactor::factorize(const BlockC& a, bool single_precision) {
  n_ = a.rows;
  single_ = single_precision;
  if (single_precision) {
    lu_f_.resize(a.data.size());
    for (size_t i = 0; i < a.data.size(); ++i) {
      lu_f_[i] = std::complex<float>(static_cast<float>(a.data[i].real()),
                                     static_cast<float>(a.data[i].imag()));
      if (!std::isfinite(lu_f_[i].real()) || !std::isfinite(lu_f_[i].imag()))
        return FactorStatus::PrecisionLoss;
    }
    lu_d_.clear();
    return factorize_impl(lu_f_, piv_, n_);
  }
  lu_d_ = a.data;
  lu_f_.clear();
  return factorize_impl(lu_d_, piv_, n_);
}

template <class CT>
void LuFactor::solve_impl(const std::vector<CT>& lu, cplx* rhs, int k, bool adjoint) const {
  const int n = n_;
  auto at = [&](int i, int j) -> const CT& { return lu[static_cast<size_t>(j) * n + i]; };
  std::vector<CT> x(n);
  for (int col = 0; col < k; ++col) {
    cplx* b = rhs + static_cast<size_t>(col) * n;
    for (int i = 0; i < n; ++i)
      x[i] = CT(static_cast<typename CT::value_type>(b[i].real()),
                static_cast<typename CT::value_type>(b[i].imag()));
    if (!adjoint) {
      // P A = L U: forward with row swaps, then back substitution.
      for (int i = 0; i < n; ++i) {
        if (piv_[i] != i) std::swap(x[i], x[piv_[i]]);
        for (int j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
      }
      for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= at(i, j) * x[j];
        x[i] /= at(i, i);
      }
    } else {
      // A^H = U^H L^H P: solve U^H w = b, L^H t = w, then undo the swaps.
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) x[i] -= std::conj(at(j, i)) * x[j];
        x[i] /= std::conj(at(i, i));
      }
      for (int i = n - 1; i >= 0; --i)
        for (int j = i + 1; j < n; ++j) x[i] -= std::conj(at(j, i)) * x[j];
      for (int i = n - 1; i >= 0; --i)
        if (piv_[i] != i) std::swap(x[i], x[piv_[i]]);
    }
    for (int i = 0; i < n; ++i) b[i] = cplx(x[i].real(), x[i].imag());
  }
}

void LuFactor::solve(cplx* rhs, int k, bool adjoint) const {
  if (single_)
    solve_impl(lu_f_, rhs, k, adjoint);
  else
    solve_impl(lu_d_, rhs, k, adjoint);
}

} // namespace spslice
