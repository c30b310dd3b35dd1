// Shared kernel internals: metric-aware Gram-Schmidt with rank truncation,
// column permutations, Ritz-value ordering.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "contour/contour.hpp"
#include "linalg/blocks.hpp"

namespace spslice::rci_detail {

template <class T>
void swap_columns(Block<T>& b, int i, int j) {
  if (i == j) return;
  T* ci = b.col(i);
  T* cj = b.col(j);
  for (int r = 0; r < b.rows; ++r) std::swap(ci[r], cj[r]);
}

template <class T>
void permute_columns(Block<T>& b, const std::vector<int>& perm) {
  Block<T> tmp(b.rows, b.cols);
  tmp.data = b.data;
  for (size_t j = 0; j < perm.size(); ++j)
    std::copy(tmp.col(perm[j]), tmp.col(perm[j]) + b.rows, b.col(static_cast<int>(j)));
}

template <class T>
void permute_values(std::vector<T>& v, const std::vector<int>& perm) {
  std::vector<T> tmp(v);
  for (size_t j = 0; j < perm.size(); ++j) v[j] = tmp[perm[j]];
}

/// Modified Gram-Schmidt with one reorthogonalization pass. When `metric` is
/// given, orthonormality is in the inner product u^H (metric columns), i.e.
/// metric must track B*q and is co-transformed; `mates` receive the same
/// elementary column operations. Columns whose remainder drops below
/// 1e-14 of their incoming norm are rank-deficient: they are swapped to the
/// end and the active width shrinks. Returns the surviving width.
template <class T>
int mgs_orthonormalize(Block<T>& q, Block<T>* metric, const std::vector<Block<T>*>& mates,
                       int m_act) {
  const int n = q.rows;
  auto metric_col = [&](int j) { return metric ? metric->col(j) : q.col(j); };
  auto col_norm = [&](int k) {
    const double v = std::real(blk::dot_conj(q.col(k), metric_col(k), n));
    return v > 0.0 ? std::sqrt(v) : 0.0;
  };

  int k = 0;
  while (k < m_act) {
    const double orig = col_norm(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const T c = blk::dot_conj(q.col(j), metric_col(k), n);
        if (c == T{}) continue;
        blk::axpy(n, -c, q.col(j), q.col(k));
        if (metric) blk::axpy(n, -c, metric->col(j), metric->col(k));
        for (auto* m : mates) blk::axpy(m->rows, -c, m->col(j), m->col(k));
      }
    }
    const double nrm = col_norm(k);
    if (nrm <= 1e-14 * orig || nrm == 0.0) {
      swap_columns(q, k, m_act - 1);
      if (metric) swap_columns(*metric, k, m_act - 1);
      for (auto* m : mates) swap_columns(*m, k, m_act - 1);
      --m_act;
      continue;
    }
    const T inv = T(1.0 / nrm);
    for (int r = 0; r < n; ++r) q.col(k)[r] *= inv;
    if (metric)
      for (int r = 0; r < n; ++r) metric->col(k)[r] *= inv;
    for (auto* m : mates)
      for (int r = 0; r < m->rows; ++r) m->col(k)[r] *= inv;
    ++k;
  }
  return m_act;
}

template <class T>
int mgs_orthonormalize(Block<T>& q, const std::vector<Block<T>*>& mates, int m_act) {
  return mgs_orthonormalize<T>(q, nullptr, mates, m_act);
}

/// Ordering permutation: inside-region values first, each group ascending by
/// (Re, Im).
template <class V>
std::vector<int> inside_first_order(const std::vector<V>& values, int m_act,
                                    const RegionClassifier& classifier, int& m_inside) {
  std::vector<int> perm(m_act);
  std::iota(perm.begin(), perm.end(), 0);
  auto key_inside = [&](int i) { return classifier.inside(cplx(values[i])) ? 0 : 1; };
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    const int ia = key_inside(a), ib = key_inside(b);
    if (ia != ib) return ia < ib;
    const cplx va(values[a]), vb(values[b]);
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });
  m_inside = 0;
  for (int i = 0; i < m_act; ++i)
    if (key_inside(perm[i]) == 0) ++m_inside;
  return perm;
}

/// Filter value sum w_j/(z_j - lambda) over the full (symmetrized) node
/// set, with guarded denominators so Ritz values sitting on a node cannot
/// blow up.
inline cplx guarded_filter_value(const ContourRule& rule, cplx lambda) {
  cplx sum{};
  for (int j = 0; j < rule.size(); ++j) {
    cplx d = rule.nodes[j] - lambda;
    const double floor = 1e-14 * (1.0 + std::abs(rule.nodes[j]));
    if (std::abs(d) < floor) d = (d == cplx{}) ? cplx(floor, 0.0) : d * (floor / std::abs(d));
    sum += rule.weights[j] / d;
    if (rule.closure == ContourRule::Closure::HalfSymmetric) {
      cplx dc = std::conj(rule.nodes[j]) - lambda;
      if (std::abs(dc) < floor)
        dc = (dc == cplx{}) ? cplx(floor, 0.0) : dc * (floor / std::abs(dc));
      sum += std::conj(rule.weights[j]) / dc;
    }
  }
  return sum;
}

/// Normalization of the residual update: dividing the correction by the
/// filter value at the Ritz value makes the per-loop damping of unwanted
/// components exactly rho(lambda_k)/rho(lambda_i). Ritz values with a weak
/// filter response (outside buffer columns) keep the plain update.
inline cplx residual_update_scale(const ContourRule& rule, cplx ritz) {
  const cplx rho = guarded_filter_value(rule, ritz);
  if (std::abs(rho) < 0.1) return cplx(1.0, 0.0);
  return cplx(1.0, 0.0) / rho;
}

inline cplx guarded_difference(cplx z, cplx lambda) {
  cplx d = z - lambda;
  const double floor = 1e-14 * (1.0 + std::abs(z));
  if (std::abs(d) < floor) d = (d == cplx{}) ? cplx(floor, 0.0) : d * (floor / std::abs(d));
  return d;
}

} // namespace spslice::rci_detail
