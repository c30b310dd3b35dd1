#include "linalg/reduced_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linalg/lu.hpp"

namespace spslice {

namespace {

inline double re_of(double v) { return v; }
inline double re_of(const cplx& v) { return v.real(); }
inline double conj_or_id(double v) { return v; }
inline cplx conj_or_id(const cplx& v) { return std::conj(v); }
inline double phase_of(double g) { return g >= 0 ? 1.0 : -1.0; }
inline cplx phase_of(const cplx& g) { return g / std::abs(g); }

// In-place lower Cholesky; false when a pivot is not safely positive.
template <class T>
bool cholesky(Block<T>& a) {
  const int m = a.rows;
  double max_diag = 0.0;
  for (int i = 0; i < m; ++i) max_diag = std::max(max_diag, std::abs(re_of(a.at(i, i))));
  for (int j = 0; j < m; ++j) {
    double d = re_of(a.at(j, j));
    for (int k = 0; k < j; ++k) d -= std::norm(a.at(j, k));
    if (!(d > max_diag * 1e-14 * m) && !(d > 0 && max_diag == 0.0)) return false;
    const double ljj = std::sqrt(d);
    a.at(j, j) = T(ljj);
    for (int i = j + 1; i < m; ++i) {
      T s = a.at(i, j);
      for (int k = 0; k < j; ++k) s -= a.at(i, k) * conj_or_id(a.at(j, k));
      a.at(i, j) = s / ljj;
    }
    for (int i = 0; i < j; ++i) a.at(i, j) = T{};
  }
  return true;
}

// Cyclic Jacobi for a Hermitian matrix; eigenvectors accumulate into v.
template <class T>
void jacobi_hermitian(Block<T>& c, Block<T>& v) {
  const int m = c.rows;
  v.resize(m, m);
  for (int i = 0; i < m; ++i) v.at(i, i) = T(1);
  if (m == 1) return;
  const double fnorm = blk::frobenius(c);
  if (fnorm == 0.0) return;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int q = 1; q < m; ++q)
      for (int p = 0; p < q; ++p) off += std::norm(c.at(p, q));
    if (std::sqrt(off) <= 1e-15 * fnorm) break;
    for (int q = 1; q < m; ++q) {
      for (int p = 0; p < q; ++p) {
        const T g = c.at(p, q);
        const double ag = std::abs(g);
        if (ag == 0.0) continue;
        const double alpha = re_of(c.at(p, p));
        const double beta = re_of(c.at(q, q));
        const double tau = (beta - alpha) / (2.0 * ag);
        double t;
        if (std::abs(tau) > 1e150)
          t = 1.0 / (2.0 * tau);
        else
          t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        const T u = phase_of(g);
        // C <- J^H C J with J(p,p)=c, J(p,q)=s*u, J(q,p)=-s*conj(u), J(q,q)=c.
        for (int i = 0; i < m; ++i) {
          const T cip = c.at(i, p), ciq = c.at(i, q);
          c.at(i, p) = cs * cip - sn * conj_or_id(u) * ciq;
          c.at(i, q) = sn * u * cip + cs * ciq;
        }
        for (int j = 0; j < m; ++j) {
          const T cpj = c.at(p, j), cqj = c.at(q, j);
          c.at(p, j) = cs * cpj - sn * u * cqj;
          c.at(q, j) = sn * conj_or_id(u) * cpj + cs * cqj;
        }
        for (int i = 0; i < m; ++i) {
          const T vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = cs * vip - sn * conj_or_id(u) * viq;
          v.at(i, q) = sn * u * vip + cs * viq;
        }
      }
    }
  }
}

} // namespace

template <class T>
bool reduced_hermitian_eig(const Block<T>& aq, const Block<T>& bq, std::vector<double>& lambda,
                           Block<T>& phi) {
  const int m = aq.rows;
  Block<T> l = bq;
  if (!cholesky(l)) return false;

  // C = L^{-1} Aq L^{-H}, formed in two triangular solves.
  Block<T> w = aq; // w := L^{-1} Aq
  for (int j = 0; j < m; ++j) {
    T* col = w.col(j);
    for (int i = 0; i < m; ++i) {
      T s = col[i];
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * col[k];
      col[i] = s / l.at(i, i);
    }
  }
  Block<T> c(m, m); // c := w L^{-H}  (solved row-wise: c L^H = w)
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      T s = w.at(i, j);
      for (int k = 0; k < j; ++k) s -= c.at(i, k) * conj_or_id(l.at(j, k));
      c.at(i, j) = s / l.at(j, j);
    }
  }

  Block<T> v;
  jacobi_hermitian(c, v);
  lambda.resize(m);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) diag[i] = re_of(c.at(i, i));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return diag[a] < diag[b]; });

  // phi = L^{-H} v, columns in ascending-eigenvalue order.
  phi.resize(m, m);
  for (int j = 0; j < m; ++j) {
    lambda[j] = diag[order[j]];
    const T* src = v.col(order[j]);
    T* dst = phi.col(j);
    std::copy(src, src + m, dst);
    for (int i = m - 1; i >= 0; --i) {
      T s = dst[i];
      for (int k = i + 1; k < m; ++k) s -= conj_or_id(l.at(k, i)) * dst[k];
      dst[i] = s / l.at(i, i);
    }
  }
  return true;
}

template bool reduced_hermitian_eig<double>(const Block<double>&, const Block<double>&,
                                            std::vector<double>&, Block<double>&);
template bool reduced_hermitian_eig<cplx>(const Block<cplx>&, const Block<cplx>&,
                                          std::vector<double>&, Block<cplx>&);

namespace {

struct Givens {
  double c = 1.0;
  cplx s{0.0, 0.0};
};

Givens make_givens(cplx f, cplx g) {
  Givens rot;
  const double af = std::abs(f), ag = std::abs(g);
  if (ag == 0.0) return rot;
  const double d = std::hypot(af, ag);
  if (af == 0.0) {
    rot.c = 0.0;
    rot.s = std::conj(g) / ag;
  } else {
    rot.c = af / d;
    rot.s = (f / af) * std::conj(g) / d;
  }
  return rot;
}

// H <- G H on rows (k, k+1), columns j0..j1 inclusive.
void rot_rows(BlockC& h, int k, const Givens& g, int j0, int j1) {
  for (int j = j0; j <= j1; ++j) {
    const cplx a = h.at(k, j), b = h.at(k + 1, j);
    h.at(k, j) = g.c * a + g.s * b;
    h.at(k + 1, j) = -std::conj(g.s) * a + g.c * b;
  }
}

// H <- H G^H on columns (k, k+1), rows i0..i1 inclusive.
void rot_cols(BlockC& h, int k, const Givens& g, int i0, int i1) {
  for (int i = i0; i <= i1; ++i) {
    const cplx a = h.at(i, k), b = h.at(i, k + 1);
    h.at(i, k) = a * g.c + b * std::conj(g.s);
    h.at(i, k + 1) = -a * g.s + b * g.c;
  }
}

// Reduce C to upper Hessenberg by Householder similarity; U accumulates the
// transform (C = U H U^H on exit, U unitary).
void hessenberg(BlockC& h, BlockC& u) {
  const int m = h.rows;
  u.resize(m, m);
  for (int i = 0; i < m; ++i) u.at(i, i) = 1.0;
  std::vector<cplx> v(m);
  for (int k = 0; k + 2 < m; ++k) {
    double normx = 0.0;
    for (int i = k + 1; i < m; ++i) normx += std::norm(h.at(i, k));
    normx = std::sqrt(normx);
    if (normx == 0.0) continue;
    const cplx x0 = h.at(k + 1, k);
    const cplx phase = (std::abs(x0) == 0.0) ? cplx(1.0, 0.0) : x0 / std::abs(x0);
    const cplx mu = -phase * normx;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < m; ++i) {
      v[i] = h.at(i, k) - ((i == k + 1) ? mu : cplx(0.0, 0.0));
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) continue;
    const double tau = 2.0 / vnorm2;
    // Left: H <- (I - tau v v^H) H.
    for (int j = k; j < m; ++j) {
      cplx dot{};
      for (int i = k + 1; i < m; ++i) dot += std::conj(v[i]) * h.at(i, j);
      dot *= tau;
      for (int i = k + 1; i < m; ++i) h.at(i, j) -= dot * v[i];
    }
    // Right: H <- H (I - tau v v^H).
    for (int i = 0; i < m; ++i) {
      cplx dot{};
      for (int j = k + 1; j < m; ++j) dot += h.at(i, j) * v[j];
      dot *= tau;
      for (int j = k + 1; j < m; ++j) h.at(i, j) -= dot * std::conj(v[j]);
    }
    for (int i = 0; i < m; ++i) {
      cplx dot{};
      for (int j = k + 1; j < m; ++j) dot += u.at(i, j) * v[j];
      dot *= tau;
      for (int j = k + 1; j < m; ++j) u.at(i, j) -= dot * std::conj(v[j]);
    }
  }
}

cplx wilkinson_shift(const BlockC& h, int hi) {
  const cplx a = h.at(hi - 1, hi - 1), b = h.at(hi - 1, hi);
  const cplx c = h.at(hi, hi - 1), d = h.at(hi, hi);
  const cplx tr = a + d;
  const cplx det = a * d - b * c;
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx m1 = 0.5 * (tr + disc), m2 = 0.5 * (tr - disc);
  return (std::abs(m1 - d) < std::abs(m2 - d)) ? m1 : m2;
}

// Shifted QR on the Hessenberg matrix, Schur vectors accumulated into U.
// Returns false when the iteration budget is exhausted.
bool schur_qr(BlockC& h, BlockC& u, int max_total_sweeps) {
  const int m = h.rows;
  if (m == 1) return true;
  const double tol = 1e-14 * std::max(blk::frobenius(h), 1e-300);
  int hi = m - 1;
  int total = 0;
  int stalled = 0;
  while (hi > 0) {
    if (std::abs(h.at(hi, hi - 1)) <= tol) {
      h.at(hi, hi - 1) = 0.0;
      --hi;
      stalled = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && std::abs(h.at(lo, lo - 1)) > tol) --lo;
    if (++total > max_total_sweeps) return false;
    cplx mu = wilkinson_shift(h, hi);
    if (++stalled % 16 == 0) mu = h.at(hi, hi) + 0.75 * std::abs(h.at(hi, hi - 1));
    cplx x = h.at(lo, lo) - mu;
    cplx z = h.at(lo + 1, lo);
    for (int k = lo; k < hi; ++k) {
      const Givens g = make_givens(x, z);
      rot_rows(h, k, g, std::max(lo, k - 1), m - 1);
      rot_cols(h, k, g, 0, std::min(hi, k + 2));
      rot_cols(u, k, g, 0, m - 1);
      if (k + 2 <= hi) {
        x = h.at(k + 1, k);
        z = h.at(k + 2, k);
      }
    }
  }
  return true;
}

// Unit-norm eigenvector of the triangular factor for eigenvalue at `idx`,
// then mapped through U. Right: (T - lambda) y = 0; left: rows of T.
void triangular_right_vector(const BlockC& t, const BlockC& u, int idx, cplx* out) {
  const int m = t.rows;
  const double tiny = 1e-30 + 1e-16 * blk::frobenius(t);
  std::vector<cplx> y(m, cplx(0.0, 0.0));
  y[idx] = 1.0;
  const cplx lam = t.at(idx, idx);
  for (int k = idx - 1; k >= 0; --k) {
    cplx s{};
    for (int j = k + 1; j <= idx; ++j) s += t.at(k, j) * y[j];
    cplx den = t.at(k, k) - lam;
    if (std::abs(den) < tiny) den = tiny;
    y[k] = -s / den;
  }
  for (int i = 0; i < m; ++i) {
    cplx s{};
    for (int j = 0; j <= idx; ++j) s += u.at(i, j) * y[j];
    out[i] = s;
  }
}

void triangular_left_vector(const BlockC& t, const BlockC& u, int idx, cplx* out) {
  const int m = t.rows;
  const double tiny = 1e-30 + 1e-16 * blk::frobenius(t);
  std::vector<cplx> w(m, cplx(0.0, 0.0));
  w[idx] = 1.0;
  const cplx lam_c = std::conj(t.at(idx, idx));
  for (int k = idx + 1; k < m; ++k) {
    cplx s{};
    for (int j = idx; j < k; ++j) s += std::conj(t.at(j, k)) * w[j];
    cplx den = std::conj(t.at(k, k)) - lam_c;
    if (std::abs(den) < tiny) den = tiny;
    w[k] = -s / den;
  }
  for (int i = 0; i < m; ++i) {
    cplx s{};
    for (int j = idx; j < m; ++j) s += u.at(i, j) * w[j];
    out[i] = s;
  }
}

void fix_phase_and_normalize(cplx* x, int n) {
  double nrm = blk::norm2(x, n);
  if (nrm == 0.0) return;
  int imax = 0;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  const cplx phase = x[imax] / std::abs(x[imax]);
  const cplx scale = std::conj(phase) / nrm;
  for (int i = 0; i < n; ++i) x[i] *= scale;
}

} // namespace

ReducedStatus reduced_general_eig(const BlockC& aq, const BlockC& bq, bool want_left,
                                  GeneralReducedEig& out) {
  const int m = aq.rows;
  out = GeneralReducedEig{};
  LuFactor blu;
  if (blu.factorize(bq, false) != FactorStatus::Ok) return ReducedStatus::SingularB;

  BlockC h = aq; // h := Bq^{-1} Aq
  blu.solve(h.data.data(), m, false);

  BlockC u;
  hessenberg(h, u);
  if (!schur_qr(h, u, 60 * m)) return ReducedStatus::NoConvergence;

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const cplx va = h.at(a, a), vb = h.at(b, b);
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });

  out.values.resize(m);
  out.right.resize(m, m);
  if (want_left) out.left.resize(m, m);
  for (int j = 0; j < m; ++j) {
    const int idx = order[j];
    out.values[j] = h.at(idx, idx);
    triangular_right_vector(h, u, idx, out.right.col(j));
    fix_phase_and_normalize(out.right.col(j), m);
    if (want_left) {
      triangular_left_vector(h, u, idx, out.left.col(j));
      // Left vector of the pencil: Bq^{-H} (left vector of Bq^{-1} Aq).
      blu.solve(out.left.col(j), 1, true);
      fix_phase_and_normalize(out.left.col(j), m);
    }
  }

  if (want_left) {
    // Scale left columns so that left^H Bq right = I.
    BlockC bx;
    blk::combine(bq, out.right, bx);
    for (int j = 0; j < m; ++j) {
      const cplx d = blk::dot_conj(out.left.col(j), bx.col(j), m);
      if (std::abs(d) < 1e-12) {
        out.binormalized = false;
        continue;
      }
      const cplx scale = 1.0 / std::conj(d);
      cplx* yl = out.left.col(j);
      for (int i = 0; i < m; ++i) yl[i] *= scale;
    }
  }
  return ReducedStatus::Ok;
}

void polynomial_linearize(const std::vector<BlockC>& coeffs, BlockC& ca, BlockC& cb) {
  const int p = static_cast<int>(coeffs.size()) - 1;
  const int m = coeffs[0].rows;
  const int pm = p * m;
  ca.resize(pm, pm);
  cb.resize(pm, pm);
  for (int blkrow = 0; blkrow + 1 < p; ++blkrow)
    for (int i = 0; i < m; ++i) ca.at(blkrow * m + i, (blkrow + 1) * m + i) = 1.0;
  for (int l = 0; l < p; ++l)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) ca.at((p - 1) * m + i, l * m + j) = -coeffs[l].at(i, j);
  for (int i = 0; i < (p - 1) * m; ++i) cb.at(i, i) = 1.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) cb.at((p - 1) * m + i, (p - 1) * m + j) = coeffs[p].at(i, j);
}

} // namespace spslice
