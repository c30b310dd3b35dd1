// Test-side reference computations, written independently of the library
// code paths they check: a plain cyclic-Jacobi eigensolver, an explicit-QR
// eigenvalue iteration for general matrices, tiny SVD/subspace-angle
// helpers, closed-form spectra and a brute-force contour integral.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

using cx = std::complex<double>;

struct Mat {
  int n = 0;
  std::vector<cx> a; // column-major
  Mat() = default;
  explicit Mat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_) {}
  cx& at(int i, int j) { return a[static_cast<size_t>(j) * n + i]; }
  const cx& at(int i, int j) const { return a[static_cast<size_t>(j) * n + i]; }
};

// Hermitian eigen-decomposition by cyclic Jacobi; eigenvalues ascending.
inline void hermitian_eig(Mat c, std::vector<double>& w, Mat& v) {
  const int n = c.n;
  v = Mat(n);
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int q = 1; q < n; ++q)
      for (int p = 0; p < q; ++p) off += std::norm(c.at(p, q));
    if (off < 1e-28) break;
    for (int q = 1; q < n; ++q) {
      for (int p = 0; p < q; ++p) {
        const cx g = c.at(p, q);
        if (std::abs(g) == 0.0) continue;
        const double app = c.at(p, p).real();
        const double aqq = c.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * std::abs(g));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        const cx u = g / std::abs(g);
        for (int i = 0; i < n; ++i) {
          const cx cip = c.at(i, p), ciq = c.at(i, q);
          c.at(i, p) = cs * cip - sn * std::conj(u) * ciq;
          c.at(i, q) = sn * u * cip + cs * ciq;
        }
        for (int j = 0; j < n; ++j) {
          const cx cpj = c.at(p, j), cqj = c.at(q, j);
          c.at(p, j) = cs * cpj - sn * u * cqj;
          c.at(q, j) = sn * std::conj(u) * cpj + cs * cqj;
        }
        for (int i = 0; i < n; ++i) {
          const cx vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = cs * vip - sn * std::conj(u) * viq;
          v.at(i, q) = sn * u * vip + cs * viq;
        }
      }
    }
  }
  w.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = c.at(i, i).real();
  std::stable_sort(order.begin(), order.end(), [&](int a_, int b_) { return d[a_] < d[b_]; });
  Mat vv(n);
  for (int j = 0; j < n; ++j) {
    w[j] = d[order[j]];
    for (int i = 0; i < n; ++i) vv.at(i, j) = v.at(i, order[j]);
  }
  v = vv;
}

// Generalized Hermitian pencil A x = l B x with B positive definite, via a
// test-side Cholesky reduction.
inline void generalized_hermitian_eig(const Mat& a, const Mat& b, std::vector<double>& w,
                                      Mat& v) {
  const int n = a.n;
  Mat l(n);
  for (int j = 0; j < n; ++j) {
    double d = b.at(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l.at(j, k));
    if (d <= 0) throw std::runtime_error("oracle: B not positive definite");
    l.at(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      cx s = b.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * std::conj(l.at(j, k));
      l.at(i, j) = s / l.at(j, j).real();
    }
  }
  // C = L^{-1} A L^{-H}
  Mat w1 = a;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cx s = w1.at(i, j);
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * w1.at(k, j);
      w1.at(i, j) = s / l.at(i, i).real();
    }
  Mat c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cx s = w1.at(i, j);
      for (int k = 0; k < j; ++k) s -= c.at(i, k) * std::conj(l.at(j, k));
      c.at(i, j) = s / l.at(j, j).real();
    }
  Mat y;
  hermitian_eig(c, w, y);
  // v = L^{-H} y
  v = y;
  for (int j = 0; j < n; ++j)
    for (int i = n - 1; i >= 0; --i) {
      cx s = v.at(i, j);
      for (int k = i + 1; k < n; ++k) s -= std::conj(l.at(k, i)) * v.at(k, j);
      v.at(i, j) = s / l.at(i, i).real();
    }
}

// Eigenvalues of a general complex matrix through explicit Householder-QR
// iterations with a Rayleigh shift. Slow and simple on purpose.
inline std::vector<cx> general_eigenvalues(Mat a) {
  const int n0 = a.n;
  std::vector<cx> out;
  Mat h = a;
  int n = n0;
  int guard = 0;
  while (n > 0 && ++guard < 20000) {
    if (n == 1) {
      out.push_back(h.at(0, 0));
      break;
    }
    double offn = 0.0;
    for (int j = 0; j < n - 1; ++j) offn += std::norm(h.at(n - 1, j));
    if (std::sqrt(offn) < 1e-13 * (1.0 + std::abs(h.at(n - 1, n - 1)))) {
      out.push_back(h.at(n - 1, n - 1));
      Mat h2(n - 1);
      for (int j = 0; j < n - 1; ++j)
        for (int i = 0; i < n - 1; ++i) h2.at(i, j) = h.at(i, j);
      h = h2;
      --n;
      continue;
    }
    const cx mu = h.at(n - 1, n - 1) + ((guard % 37 == 0) ? cx(0.1, 0.1) : cx(0.0, 0.0));
    // QR factorization of (h - mu I) by Householder, then RQ + mu I.
    Mat r = h;
    for (int i = 0; i < n; ++i) r.at(i, i) -= mu;
    std::vector<std::vector<cx>> vs;
    for (int k = 0; k < n - 1; ++k) {
      double nx = 0.0;
      for (int i = k; i < n; ++i) nx += std::norm(r.at(i, k));
      nx = std::sqrt(nx);
      if (nx == 0.0) {
        vs.push_back({});
        continue;
      }
      const cx x0 = r.at(k, k);
      const cx ph = std::abs(x0) == 0.0 ? cx(1, 0) : x0 / std::abs(x0);
      std::vector<cx> v(n, cx(0, 0));
      double vn2 = 0.0;
      for (int i = k; i < n; ++i) v[i] = r.at(i, k);
      v[k] += ph * nx;
      for (int i = k; i < n; ++i) vn2 += std::norm(v[i]);
      if (vn2 == 0.0) {
        vs.push_back({});
        continue;
      }
      for (int j = k; j < n; ++j) {
        cx dot(0, 0);
        for (int i = k; i < n; ++i) dot += std::conj(v[i]) * r.at(i, j);
        dot *= 2.0 / vn2;
        for (int i = k; i < n; ++i) r.at(i, j) -= dot * v[i];
      }
      vs.push_back(v);
    }
    // h := R Q + mu I, applying the stored reflectors from the right.
    for (int k = 0; k < n - 1; ++k) {
      const auto& v = vs[k];
      if (v.empty()) continue;
      double vn2 = 0.0;
      for (const auto& e : v) vn2 += std::norm(e);
      for (int i = 0; i < n; ++i) {
        cx dot(0, 0);
        for (int j = k; j < n; ++j) dot += r.at(i, j) * v[j];
        dot *= 2.0 / vn2;
        for (int j = k; j < n; ++j) r.at(i, j) -= dot * std::conj(v[j]);
      }
    }
    for (int i = 0; i < n; ++i) r.at(i, i) += mu;
    h = r;
  }
  std::sort(out.begin(), out.end(), [](cx a_, cx b_) {
    if (a_.real() != b_.real()) return a_.real() < b_.real();
    return a_.imag() < b_.imag();
  });
  return out;
}

// Singular values of an m x k block (columns of length m), descending.
inline std::vector<double> singular_values(int m, int k, const std::vector<cx>& cols) {
  Mat g(k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      cx s(0, 0);
      for (int r = 0; r < m; ++r)
        s += std::conj(cols[static_cast<size_t>(i) * m + r]) *
             cols[static_cast<size_t>(j) * m + r];
      g.at(i, j) = s;
    }
  std::vector<double> w;
  Mat v;
  hermitian_eig(g, w, v);
  std::vector<double> sv;
  for (int i = k - 1; i >= 0; --i) sv.push_back(std::sqrt(std::max(0.0, w[i])));
  return sv;
}

// Largest principal angle (radians) between the column spans of x and y
// (both m x k, orthonormalized here).
inline double principal_angle(int m, int k, std::vector<cx> x, std::vector<cx> y) {
  auto orth = [&](std::vector<cx>& c) {
    for (int j = 0; j < k; ++j) {
      cx* cj = c.data() + static_cast<size_t>(j) * m;
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < j; ++i) {
          const cx* ci = c.data() + static_cast<size_t>(i) * m;
          cx d(0, 0);
          for (int r = 0; r < m; ++r) d += std::conj(ci[r]) * cj[r];
          for (int r = 0; r < m; ++r) cj[r] -= d * ci[r];
        }
      double nn = 0.0;
      for (int r = 0; r < m; ++r) nn += std::norm(cj[r]);
      nn = std::sqrt(nn);
      for (int r = 0; r < m; ++r) cj[r] /= nn;
    }
  };
  orth(x);
  orth(y);
  std::vector<cx> g(static_cast<size_t>(k) * k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      cx s(0, 0);
      for (int r = 0; r < m; ++r)
        s += std::conj(x[static_cast<size_t>(i) * m + r]) * y[static_cast<size_t>(j) * m + r];
      g[static_cast<size_t>(j) * k + i] = s;
    }
  const auto sv = singular_values(k, k, g);
  const double smin = std::clamp(sv.back(), -1.0, 1.0);
  return std::acos(smin);
}

inline double laplacian_eigenvalue(int n, int k) {
  return 2.0 - 2.0 * std::cos(k * M_PI / (n + 1));
}

inline std::pair<cx, cx> quadratic_roots(cx a2, cx a1, cx a0) {
  const cx disc = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
  return {(-a1 + disc) / (2.0 * a2), (-a1 - disc) / (2.0 * a2)};
}

// Brute-force filter value (1/2 pi i) ∮ dz/(z - lambda) along a clockwise
// piecewise path (lines and half-ellipses, the custom-contour geometry),
// with a fine composite midpoint rule per piece.
struct PathPiece {
  cx from, to;
  int type = 0; // 0 line, t>0 half-ellipse with a/b = t/100
};

inline cx filter_integral(const std::vector<PathPiece>& pieces, cx lambda, int fineness) {
  cx total(0, 0);
  for (const auto& piece : pieces) {
    for (int m = 0; m < fineness; ++m) {
      const double t = (m + 0.5) / fineness;
      cx z, dz;
      if (piece.type == 0) {
        z = piece.from + t * (piece.to - piece.from);
        dz = (piece.to - piece.from);
      } else {
        const cx chord = piece.to - piece.from;
        const double a = 0.5 * std::abs(chord);
        const double b = a * 100.0 / piece.type;
        const cx u = chord / (2.0 * a);
        const cx mid = 0.5 * (piece.from + piece.to);
        z = mid - a * u * std::cos(M_PI * t) + b * cx(0, 1) * u * std::sin(M_PI * t);
        dz = M_PI * a * u * std::sin(M_PI * t) + M_PI * b * cx(0, 1) * u * std::cos(M_PI * t);
      }
      total += dz / (z - lambda) / static_cast<double>(fineness);
    }
  }
  return total / cx(0, 2.0 * M_PI) * cx(-1.0, 0.0); // clockwise orientation
}

} // namespace oracle
