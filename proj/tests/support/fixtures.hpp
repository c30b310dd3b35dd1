// Shared test fixtures: the 4x4 graph-Laplacian-like matrix with spectrum
// {0, 2, 4, 4}, seeded random matrix generators, and small conversion
// helpers.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "core/csr.hpp"
#include "core/dense.hpp"

namespace fixtures {

using spslice::cplx;

inline spslice::DenseReal helloworld_dense() {
  spslice::DenseReal a(4);
  const double vals[16] = {2, -1, -1, 0, -1, 3, -1, -1, -1, -1, 3, -1, 0, -1, -1, 2};
  std::copy(vals, vals + 16, a.values.begin());
  return a;
}

inline spslice::CsrReal helloworld_csr() {
  spslice::CsrReal m;
  m.n = 4;
  m.row_ptr = {0, 3, 7, 11, 14};
  m.col_idx = {0, 1, 2, 0, 1, 2, 3, 0, 1, 2, 3, 1, 2, 3};
  m.values = {2, -1, -1, -1, 3, -1, -1, -1, -1, 3, -1, -1, -1, 2};
  return m;
}

// Deterministic generator, independent of the library's stream.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : s_(seed * 2654435761ULL + 1442695040888963407ULL) {}
  double u01() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return static_cast<double>(s_ >> 11) * 0x1.0p-53;
  }
  double pm1() { return 2.0 * u01() - 1.0; }
  cplx unit() {
    const double r = std::sqrt(u01());
    const double t = 2.0 * M_PI * u01();
    return cplx(r * std::cos(t), r * std::sin(t));
  }

private:
  std::uint64_t s_;
};

inline spslice::DenseReal random_symmetric(int n, TestRng& rng, double scale = 1.0) {
  spslice::DenseReal a(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      const double v = scale * rng.pm1();
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  return a;
}

inline spslice::DenseReal random_spd_near_identity(int n, TestRng& rng, double eps) {
  spslice::DenseReal b = random_symmetric(n, rng, eps);
  for (int i = 0; i < n; ++i) b.at(i, i) += 1.0;
  return b;
}

inline spslice::DenseComplex random_complex_general(int n, TestRng& rng, double scale = 1.0) {
  spslice::DenseComplex a(n);
  for (auto& v : a.values) v = scale * rng.unit();
  return a;
}

inline spslice::DenseReal random_real_general(int n, TestRng& rng, double scale = 1.0) {
  spslice::DenseReal a(n);
  for (auto& v : a.values) v = scale * rng.pm1();
  return a;
}

inline spslice::CsrReal laplacian_1d(int n) {
  std::vector<spslice::Triplet<double>> tri;
  for (int i = 0; i < n; ++i) {
    tri.push_back({i, i, 2.0});
    if (i > 0) tri.push_back({i, i - 1, -1.0});
    if (i + 1 < n) tri.push_back({i, i + 1, -1.0});
  }
  return spslice::csr_from_triplets(n, std::move(tri));
}

inline spslice::CsrReal dense_to_csr(const spslice::DenseReal& a) {
  std::vector<spslice::Triplet<double>> tri;
  for (int j = 0; j < a.n; ++j)
    for (int i = 0; i < a.n; ++i)
      if (a.at(i, j) != 0.0) tri.push_back({i, j, a.at(i, j)});
  return spslice::csr_from_triplets(a.n, std::move(tri));
}

inline spslice::CsrComplex dense_to_csr(const spslice::DenseComplex& a) {
  std::vector<spslice::Triplet<cplx>> tri;
  for (int j = 0; j < a.n; ++j)
    for (int i = 0; i < a.n; ++i)
      if (a.at(i, j) != cplx{}) tri.push_back({i, j, a.at(i, j)});
  return spslice::csr_from_triplets(a.n, std::move(tri));
}

} // namespace fixtures
