#include "doctest.h"

#include <cmath>

#include "core/csr.hpp"
#include "linalg/bicgstab.hpp"
#include "linalg/lu.hpp"
#include "linalg/matvec.hpp"
#include "linalg/reduced_eig.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace spslice;

namespace {

BlockC random_block(int n, int k, fixtures::TestRng& rng) {
  BlockC b(n, k);
  for (auto& v : b.data) v = rng.unit();
  return b;
}

double residual_of(const BlockC& a, const cplx* x, const cplx* b) {
  const int n = a.rows;
  std::vector<cplx> ax(n);
  for (int i = 0; i < n; ++i) {
    cplx s{};
    for (int j = 0; j < n; ++j) s += a.at(i, j) * x[j];
    ax[i] = s - b[i];
  }
  return blk::norm2(ax.data(), n) / std::max(blk::norm2(b, n), 1e-300);
}

} // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("LU: identity and permutation") {
  BlockC eye(2, 2);
  eye.at(0, 0) = eye.at(1, 1) = 1.0;
  LuFactor lu;
  REQUIRE(lu.factorize(eye, false) == FactorStatus::Ok);
  std::vector<cplx> rhs{cplx(3, 1), cplx(-2, 0)};
  lu.solve(rhs.data(), 1, false);
  CHECK(std::abs(rhs[0] - cplx(3, 1)) < 1e-15);
  CHECK(std::abs(rhs[1] - cplx(-2, 0)) < 1e-15);

  BlockC swap(2, 2);
  swap.at(0, 1) = 1.0;
  swap.at(1, 0) = 1.0;
  REQUIRE(lu.factorize(swap, false) == FactorStatus::Ok);
  rhs = {cplx(1, 0), cplx(2, 0)};
  lu.solve(rhs.data(), 1, false);
  CHECK(std::abs(rhs[0] - cplx(2, 0)) < 1e-15);
  CHECK(std::abs(rhs[1] - cplx(1, 0)) < 1e-15);
}

TEST_CASE("LU: diagonal solve and adjoint on Hermitian input") {
  BlockC d(2, 2);
  d.at(0, 0) = 2.0;
  d.at(1, 1) = 4.0;
  LuFactor lu;
  REQUIRE(lu.factorize(d, false) == FactorStatus::Ok);
  std::vector<cplx> rhs{cplx(1, 0), cplx(1, 0)};
  lu.solve(rhs.data(), 1, false);
  CHECK(std::abs(rhs[0] - cplx(0.5, 0)) < 1e-15);
  CHECK(std::abs(rhs[1] - cplx(0.25, 0)) < 1e-15);

  // Hermitian A: the adjoint solve equals the normal one.
  BlockC h(2, 2);
  h.at(0, 0) = 3.0;
  h.at(1, 1) = 5.0;
  h.at(0, 1) = cplx(1, 2);
  h.at(1, 0) = cplx(1, -2);
  REQUIRE(lu.factorize(h, false) == FactorStatus::Ok);
  std::vector<cplx> r1{cplx(1, 1), cplx(2, -1)}, r2 = r1;
  lu.solve(r1.data(), 1, false);
  lu.solve(r2.data(), 1, true);
  CHECK(std::abs(r1[0] - r2[0]) < 1e-14);
  CHECK(std::abs(r1[1] - r2[1]) < 1e-14);
}

TEST_CASE("LU: residual and adjoint round-trips on random systems") {
  fixtures::TestRng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8;
    BlockC a = random_block(n, n, rng);
    for (int i = 0; i < n; ++i) a.at(i, i) += 4.0; // keep conditioning mild
    LuFactor lu;
    REQUIRE(lu.factorize(a, false) == FactorStatus::Ok);
    BlockC b = random_block(n, 2, rng);
    BlockC x = b;
    lu.solve(x.data.data(), 2, false);
    for (int c = 0; c < 2; ++c) CHECK(residual_of(a, x.col(c), b.col(c)) < 1e-12);

    // adjoint: solve A^H y = b, then check against conjugate-transposed A
    BlockC y = b;
    lu.solve(y.data.data(), 2, true);
    BlockC ah(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ah.at(i, j) = std::conj(a.at(j, i));
    for (int c = 0; c < 2; ++c) CHECK(residual_of(ah, y.col(c), b.col(c)) < 1e-12);
  }
}

TEST_CASE("LU: single-precision path") {
  fixtures::TestRng rng(11);
  const int n = 8;
  BlockC a = random_block(n, n, rng);
  for (int i = 0; i < n; ++i) a.at(i, i) += 4.0;
  LuFactor lu;
  REQUIRE(lu.factorize(a, true) == FactorStatus::Ok);
  BlockC b = random_block(n, 1, rng);
  BlockC x = b;
  lu.solve(x.data.data(), 1, false);
  CHECK(residual_of(a, x.col(0), b.col(0)) < 1e-5);

  BlockC singular(2, 2); // exactly singular
  singular.at(0, 0) = 1.0;
  CHECK(lu.factorize(singular, false) == FactorStatus::Singular);

  BlockC huge(1, 1); // overflows in single precision
  huge.at(0, 0) = 1e200;
  CHECK(lu.factorize(huge, true) == FactorStatus::PrecisionLoss);
}

TEST_CASE("CSR mat-vec: fixture rows sum to zero") {
  const CsrReal a = fixtures::helloworld_csr();
  std::vector<double> ones(4, 1.0), out(4, -1.0);
  csr_matvec(a, ones.data(), out.data(), 1);
  for (double v : out) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("CSR mat-vec: identity and dense agreement") {
  const CsrReal eye = csr_identity<double>(5);
  std::vector<double> x{1, 2, 3, 4, 5}, y(5);
  csr_matvec(eye, x.data(), y.data(), 1);
  CHECK(x == y);

  fixtures::TestRng rng(3);
  const DenseReal d = fixtures::random_symmetric(10, rng);
  const CsrReal s = fixtures::dense_to_csr(d);
  std::vector<double> v(10), ys(10), yd(10);
  for (auto& e : v) e = rng.pm1();
  csr_matvec(s, v.data(), ys.data(), 1);
  dense_matvec(d, v.data(), yd.data(), 1);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(ys[i] - yd[i]) < 1e-13);
}

TEST_CASE("CSR adjoint mat-vec avoids materializing the transpose") {
  fixtures::TestRng rng(5);
  const int n = 9;
  DenseComplex d(n);
  for (auto& v : d.values) v = rng.unit();
  const CsrComplex s = fixtures::dense_to_csr(d);
  std::vector<cplx> x(n), y1(n), y2(n);
  for (auto& e : x) e = rng.unit();
  csr_matvec(s, x.data(), y1.data(), 1, MulMode::ConjugateTranspose);
  DenseComplex dh(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dh.at(i, j) = std::conj(d.at(j, i));
  dense_matvec(dh, x.data(), y2.data(), 1);
  for (int i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
}

TEST_CASE("bicgstab: identity converges immediately") {
  const int n = 6;
  std::vector<cplx> b(n, cplx(1, -2)), x(n);
  ApplyOp<cplx> op = [&](const cplx* in, cplx* out) { std::copy(in, in + n, out); };
  SolveStats st;
  bicgstab(op, b.data(), x.data(), n, 1e-12, 50, st);
  CHECK(st.iterations <= 1);
  CHECK(st.final_relative_residual < 1e-12);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-12);
}

TEST_CASE("bicgstab: shifted fixture system converges in a few steps") {
  // shifted operator z*I - A at a midpoint of the upper half circle
  const CsrReal a = fixtures::helloworld_csr();
  const cplx z(4.0, 1.0);
  const int n = 4;
  ApplyOp<cplx> op = [&](const cplx* in, cplx* out) {
    csr_matvec(a, in, out, 1);
    for (int i = 0; i < n; ++i) out[i] = z * in[i] - out[i];
  };
  std::vector<cplx> b{cplx(1, 0), cplx(0, 1), cplx(-1, 0.5), cplx(2, -1)}, x(n);
  SolveStats st;
  bicgstab(op, b.data(), x.data(), n, 1e-1, 40, st);
  CHECK(st.iterations <= 5);
  CHECK(st.final_relative_residual <= 1e-1);
}

TEST_CASE("bicgstab: tight tolerance matches a direct solve") {
  const CsrReal lap = fixtures::laplacian_1d(20);
  const int n = 20;
  ApplyOp<cplx> op = [&](const cplx* in, cplx* out) { csr_matvec(lap, in, out, 1); };
  fixtures::TestRng rng(17);
  std::vector<cplx> b(n), x(n);
  for (auto& e : b) e = cplx(rng.pm1(), 0.0);
  SolveStats st;
  bicgstab(op, b.data(), x.data(), n, 1e-10, 500, st);
  CHECK(st.final_relative_residual <= 1e-10);

  BlockC dense(n, n);
  for (int i = 0; i < n; ++i)
    for (int p = lap.row_ptr[i]; p < lap.row_ptr[i + 1]; ++p)
      dense.at(i, lap.col_idx[p]) = lap.values[p];
  LuFactor lu;
  REQUIRE(lu.factorize(dense, false) == FactorStatus::Ok);
  std::vector<cplx> xd = b;
  lu.solve(xd.data(), 1, false);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xd[i]) < 1e-8);
}

TEST_CASE("bicgstab: reported residual is honestly recomputed") {
  const CsrReal lap = fixtures::laplacian_1d(12);
  const int n = 12;
  ApplyOp<cplx> op = [&](const cplx* in, cplx* out) { csr_matvec(lap, in, out, 1); };
  std::vector<cplx> b(n, cplx(1, 0)), x(n);
  SolveStats st;
  bicgstab(op, b.data(), x.data(), n, 1e-3, 7, st);
  std::vector<cplx> r(n);
  op(x.data(), r.data());
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double true_res = blk::norm2(r.data(), n) / blk::norm2(b.data(), n);
  CHECK(std::abs(true_res - st.final_relative_residual) < 1e-13);
}

TEST_CASE("reduced hermitian eigensolver") {
  SUBCASE("diagonal pencil") {
    BlockR aq(3, 3), bq(3, 3);
    for (int i = 0; i < 3; ++i) {
      aq.at(i, i) = i + 1.0;
      bq.at(i, i) = 1.0;
    }
    std::vector<double> lam;
    BlockR phi;
    REQUIRE(reduced_hermitian_eig(aq, bq, lam, phi));
    CHECK(lam[0] == doctest::Approx(1.0));
    CHECK(lam[1] == doctest::Approx(2.0));
    CHECK(lam[2] == doctest::Approx(3.0));
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(std::abs(phi.at(i, j)) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
  SUBCASE("aq equals bq gives unit eigenvalues") {
    fixtures::TestRng rng(23);
    const DenseReal spd = fixtures::random_spd_near_identity(4, rng, 0.2);
    BlockR aq(4, 4);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) aq.at(i, j) = spd.at(i, j);
    std::vector<double> lam;
    BlockR phi;
    REQUIRE(reduced_hermitian_eig(aq, aq, lam, phi));
    for (double v : lam) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("random pencil: residual and B-orthonormality") {
    fixtures::TestRng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
      const int m = 6;
      const DenseReal a = fixtures::random_symmetric(m, rng);
      const DenseReal b = fixtures::random_spd_near_identity(m, rng, 0.3);
      BlockC aq(m, m), bq(m, m);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
          aq.at(i, j) = a.at(i, j);
          bq.at(i, j) = b.at(i, j);
        }
      std::vector<double> lam;
      BlockC phi;
      REQUIRE(reduced_hermitian_eig(aq, bq, lam, phi));
      for (int j = 0; j < m; ++j) {
        std::vector<cplx> r(m);
        for (int i = 0; i < m; ++i) {
          cplx s{};
          for (int k = 0; k < m; ++k)
            s += (aq.at(i, k) - lam[j] * bq.at(i, k)) * phi.at(k, j);
          r[i] = s;
        }
        CHECK(blk::norm2(r.data(), m) < 1e-12);
      }
      // max |Phi^H Bq Phi - I|
      BlockC bphi;
      blk::combine(bq, phi, bphi);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
          const cplx g = blk::dot_conj(phi.col(i), bphi.col(j), m);
          CHECK(std::abs(g - (i == j ? cplx(1, 0) : cplx{})) < 1e-12);
        }
    }
  }
  SUBCASE("indefinite metric is rejected") {
    BlockR aq(2, 2), bq(2, 2);
    aq.at(0, 0) = 1.0;
    aq.at(1, 1) = 2.0;
    bq.at(0, 0) = 1.0;
    bq.at(1, 1) = -1.0;
    std::vector<double> lam;
    BlockR phi;
    CHECK(!reduced_hermitian_eig(aq, bq, lam, phi));
  }
}

TEST_CASE("reduced general eigensolver") {
  SUBCASE("upper triangular eigenvalues are the diagonal") {
    BlockC aq(3, 3), bq(3, 3);
    aq.at(0, 0) = cplx(1, 1);
    aq.at(1, 1) = cplx(-2, 0);
    aq.at(2, 2) = cplx(0, 3);
    aq.at(0, 1) = 5.0;
    aq.at(0, 2) = -1.0;
    aq.at(1, 2) = 2.0;
    for (int i = 0; i < 3; ++i) bq.at(i, i) = 1.0;
    GeneralReducedEig red;
    REQUIRE(reduced_general_eig(aq, bq, false, red) == ReducedStatus::Ok);
    CHECK(std::abs(red.values[0] - cplx(-2, 0)) < 1e-12);
    CHECK(std::abs(red.values[1] - cplx(0, 3)) < 1e-12);
    CHECK(std::abs(red.values[2] - cplx(1, 1)) < 1e-12);
  }
  SUBCASE("rotation matrix has unit-circle conjugate eigenvalues") {
    const double th = 0.7;
    BlockC aq(2, 2), bq(2, 2);
    aq.at(0, 0) = std::cos(th);
    aq.at(0, 1) = -std::sin(th);
    aq.at(1, 0) = std::sin(th);
    aq.at(1, 1) = std::cos(th);
    bq.at(0, 0) = bq.at(1, 1) = 1.0;
    GeneralReducedEig red;
    REQUIRE(reduced_general_eig(aq, bq, false, red) == ReducedStatus::Ok);
    CHECK(std::abs(red.values[0] - std::exp(cplx(0, -th))) < 1e-12);
    CHECK(std::abs(red.values[1] - std::exp(cplx(0, th))) < 1e-12);
  }
  SUBCASE("trace identity and left/right residuals on random pencils") {
    fixtures::TestRng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
      const int m = 8;
      BlockC aq = random_block(m, m, rng);
      BlockC bq = random_block(m, m, rng);
      for (int i = 0; i < m; ++i) bq.at(i, i) += 3.0;
      GeneralReducedEig red;
      REQUIRE(reduced_general_eig(aq, bq, true, red) == ReducedStatus::Ok);

      // sum of eigenvalues equals trace(Bq^{-1} Aq)
      LuFactor lu;
      REQUIRE(lu.factorize(bq, false) == FactorStatus::Ok);
      BlockC c = aq;
      lu.solve(c.data.data(), m, false);
      cplx tr{};
      for (int i = 0; i < m; ++i) tr += c.at(i, i);
      cplx sum{};
      for (const auto& v : red.values) sum += v;
      CHECK(std::abs(sum - tr) < 1e-10);

      for (int j = 0; j < m; ++j) {
        std::vector<cplx> r(m), rl(m);
        for (int i = 0; i < m; ++i) {
          cplx s{}, sl{};
          for (int k = 0; k < m; ++k) {
            s += (aq.at(i, k) - red.values[j] * bq.at(i, k)) * red.right.at(k, j);
            sl += (std::conj(aq.at(k, i)) - std::conj(red.values[j] * bq.at(k, i))) *
                  red.left.at(k, j);
          }
          r[i] = s;
          rl[i] = sl;
        }
        CHECK(blk::norm2(r.data(), m) < 1e-9);
        CHECK(blk::norm2(rl.data(), m) / blk::norm2(red.left.col(j), m) < 1e-9);
      }

      // binormalization contract
      BlockC bx;
      blk::combine(bq, red.right, bx);
      for (int j = 0; j < m; ++j) {
        const cplx d = blk::dot_conj(red.left.col(j), bx.col(j), m);
        CHECK(std::abs(d - cplx(1, 0)) < 1e-9);
      }
    }
  }
  SUBCASE("eigenvalues match the independent QR oracle") {
    fixtures::TestRng rng(59);
    const int m = 8;
    BlockC aq = random_block(m, m, rng);
    BlockC bq(m, m);
    for (int i = 0; i < m; ++i) bq.at(i, i) = 1.0;
    GeneralReducedEig red;
    REQUIRE(reduced_general_eig(aq, bq, false, red) == ReducedStatus::Ok);
    oracle::Mat om(m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) om.at(i, j) = aq.at(i, j);
    const auto ref = oracle::general_eigenvalues(om);
    REQUIRE(static_cast<int>(ref.size()) == m);
    for (int j = 0; j < m; ++j) CHECK(std::abs(red.values[j] - cplx(ref[j])) < 1e-8);
  }
  SUBCASE("singular metric is reported") {
    BlockC aq(2, 2), bq(2, 2);
    aq.at(0, 0) = 1.0;
    aq.at(1, 1) = 1.0;
    GeneralReducedEig red;
    CHECK(reduced_general_eig(aq, bq, false, red) == ReducedStatus::SingularB);
  }
}

TEST_CASE("companion linearization") {
  SUBCASE("degree one degenerates to (-A0, A1)") {
    BlockC a0(2, 2), a1(2, 2);
    a0.at(0, 0) = 1.0;
    a0.at(1, 1) = 2.0;
    a1.at(0, 0) = a1.at(1, 1) = 1.0;
    BlockC ca, cb;
    polynomial_linearize({a0, a1}, ca, cb);
    CHECK(ca.rows == 2);
    CHECK(ca.at(0, 0) == cplx(-1, 0));
    CHECK(ca.at(1, 1) == cplx(-2, 0));
    CHECK(cb.at(0, 0) == cplx(1, 0));
  }
  SUBCASE("scalar quadratic l^2 - 3l + 2 has roots 1 and 2") {
    BlockC a0(1, 1), a1(1, 1), a2(1, 1);
    a0.at(0, 0) = 2.0;
    a1.at(0, 0) = -3.0;
    a2.at(0, 0) = 1.0;
    BlockC ca, cb;
    polynomial_linearize({a0, a1, a2}, ca, cb);
    GeneralReducedEig red;
    REQUIRE(reduced_general_eig(ca, cb, false, red) == ReducedStatus::Ok);
    CHECK(std::abs(red.values[0] - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(red.values[1] - cplx(2, 0)) < 1e-12);
  }
  SUBCASE("random quadratic: polynomial residual of recovered pairs") {
    fixtures::TestRng rng(73);
    const int m = 3;
    std::vector<BlockC> coeffs(3);
    for (auto& c : coeffs) c = random_block(m, m, rng);
    for (int i = 0; i < m; ++i) coeffs[2].at(i, i) += 2.0;
    BlockC ca, cb;
    polynomial_linearize(coeffs, ca, cb);
    GeneralReducedEig red;
    REQUIRE(reduced_general_eig(ca, cb, false, red) == ReducedStatus::Ok);
    REQUIRE(static_cast<int>(red.values.size()) == 2 * m);
    for (int j = 0; j < 2 * m; ++j) {
      const cplx lam = red.values[j];
      // polynomial eigenvector sits in the first block row
      std::vector<cplx> v(m);
      for (int i = 0; i < m; ++i) v[i] = red.right.at(i, j);
      const double vn = blk::norm2(v.data(), m);
      REQUIRE(vn > 1e-8);
      std::vector<cplx> r(m);
      for (int i = 0; i < m; ++i) {
        cplx s{};
        for (int k = 0; k < m; ++k)
          s += (coeffs[0].at(i, k) + lam * coeffs[1].at(i, k) +
                lam * lam * coeffs[2].at(i, k)) *
               v[k];
        r[i] = s;
      }
      CHECK(blk::norm2(r.data(), m) / vn < 1e-9);
    }
    // spectrum agrees with brute-force roots of det P(l) sampled via the
    // scalar case is impractical here; instead check against the QR oracle
    // on the companion matrix itself.
    oracle::Mat om(2 * m);
    LuFactor lu;
    REQUIRE(lu.factorize(cb, false) == FactorStatus::Ok);
    BlockC c = ca;
    lu.solve(c.data.data(), 2 * m, false);
    for (int j = 0; j < 2 * m; ++j)
      for (int i = 0; i < 2 * m; ++i) om.at(i, j) = c.at(i, j);
    const auto ref = oracle::general_eigenvalues(om);
    for (int j = 0; j < 2 * m; ++j) CHECK(std::abs(red.values[j] - cplx(ref[j])) < 1e-7);
  }
}

TEST_SUITE_END();
