// Black-box solve entry points: wire storage, contour, kernel and inner
// solver together. The drivers are thin shells over the reverse-communication
// kernels; with a fixed seed they reproduce a hand-driven kernel loop
// bit for bit, independent of the worker count.
#pragma once

#include <optional>

#include "contour/contour.hpp"
#include "core/config.hpp"
#include "core/csr.hpp"
#include "core/dense.hpp"
#include "core/types.hpp"

namespace spslice {

struct SolveOptions {
  /// Expert mode: use this quadrature rule instead of the built-in contour.
  /// Inside/outside classification falls back to the node polygon for full
  /// custom rules on non-Hermitian problems; Hermitian runs keep the
  /// interval test.
  std::optional<ContourRule> custom_rule;
  /// Route the sparse driver through a dense factorization (intended for
  /// small cross-checks; refused above 64 rows).
  bool force_dense_backend = false;
  /// Initial search subspace for warm starts (slot 5 = 1): n x m0
  /// column-major block, e.g. the vectors of a previous run. Real problems
  /// use the real parts. Required when slot 5 is set; two-sided runs seed
  /// the left block with the same columns.
  std::optional<std::vector<cplx>> initial_vectors;
};

// Dense drivers. Hermitian problems search a real interval; the matrix kind
// is fixed by the overload. A null B means a standard problem.
EigResult solve_dense_hermitian(const DenseReal& a, const DenseReal* b, Interval region,
                                int m0, const Config& config, const SolveOptions& opts = {});
EigResult solve_dense_hermitian(const DenseComplex& a, const DenseComplex* b, Interval region,
                                int m0, const Config& config, const SolveOptions& opts = {});

// Non-Hermitian dense driver: structure selects the complex-symmetric
// shortcut or the general two-/one-sided paths (per the sidedness slot).
EigResult solve_dense_general(Structure structure, const DenseComplex& a,
                              const DenseComplex* b, Ellipse region, int m0,
                              const Config& config, const SolveOptions& opts = {});
EigResult solve_dense_general(Structure structure, const DenseReal& a, const DenseReal* b,
                              Ellipse region, int m0, const Config& config,
                              const SolveOptions& opts = {});

// Sparse drivers (CSR input, triangular storage expanded internally). The
// inner systems go through BiCGStab; `region` must match the structure
// (interval for Hermitian kinds, ellipse otherwise).
EigResult solve_sparse(Structure structure, const CsrReal& a, const CsrReal* b,
                       const SearchRegion& region, int m0, const Config& config,
                       const SolveOptions& opts = {});
EigResult solve_sparse(Structure structure, const CsrComplex& a, const CsrComplex* b,
                       const SearchRegion& region, int m0, const Config& config,
                       const SolveOptions& opts = {});

// Polynomial drivers: coefficients A_0..A_p of sum lambda^l A_l x = 0.
EigResult solve_polynomial(Structure structure, const std::vector<DenseComplex>& coeffs,
                           Ellipse region, int m0, const Config& config,
                           const SolveOptions& opts = {});
EigResult solve_polynomial(Structure structure, const std::vector<CsrComplex>& coeffs,
                           Ellipse region, int m0, const Config& config,
                           const SolveOptions& opts = {});

/// Stochastic eigenvalue count (mode 2): one contour pass over random
/// probes; result.m holds the estimate, info = 5.
template <class Matrix>
EigResult stochastic_count(Structure structure, const Matrix& a, const Matrix* b,
                           const SearchRegion& region, int m0, Config config);

/// Subspace-only run (mode 1): one contour application of the initial block;
/// the raw filtered block is returned in `vectors`, info = 4.
template <class Matrix>
EigResult subspace_only(Structure structure, const Matrix& a, const Matrix* b,
                        const SearchRegion& region, int m0, Config config);

} // namespace spslice
