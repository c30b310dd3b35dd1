// Solver parameter block. The 64 integer slots follow the 1-based numbering
// used throughout the documentation; slot meanings are summarized in the
// accessors below. C callers index the same slots 0-based (slot i here is
// fpm[i-1] there).
#pragma once

#include <array>
#include <cstdint>

#include "core/types.hpp"

namespace spslice {

class Config {
public:
  Config() { fpm_.fill(0); }

  /// 1-based access, i in [1, 64].
  int fpm(int i) const { return fpm_.at(static_cast<size_t>(i - 1)); }
  void set_fpm(int i, int value) { fpm_.at(static_cast<size_t>(i - 1)) = value; }

  // Frequently used slots, named for readability at call sites.
  int print_level() const { return fpm(1); }            // 0 off, 1 stdout, -n file
  int half_nodes() const { return fpm(2); }             // half-contour count
  double stop_eps() const;                              // 10^-fpm(3)
  int max_loops() const { return fpm(4); }              // refinement cap
  bool use_initial_guess() const { return fpm(5) == 1; }
  int convergence_criterion() const { return fpm(6); }  // 0 trace, 1 residual
  int full_nodes() const { return fpm(8); }             // full-contour count
  bool cache_factorizations() const { return fpm(10) == 1; }
  int mode() const { return fpm(14); }                  // 0 solve, 1 subspace, 2 count
  int sidedness() const { return fpm(15); }             // 0 two-sided, 1 right, 2 left=conj(right)
  int quadrature() const { return fpm(16); }            // 0 Gauss, 1 trapezoidal
  int ellipse_ratio_pct() const { return fpm(18); }
  int rotation_deg() const { return fpm(19); }
  bool single_precision() const { return fpm(42) == 1; }
  bool inexact_switch() const { return fpm(43) == 1; }
  double inner_tol() const;                             // 10^-fpm(45)
  int inner_maxit() const { return fpm(46); }

  // Run options that live outside the integer block.
  std::uint64_t seed = 0;
  int workers = 1;

private:
  std::array<int, 64> fpm_;
};

/// Default parameter block for a problem kind, exact (direct inner solves) or
/// inexact (iterative inner solves) flavor.
Config default_config(const ProblemKind& kind, bool inexact);

/// Checks a run setup. Returns the first violated constraint, Success
/// otherwise. Order: system size (202), subspace size (201), region (200),
/// then documented fpm slots ascending (100+i). Undocumented slots are
/// accepted untouched.
InfoCode validate(const Config& config, const SearchRegion& region, int n, int m0);

} // namespace spslice
