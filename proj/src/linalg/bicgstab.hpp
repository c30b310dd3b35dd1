// Unpreconditioned BiCGStab for the shifted inner systems. Runs in double or
// single precision; callers get double-precision iterates either way. An
// iteration cap is not an error: the outer refinement tolerates inexact
// solves, so the best iterate is returned.
#pragma once

#include <complex>
#include <functional>

namespace spslice {

struct SolveStats {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool breakdown = false; // unrecoverable after one restart
};

/// y = Op x, both length n in the iteration precision.
template <class CT>
using ApplyOp = std::function<void(const CT* x, CT* y)>;

/// Solves Op x = b to relative residual <= tol or at most maxit iterations,
/// starting from x = 0. On exit `x` holds the iterate that achieved
/// stats.final_relative_residual (recomputed from scratch).
template <class CT>
void bicgstab(const ApplyOp<CT>& apply, const CT* b, CT* x, int n, double tol, int maxit,
              SolveStats& stats);

extern template void bicgstab<std::complex<double>>(const ApplyOp<std::complex<double>>&,
                                                    const std::complex<double>*,
                                                    std::complex<double>*, int, double, int,
                                                    SolveStats&);
extern template void bicgstab<std::complex<float>>(const ApplyOp<std::complex<float>>&,
                                                   const std::complex<float>*,
                                                   std::complex<float>*, int, double, int,
                                                   SolveStats&);

} // namespace spslice
