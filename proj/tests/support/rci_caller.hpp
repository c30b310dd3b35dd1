// A miniature dense reverse-communication caller used by kernel tests: it
// performs every requested operation with plain dense kernels, records the
// action trace, and counts factorizations.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "kernel/rci.hpp"
#include "linalg/lu.hpp"
#include "linalg/matvec.hpp"

namespace testcaller {

using namespace spslice;

struct TraceEntry {
  ActionKind kind;
  int node;
  int matrix_index;
  int col_first;
  int col_count;
  int rhs_count;
};

// Dense operator set: A (and optional B) for linear kernels, or polynomial
// coefficients A_0..A_p (B unused then).
template <class Scalar>
struct DenseProblem {
  std::vector<Dense<Scalar>> coeffs; // size 1 (A), 2 (A, B) or p+1
  bool polynomial = false;

  int n() const { return coeffs[0].n; }
  bool has_b() const { return !polynomial && coeffs.size() > 1; }

  void shifted(cplx z, BlockC& out) const {
    const int nn = n();
    out.resize(nn, nn);
    out.zero();
    if (polynomial) {
      cplx zp(1, 0);
      for (const auto& c : coeffs) {
        for (int j = 0; j < nn; ++j)
          for (int i = 0; i < nn; ++i) out.at(i, j) += zp * cplx(c.at(i, j));
        zp *= z;
      }
    } else {
      for (int i = 0; i < nn; ++i) out.at(i, i) = z;
      for (int j = 0; j < nn; ++j)
        for (int i = 0; i < nn; ++i) {
          if (has_b())
            out.at(i, j) = z * cplx(coeffs[1].at(i, j)) - cplx(coeffs[0].at(i, j));
          else
            out.at(i, j) -= cplx(coeffs[0].at(i, j));
        }
    }
  }
};

template <class Kernel, class Scalar>
struct Caller {
  DenseProblem<Scalar> problem;
  bool single_precision = false;
  std::map<int, LuFactor> factors;
  std::vector<TraceEntry> trace;
  int factorizations = 0;

  void run(Kernel& k) {
    while (!k.done()) {
      const Action a = k.next();
      trace.push_back({a.kind, a.node, a.matrix_index, a.col_first, a.col_count,
                       a.rhs_count});
      perform(k, a);
    }
  }

  void perform(Kernel& k, const Action& a) {
    const int n = problem.n();
    switch (a.kind) {
      case ActionKind::Done:
        break;
      case ActionKind::Factorize:
      case ActionKind::FactorizeAdjoint: {
        BlockC az;
        problem.shifted(a.shift, az);
        LuFactor f;
        if (f.factorize(az, single_precision) != FactorStatus::Ok)
          throw std::runtime_error("test caller: factorization failed");
        factors[a.node] = std::move(f);
        ++factorizations;
        break;
      }
      case ActionKind::Solve:
      case ActionKind::SolveAdjoint:
        if (factors.count(a.node) != 1)
          throw std::runtime_error("test caller: solve without a factorization");
        factors[a.node].solve(k.work2().col(0), a.rhs_count,
                              a.kind == ActionKind::SolveAdjoint);
        break;
      case ActionKind::MultiplyA:
      case ActionKind::MultiplyAAdjoint: {
        const auto& m = problem.coeffs[a.matrix_index - 1];
        dense_matvec(m, k.x().col(a.col_first - 1), k.work1().col(a.col_first - 1),
                     a.col_count,
                     a.kind == ActionKind::MultiplyAAdjoint ? MulMode::ConjugateTranspose
                                                            : MulMode::Normal);
        break;
      }
      case ActionKind::MultiplyB:
      case ActionKind::MultiplyBAdjoint: {
        Scalar* dst = k.work1().col(a.col_first - 1);
        const Scalar* src = k.x().col(a.col_first - 1);
        if (problem.has_b())
          dense_matvec(problem.coeffs[1], src, dst, a.col_count,
                       a.kind == ActionKind::MultiplyBAdjoint ? MulMode::ConjugateTranspose
                                                              : MulMode::Normal);
        else
          std::copy(src, src + static_cast<size_t>(n) * a.col_count, dst);
        break;
      }
    }
  }

  int count(ActionKind kind) const {
    int c = 0;
    for (const auto& t : trace)
      if (t.kind == kind) ++c;
    return c;
  }
};

} // namespace testcaller
