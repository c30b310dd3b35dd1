// Validates recorded action sequences against the per-loop protocol
// grammar:
//   loop 0:   [init B-multiplies]  { factorize? solve (fact-adj? solve-adj)? }^nq  sweeps
//   loop k>0: { factorize? solve (fact-adj? solve-adj)? }^nq  sweeps
// Factorizations appear in every loop without caching, only in loop 0 with
// it. Adjoint solves appear only on two-sided paths (or the complex
// Hermitian half-rule path); adjoint factorizations only when the caller
// cannot reuse the primary factorization.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "support/rci_caller.hpp"

namespace testcaller {

struct GrammarSpec {
  int nq = 0;
  int iterations = 0; // refinement loops actually run (kernel loops() + 1)
  bool cached = true;
  bool adjoint_solves = false;  // SolveAdjoint present per node
  bool adjoint_factors = false; // FactorizeAdjoint present when factorizing
  int init_bmults = 1;          // leading MultiplyB-type actions in loop 0
  int sweep_a = 1;              // MultiplyA-type sweeps per loop
  int sweep_b = 1;              // MultiplyB-type sweeps per loop
};

inline bool check_trace(const std::vector<TraceEntry>& trace, const GrammarSpec& g,
                        std::string& err) {
  size_t pos = 0;
  std::ostringstream oss;
  auto fail = [&](const std::string& what) {
    oss << "at trace position " << pos << ": " << what;
    err = oss.str();
    return false;
  };
  auto expect = [&](ActionKind kind) {
    if (pos >= trace.size()) return false;
    return trace[pos].kind == kind;
  };

  for (int it = 0; it < g.iterations; ++it) {
    if (it == 0) {
      for (int b = 0; b < g.init_bmults; ++b) {
        if (!expect(ActionKind::MultiplyB) && !expect(ActionKind::MultiplyBAdjoint))
          return fail("expected an initial B-multiply");
        ++pos;
      }
    }
    const bool factor_this_loop = (it == 0) || !g.cached;
    for (int node = 0; node < g.nq; ++node) {
      if (factor_this_loop) {
        if (!expect(ActionKind::Factorize)) return fail("expected Factorize");
        if (trace[pos].node != node) return fail("factorize node out of order");
        ++pos;
      }
      if (!expect(ActionKind::Solve)) return fail("expected Solve");
      if (trace[pos].node != node) return fail("solve node out of order");
      ++pos;
      if (g.adjoint_solves) {
        if (g.adjoint_factors && factor_this_loop) {
          if (!expect(ActionKind::FactorizeAdjoint))
            return fail("expected FactorizeAdjoint");
          ++pos;
        }
        if (!expect(ActionKind::SolveAdjoint)) return fail("expected SolveAdjoint");
        if (trace[pos].node != node) return fail("adjoint solve node out of order");
        ++pos;
      }
    }
    for (int s = 0; s < g.sweep_a; ++s) {
      if (!expect(ActionKind::MultiplyA) && !expect(ActionKind::MultiplyAAdjoint))
        return fail("expected a MultiplyA sweep");
      ++pos;
    }
    for (int s = 0; s < g.sweep_b; ++s) {
      if (!expect(ActionKind::MultiplyB) && !expect(ActionKind::MultiplyBAdjoint))
        return fail("expected a MultiplyB sweep");
      ++pos;
    }
  }
  if (pos != trace.size() &&
      !(pos + 1 == trace.size() && trace[pos].kind == ActionKind::Done))
    return fail("trailing actions after the final loop");
  return true;
}

inline bool columns_in_range(const std::vector<TraceEntry>& trace, int m0, bool two_sided,
                             std::string& err) {
  for (size_t i = 0; i < trace.size(); ++i) {
    const auto& t = trace[i];
    switch (t.kind) {
      case ActionKind::MultiplyA:
      case ActionKind::MultiplyAAdjoint:
      case ActionKind::MultiplyB:
      case ActionKind::MultiplyBAdjoint: {
        const int limit = two_sided ? 2 * m0 : m0;
        if (t.col_first < 1 || t.col_first + t.col_count - 1 > limit) {
          err = "column window out of range at position " + std::to_string(i);
          return false;
        }
        break;
      }
      default:
        break;
    }
  }
  return true;
}

} // namespace testcaller
