#include "core/config.hpp"

#include <cmath>

namespace spslice {

double Config::stop_eps() const { return std::pow(10.0, -fpm(3)); }
double Config::inner_tol() const { return std::pow(10.0, -fpm(45)); }

Config default_config(const ProblemKind& kind, bool inexact) {
  Config c;
  c.set_fpm(1, 0);
  c.set_fpm(2, inexact ? 4 : 8);
  c.set_fpm(3, 12);
  c.set_fpm(4, inexact ? 50 : 20);
  c.set_fpm(5, 0);
  c.set_fpm(6, 1);
  c.set_fpm(8, inexact ? 8 : 16);
  c.set_fpm(10, 1);
  c.set_fpm(14, 0);
  c.set_fpm(15, is_symmetric_structure(kind.structure) ||
                        kind.structure == Structure::ComplexHermitian
                    ? 2
                    : 0);
  // Gauss for Hermitian direct solves; trapezoidal otherwise and whenever the
  // inner solver is iterative.
  c.set_fpm(16, (!inexact && is_hermitian_structure(kind.structure)) ? 0 : 1);
  c.set_fpm(18, (!inexact && is_hermitian_structure(kind.structure)) ? 30 : 100);
  c.set_fpm(19, 0);
  c.set_fpm(40, 0);
  c.set_fpm(41, 1);
  c.set_fpm(42, 1);
  c.set_fpm(43, inexact ? 1 : 0);
  c.set_fpm(45, 1);
  c.set_fpm(46, 40);
  c.set_fpm(60, 0);
  return c;
}

namespace {

struct FpmRule {
  int index;
  bool (*ok)(int);
};

// Documented-slot constraints only; everything else is reserved and ignored.
const FpmRule kRules[] = {
    {2, [](int v) { return v >= 1; }},
    {3, [](int v) { return v >= 0 && v <= 16; }},
    {4, [](int v) { return v >= 0; }},
    {5, [](int v) { return v == 0 || v == 1; }},
    {6, [](int v) { return v == 0 || v == 1; }},
    {8, [](int v) { return v >= 2; }},
    {10, [](int v) { return v == 0 || v == 1; }},
    {14, [](int v) { return v >= 0 && v <= 2; }},
    {15, [](int v) { return v >= 0 && v <= 2; }},
    {16, [](int v) { return v == 0 || v == 1; }},
    {18, [](int v) { return v >= 0; }},
    {19, [](int v) { return v >= -180 && v <= 180; }},
    {40, [](int v) { return v == 0; }}, // extreme-eigenvalue search not provided
    {41, [](int v) { return v == 0 || v == 1; }},
    {42, [](int v) { return v == 0 || v == 1; }},
    {43, [](int v) { return v == 0 || v == 1; }},
    {45, [](int v) { return v >= 1 && v <= 16; }},
    {46, [](int v) { return v >= 1; }},
};

} // namespace

InfoCode validate(const Config& config, const SearchRegion& region, int n, int m0) {
  if (n <= 0) return InfoCode{InfoCode::BadSystemSize};
  if (m0 <= 0 || m0 > n) return InfoCode{InfoCode::BadSubspaceSize};
  if (const auto* iv = std::get_if<Interval>(&region)) {
    if (!(iv->emin < iv->emax)) return InfoCode{InfoCode::BadRegion};
    if (!std::isfinite(iv->emin) || !std::isfinite(iv->emax))
      return InfoCode{InfoCode::BadRegion};
  } else {
    const auto& el = std::get<Ellipse>(region);
    if (!(el.radius > 0.0) || !std::isfinite(el.radius) ||
        !std::isfinite(el.center.real()) || !std::isfinite(el.center.imag()))
      return InfoCode{InfoCode::BadRegion};
  }
  for (const auto& rule : kRules) {
    if (!rule.ok(config.fpm(rule.index))) return InfoCode::bad_fpm(rule.index);
  }
  return InfoCode{};
}

std::string info_message(InfoCode info) {
  switch (info.value) {
    case InfoCode::Success: return "successful exit";
    case InfoCode::NoEigenvalueFound: return "no eigenvalue found in the search region";
    case InfoCode::NoConvergence: return "no convergence within the refinement-loop limit";
    case InfoCode::SubspaceTooSmall: return "subspace size M0 is too small (M0 <= M)";
    case InfoCode::SubspaceOnly: return "only the subspace was returned (mode 1)";
    case InfoCode::StochasticOnly: return "only a stochastic eigenvalue count was returned (mode 2)";
    case InfoCode::NotBiorthonormal: return "converged, but the subspace pair is not bi-orthonormal";
    case InfoCode::BadRegion: return "invalid search region";
    case InfoCode::BadSubspaceSize: return "invalid subspace size M0";
    case InfoCode::BadSystemSize: return "invalid system size N";
    case InfoCode::PrecisionError: return "internal single/double conversion error";
    case InfoCode::InnerSolverError: return "inner linear-system solver failed";
    case InfoCode::ReducedSolverError: return "reduced eigenvalue solver failed";
    default:
      if (info.value > 100 && info.value <= 164)
        return "invalid value for parameter slot " + std::to_string(info.value - 100);
      return "unknown status " + std::to_string(info.value);
  }
}

} // namespace spslice
