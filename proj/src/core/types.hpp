// Domain types shared across the library: problem classification, search
// regions, status codes and the solver result bundle.
#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace spslice {

using cplx = std::complex<double>;

/// Algebraic structure of the operator set.
enum class Structure {
  RealSymmetric,
  ComplexHermitian,
  ComplexSymmetric,
  RealGeneral,
  ComplexGeneral,
};

inline bool is_hermitian_structure(Structure s) {
  return s == Structure::RealSymmetric || s == Structure::ComplexHermitian;
}

inline bool is_symmetric_structure(Structure s) {
  return s == Structure::RealSymmetric || s == Structure::ComplexSymmetric;
}

/// Standard A x = l x, generalized A x = l B x, or degree-p polynomial
/// sum_i l^i A_i x = 0 (p >= 1; standard/generalized behave as p = 1).
struct Form {
  enum Kind { Standard, Generalized, Polynomial } kind = Standard;
  int degree = 1;

  static Form standard() { return {Standard, 1}; }
  static Form generalized() { return {Generalized, 1}; }
  static Form polynomial(int p) { return {Polynomial, p}; }
};

struct ProblemKind {
  Structure structure = Structure::RealSymmetric;
  Form form = Form::standard();
};

/// Real search interval [emin, emax]; Hermitian problems only.
struct Interval {
  double emin = 0.0;
  double emax = 0.0;
};

/// Ellipse in the complex plane: center and horizontal radius. The vertical
/// radius and rotation come from the quadrature options (fpm 18/19).
struct Ellipse {
  cplx center{0.0, 0.0};
  double radius = 0.0;
};

using SearchRegion = std::variant<Interval, Ellipse>;

/// Status model. 0 = success, small positive = warnings, 100+i = bad fpm(i),
/// 2xx = bad problem setup, negative = internal solver failures.
struct InfoCode {
  int value = 0;

  static constexpr int Success = 0;
  static constexpr int NoEigenvalueFound = 1;
  static constexpr int NoConvergence = 2;
  static constexpr int SubspaceTooSmall = 3;
  static constexpr int SubspaceOnly = 4;
  static constexpr int StochasticOnly = 5;
  static constexpr int NotBiorthonormal = 6;
  static constexpr int BadRegion = 200;
  static constexpr int BadSubspaceSize = 201;
  static constexpr int BadSystemSize = 202;
  static constexpr int PrecisionError = -1;
  static constexpr int InnerSolverError = -2;
  static constexpr int ReducedSolverError = -3;

  static constexpr InfoCode bad_fpm(int index) { return InfoCode{100 + index}; }

  constexpr bool ok() const { return value == Success; }
  /// True for exits whose outputs are still meaningful (success + warnings).
  constexpr bool usable() const { return value >= 0 && value <= 6; }

  friend constexpr bool operator==(InfoCode a, InfoCode b) { return a.value == b.value; }
  friend constexpr bool operator==(InfoCode a, int b) { return a.value == b; }
};

std::string info_message(InfoCode info);

/// Storage convention for symmetric/Hermitian input: full matrix or one
/// triangle only.
enum class Uplo : char { Full = 'F', Lower = 'L', Upper = 'U' };

/// Result of a solve. Eigenvalues/vectors are stored for all m0 columns;
/// the first m are inside the search region (ascending by real part, then
/// imaginary part), the rest lie outside.
struct EigResult {
  int n = 0;
  int m0 = 0;          // columns allocated (clamped subspace size)
  int m = 0;           // eigenpairs found inside the region
  int loops = 0;       // refinement iterations used
  double epsout = 0.0; // trace relative error at exit
  InfoCode info{};
  int inner_iterations = 0; // total inner-solver iterations (fpm(60) mirror)
  unsigned long long seed = 0;

  std::vector<cplx> eigenvalues;       // length m0
  std::vector<cplx> vectors;           // n x m0, column-major (right)
  std::vector<cplx> vectors_left;      // n x m0 when two-sided, else empty
  std::vector<double> residuals;       // length m0
  std::vector<double> residuals_left;  // length m0 when two-sided

  bool has_left() const { return !vectors_left.empty(); }
};

} // namespace spslice
