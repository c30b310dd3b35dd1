// Quadrature rules along complex contours and the rational filter they
// induce. Weights absorb the 1/(2*pi*i) factor of the resolvent integral, so
// the filter sum_j w_j/(z_j - lambda) is ~1 well inside the contour and ~0
// far outside.
#pragma once

#include <vector>

#include "core/types.hpp"

namespace spslice {

enum class QuadratureKind { Gauss = 0, Trapezoidal = 1 };

struct ContourRule {
  enum class Closure { HalfSymmetric, Full };
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  Closure closure = Closure::Full;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre abscissae/weights on [-1, 1], ascending. 1 <= n <= 64.
void gauss_legendre(int n, std::vector<double>& abscissae, std::vector<double>& weights);

/// Upper-half elliptic contour for a real interval [emin, emax]: horizontal
/// semi-axis (emax-emin)/2, vertical semi-axis scaled by ratio_pct/100.
/// The implied lower half is the conjugate reflection.
ContourRule hermitian_contour(double emin, double emax, int nq, QuadratureKind kind,
                              int ratio_pct);

/// Full elliptic contour around `center` with horizontal radius `radius`,
/// vertical radius radius*ratio_pct/100, rotated by angle_deg
/// (counterclockwise; 0 keeps the vertical axis upright).
ContourRule general_contour(cplx center, double radius, int nq, QuadratureKind kind,
                            int ratio_pct, int angle_deg);

/// Piecewise contour geometry: P pieces chained in clockwise order, piece k
/// spanning [edges[k], edges[k+1]] (the last wraps around). type[k] == 0 is a
/// straight line; type[k] > 0 a convex half-ellipse whose primary radius `a`
/// is half the chord and a/b = type[k]/100. subdivisions[k] nodes are placed
/// on piece k by the midpoint-trapezoidal rule.
struct CustomGeometry {
  std::vector<cplx> edges;
  std::vector<int> types;
  std::vector<int> subdivisions;
};

ContourRule custom_contour(const CustomGeometry& geometry);

/// Expands a half rule into the equivalent full rule (nodes plus conjugates,
/// weights plus conjugates). Full rules are returned unchanged.
ContourRule symmetrize(const ContourRule& rule);

/// Rational filter sum_j w_j/(z_j - lambda) over the full (symmetrized) node
/// set. Throws std::domain_error when lambda hits a node.
cplx filter_value(const ContourRule& rule, cplx lambda);

/// Inside/outside test for Ritz values: exact interval or ellipse test for
/// built-in contours, winding-number test on the node polygon for custom
/// ones.
class RegionClassifier {
public:
  static RegionClassifier interval(double emin, double emax);
  static RegionClassifier ellipse(cplx center, double radius, int ratio_pct, int angle_deg);
  static RegionClassifier polygon(std::vector<cplx> vertices);

  bool inside(cplx lambda) const;

private:
  enum class Kind { Interval, Ellipse, Polygon } kind_ = Kind::Interval;
  double emin_ = 0.0, emax_ = 0.0;
  cplx center_{};
  double rx_ = 0.0, ry_ = 0.0, angle_rad_ = 0.0;
  std::vector<cplx> vertices_;
};

} // namespace spslice
