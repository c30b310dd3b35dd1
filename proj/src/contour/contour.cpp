#include "contour/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spslice {

namespace {
constexpr double kPi = std::numbers::pi;
}

void gauss_legendre(int n, std::vector<double>& abscissae, std::vector<double>& weights) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: n out of [1, 64]");
  abscissae.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on the recurrence.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x; // P_1
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    abscissae[i] = -x; // guesses start from the positive end
    abscissae[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) abscissae[n / 2] = 0.0;
}

namespace {

struct EllipseParam {
  cplx center;
  double a; // horizontal semi-axis
  double b; // vertical semi-axis
  cplx rot; // rotation factor e^{i angle}

  cplx point(double theta) const {
    return center + rot * cplx(a * std::cos(theta), b * std::sin(theta));
  }
  cplx tangent(double theta) const {
    return rot * cplx(-a * std::sin(theta), b * std::cos(theta));
  }
};

} // namespace

ContourRule hermitian_contour(double emin, double emax, int nq, QuadratureKind kind,
                              int ratio_pct) {
  if (!(emin < emax)) throw std::invalid_argument("hermitian_contour: emin >= emax");
  if (nq < 1) throw std::invalid_argument("hermitian_contour: nq < 1");
  if (ratio_pct < 0) throw std::invalid_argument("hermitian_contour: negative ratio");
  EllipseParam e{cplx(0.5 * (emin + emax), 0.0), 0.5 * (emax - emin),
                 0.5 * (emax - emin) * ratio_pct / 100.0, cplx(1.0, 0.0)};
  ContourRule rule;
  rule.closure = ContourRule::Closure::HalfSymmetric;
  rule.nodes.resize(nq);
  rule.weights.resize(nq);
  if (kind == QuadratureKind::Gauss) {
    std::vector<double> x, w;
    gauss_legendre(nq, x, w);
    // theta = pi(1-x)/2 sweeps the upper half clockwise as x ascends.
    for (int j = 0; j < nq; ++j) {
      const double theta = 0.5 * kPi * (1.0 - x[j]);
      rule.nodes[j] = e.point(theta);
      rule.weights[j] = cplx(0.0, -0.25) * w[j] * e.tangent(theta);
    }
  } else {
    for (int j = 0; j < nq; ++j) {
      const double theta = kPi * (nq - j - 0.5) / nq; // clockwise, axis-avoiding
      rule.nodes[j] = e.point(theta);
      rule.weights[j] = cplx(0.0, -0.5 / nq) * e.tangent(theta);
    }
  }
  return rule;
}

ContourRule general_contour(cplx center, double radius, int nq, QuadratureKind kind,
                            int ratio_pct, int angle_deg) {
  if (!(radius > 0.0)) throw std::invalid_argument("general_contour: radius <= 0");
  if (nq < 2) throw std::invalid_argument("general_contour: nq < 2");
  if (ratio_pct < 0) throw std::invalid_argument("general_contour: negative ratio");
  const double angle = angle_deg * kPi / 180.0;
  EllipseParam e{center, radius, radius * ratio_pct / 100.0,
                 cplx(std::cos(angle), std::sin(angle))};
  ContourRule rule;
  rule.closure = ContourRule::Closure::Full;
  rule.nodes.resize(nq);
  rule.weights.resize(nq);
  if (kind == QuadratureKind::Trapezoidal) {
    for (int j = 0; j < nq; ++j) {
      const double theta = 2.0 * kPi * (j + 0.5) / nq;
      rule.nodes[j] = e.point(theta);
      rule.weights[j] = cplx(0.0, -1.0 / nq) * e.tangent(theta);
    }
  } else if (nq % 2 == 0) {
    // Two Gauss panels over [0,pi] and [pi,2pi]; the panels mirror each
    // other, so the closed-contour weight sum cancels exactly.
    std::vector<double> x, w;
    gauss_legendre(nq / 2, x, w);
    for (int j = 0; j < nq / 2; ++j) {
      const double t1 = 0.5 * kPi * (1.0 + x[j]);
      const double t2 = kPi + t1;
      rule.nodes[j] = e.point(t1);
      rule.weights[j] = cplx(0.0, -0.25) * w[j] * e.tangent(t1);
      rule.nodes[nq / 2 + j] = e.point(t2);
      rule.weights[nq / 2 + j] = cplx(0.0, -0.25) * w[j] * e.tangent(t2);
    }
  } else {
    std::vector<double> x, w;
    gauss_legendre(nq, x, w);
    for (int j = 0; j < nq; ++j) {
      const double theta = kPi * (1.0 - x[j]);
      rule.nodes[j] = e.point(theta);
      rule.weights[j] = cplx(0.0, -0.5) * w[j] * e.tangent(theta);
    }
  }
  return rule;
}

ContourRule custom_contour(const CustomGeometry& g) {
  const size_t p = g.edges.size();
  if (p < 1 || g.types.size() != p || g.subdivisions.size() != p)
    throw std::invalid_argument("custom_contour: inconsistent piece arrays");
  ContourRule rule;
  rule.closure = ContourRule::Closure::Full;
  for (size_t k = 0; k < p; ++k) {
    if (g.subdivisions[k] < 1) throw std::invalid_argument("custom_contour: subdivisions < 1");
    const cplx e1 = g.edges[k];
    const cplx e2 = g.edges[(k + 1) % p];
    const cplx chord = e2 - e1;
    if (std::abs(chord) == 0.0)
      throw std::invalid_argument("custom_contour: zero-length piece");
    const int nk = g.subdivisions[k];
    for (int m = 0; m < nk; ++m) {
      const double t = (m + 0.5) / nk;
      cplx z, dz;
      if (g.types[k] == 0) {
        z = e1 + t * chord;
        dz = chord;
      } else {
        // Convex half-ellipse: bulges to the left of the travel direction,
        // which is outward for a clockwise polygon.
        const double a = 0.5 * std::abs(chord);
        const double b = a * 100.0 / g.types[k];
        const cplx u = chord / (2.0 * a);
        const cplx mid = 0.5 * (e1 + e2);
        z = mid - a * u * std::cos(kPi * t) + b * (cplx(0, 1) * u) * std::sin(kPi * t);
        dz = kPi * a * u * std::sin(kPi * t) + kPi * b * (cplx(0, 1) * u) * std::cos(kPi * t);
      }
      rule.nodes.push_back(z);
      // Clockwise traversal: -dz/(2*pi*i) keeps the filter at +1 inside.
      rule.weights.push_back(cplx(0.0, 1.0 / (2.0 * kPi * nk)) * dz);
    }
  }
  return rule;
}

ContourRule symmetrize(const ContourRule& rule) {
  if (rule.closure == ContourRule::Closure::Full) return rule;
  ContourRule full;
  full.closure = ContourRule::Closure::Full;
  full.nodes = rule.nodes;
  full.weights = rule.weights;
  for (int j = rule.size() - 1; j >= 0; --j) {
    full.nodes.push_back(std::conj(rule.nodes[j]));
    full.weights.push_back(std::conj(rule.weights[j]));
  }
  return full;
}

cplx filter_value(const ContourRule& rule, cplx lambda) {
  const ContourRule full = symmetrize(rule);
  cplx sum = 0.0;
  for (int j = 0; j < full.size(); ++j) {
    const cplx d = full.nodes[j] - lambda;
    if (d == cplx(0.0, 0.0)) throw std::domain_error("filter_value: lambda hits a node");
    sum += full.weights[j] / d;
  }
  return sum;
}

RegionClassifier RegionClassifier::interval(double emin, double emax) {
  RegionClassifier c;
  c.kind_ = Kind::Interval;
  c.emin_ = emin;
  c.emax_ = emax;
  return c;
}

RegionClassifier RegionClassifier::ellipse(cplx center, double radius, int ratio_pct,
                                           int angle_deg) {
  RegionClassifier c;
  c.kind_ = Kind::Ellipse;
  c.center_ = center;
  c.rx_ = radius;
  c.ry_ = radius * ratio_pct / 100.0;
  c.angle_rad_ = angle_deg * kPi / 180.0;
  return c;
}

RegionClassifier RegionClassifier::polygon(std::vector<cplx> vertices) {
  RegionClassifier c;
  c.kind_ = Kind::Polygon;
  c.vertices_ = std::move(vertices);
  return c;
}

bool RegionClassifier::inside(cplx lambda) const {
  switch (kind_) {
    case Kind::Interval:
      return lambda.real() >= emin_ && lambda.real() <= emax_;
    case Kind::Ellipse: {
      const cplx w = (lambda - center_) * cplx(std::cos(-angle_rad_), std::sin(-angle_rad_));
      if (ry_ == 0.0) return std::abs(w.imag()) <= 1e-14 && std::abs(w.real()) <= rx_;
      const double u = w.real() / rx_;
      const double v = w.imag() / ry_;
      return u * u + v * v <= 1.0;
    }
    case Kind::Polygon: {
      // Nonzero winding number over the node polygon.
      int winding = 0;
      const size_t np = vertices_.size();
      for (size_t k = 0; k < np; ++k) {
        const cplx a = vertices_[k];
        const cplx b = vertices_[(k + 1) % np];
        if (a.imag() <= lambda.imag()) {
          if (b.imag() > lambda.imag()) {
            const double cross = (b.real() - a.real()) * (lambda.imag() - a.imag()) -
                                 (lambda.real() - a.real()) * (b.imag() - a.imag());
            if (cross > 0) ++winding;
          }
        } else if (b.imag() <= lambda.imag()) {
          const double cross = (b.real() - a.real()) * (lambda.imag() - a.imag()) -
                               (lambda.real() - a.real()) * (b.imag() - a.imag());
          if (cross < 0) --winding;
        }
      }
      return winding != 0;
    }
  }
  return false;
}

} // namespace spslice
