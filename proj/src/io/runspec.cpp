#include "io/runspec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spslice {

Structure RunSpec::problem_structure() const {
  if (structure == 's' && precision == 'd') return Structure::RealSymmetric;
  if (structure == 's') return Structure::ComplexSymmetric;
  if (structure == 'h') return Structure::ComplexHermitian;
  return precision == 'd' ? Structure::RealGeneral : Structure::ComplexGeneral;
}

namespace {

std::runtime_error parse_error(const std::string& path, int line, const std::string& what) {
  return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::ifstream in;
  std::string path;
  int lineno = 0;

  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) throw std::runtime_error("cannot open run file: " + path);
  }

  // First whitespace-separated token of the next nonempty line; the rest of
  // the line (comments) is discarded.
  std::string token() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ss(line);
      std::string tok;
      if (ss >> tok) return tok;
    }
    throw parse_error(path, lineno, "unexpected end of file");
  }

  // Next line: up to `count` tokens returned (for override lines).
  std::vector<std::string> tokens(size_t count) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ss(line);
      std::vector<std::string> out;
      std::string tok;
      while (out.size() < count && (ss >> tok)) out.push_back(tok);
      if (!out.empty()) return out;
    }
    throw parse_error(path, lineno, "unexpected end of file");
  }
};

double parse_real(const std::string& tok, const std::string& path, int lineno) {
  std::string t = tok;
  // Fortran-style exponent markers.
  std::replace(t.begin(), t.end(), 'd', 'e');
  std::replace(t.begin(), t.end(), 'D', 'e');
  try {
    size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw parse_error(path, lineno, "not a number: '" + tok + "'");
  }
}

int parse_int(const std::string& tok, const std::string& path, int lineno) {
  try {
    size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(path, lineno, "not an integer: '" + tok + "'");
  }
}

} // namespace

RunSpec read_runspec(const std::string& path) {
  LineReader r(path);
  RunSpec spec;

  const std::string s = r.token();
  if (s.size() != 1 || (s[0] != 's' && s[0] != 'h' && s[0] != 'g'))
    throw parse_error(path, r.lineno, "structure letter must be s, h or g, got '" + s + "'");
  spec.structure = s[0];

  const std::string f = r.token();
  if (f.size() != 1 || (f[0] != 'e' && f[0] != 'g'))
    throw parse_error(path, r.lineno, "form letter must be e or g, got '" + f + "'");
  spec.form = f[0];

  const std::string p = r.token();
  if (p.size() != 1 || (p[0] != 'd' && p[0] != 'z'))
    throw parse_error(path, r.lineno, "precision letter must be d or z, got '" + p + "'");
  spec.precision = p[0];
  if (spec.structure == 'h' && spec.precision != 'z')
    throw parse_error(path, r.lineno, "hermitian runs require complex precision 'z'");

  const std::string u = r.token();
  if (u.size() != 1 || (u[0] != 'L' && u[0] != 'U' && u[0] != 'F'))
    throw parse_error(path, r.lineno, "UPLO letter must be L, U or F, got '" + u + "'");
  spec.uplo = static_cast<Uplo>(u[0]);

  if (spec.hermitian_problem()) {
    const double emin = parse_real(r.token(), path, r.lineno);
    const double emax = parse_real(r.token(), path, r.lineno);
    spec.region = Interval{emin, emax};
  } else {
    const double re = parse_real(r.token(), path, r.lineno);
    const double im = parse_real(r.token(), path, r.lineno);
    const double rad = parse_real(r.token(), path, r.lineno);
    spec.region = Ellipse{cplx(re, im), rad};
  }

  spec.m0 = parse_int(r.token(), path, r.lineno);

  const int changes = parse_int(r.token(), path, r.lineno);
  if (changes < 0) throw parse_error(path, r.lineno, "negative override count");
  for (int k = 0; k < changes; ++k) {
    const auto toks = r.tokens(2);
    if (toks.size() < 2)
      throw parse_error(path, r.lineno, "override line needs 'index value'");
    const int idx = parse_int(toks[0], path, r.lineno);
    const int val = parse_int(toks[1], path, r.lineno);
    if (idx < 1 || idx > 64)
      throw parse_error(path, r.lineno, "override index out of [1, 64]");
    spec.overrides.emplace_back(idx, val);
  }
  return spec;
}

} // namespace spslice
