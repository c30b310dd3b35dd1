// Line-ordered run configuration (.in) files:
//   structure letter   s | h | g
//   form letter        e (standard) | g (generalized)
//   precision letter   d | z
//   UPLO letter        L | U | F
//   region             Emin / Emax lines for Hermitian problems,
//                      Emid_re / Emid_im / r lines otherwise
//   M0
//   number of parameter overrides, then "index value" lines
// Text after the values on a line (e.g. "! comment") is ignored. Fortran
// double literals such as 0.18d0 are accepted.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace spslice {

struct RunSpec {
  char structure = 's';  // s: symmetric, h: hermitian, g: general
  char form = 'e';       // e: standard, g: generalized
  char precision = 'd';  // d: real double, z: complex double
  Uplo uplo = Uplo::Full;
  SearchRegion region = Interval{0.0, 0.0};
  int m0 = 0;
  std::vector<std::pair<int, int>> overrides; // (fpm index, value)

  bool hermitian_problem() const {
    return (structure == 's' && precision == 'd') || structure == 'h';
  }
  Structure problem_structure() const;
};

RunSpec read_runspec(const std::string& path);

} // namespace spslice
