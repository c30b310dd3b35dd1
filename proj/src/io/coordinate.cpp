#include "io/coordinate.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spslice {

namespace {

std::runtime_error parse_error(const std::string& path, int line, const std::string& what) {
  return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// Skips blank and comment lines ('%' or '#'), returning the next data line.
bool next_data_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%' || line[pos] == '#') continue;
    return true;
  }
  return false;
}

template <class T, bool Complex>
Csr<T> read_impl(const std::string& path, Uplo uplo) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::string line;
  int lineno = 0;
  if (!next_data_line(in, line, lineno)) throw parse_error(path, lineno, "missing header");
  long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw parse_error(path, lineno, "malformed header");
    if (rows <= 0 || rows != cols || nnz < 0)
      throw parse_error(path, lineno, "header must read N N NNZ with square N > 0");
  }
  std::vector<Triplet<T>> entries;
  entries.reserve(static_cast<size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line, lineno))
      throw parse_error(path, lineno, "unexpected end of file: expected " +
                                          std::to_string(nnz) + " entries");
    std::istringstream ss(line);
    long i = 0, j = 0;
    if (!(ss >> i >> j)) throw parse_error(path, lineno, "malformed entry indices");
    if (i < 1 || i > rows || j < 1 || j > rows)
      throw parse_error(path, lineno, "entry index out of [1, N]");
    T value{};
    if constexpr (Complex) {
      double re = 0.0, im = 0.0;
      if (!(ss >> re)) throw parse_error(path, lineno, "malformed entry value");
      if (!(ss >> im)) im = 0.0; // tolerate real-only columns
      value = T(re, im);
    } else {
      double re = 0.0;
      if (!(ss >> re)) throw parse_error(path, lineno, "malformed entry value");
      value = T(re);
    }
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), value});
  }
  return csr_from_triplets(static_cast<int>(rows), std::move(entries), uplo);
}

} // namespace

CsrReal read_coordinate_real(const std::string& path, Uplo uplo) {
  return read_impl<double, false>(path, uplo);
}

CsrComplex read_coordinate_complex(const std::string& path, Uplo uplo) {
  return read_impl<cplx, true>(path, uplo);
}

namespace {

template <class T>
void write_impl(const std::string& path, const Csr<T>& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  out << m.n << ' ' << m.n << ' ' << m.nnz() << '\n';
  for (int i = 0; i < m.n; ++i)
    for (int p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
      out << (i + 1) << ' ' << (m.col_idx[p] + 1) << ' ';
      if constexpr (std::is_same_v<T, cplx>)
        out << m.values[p].real() << ' ' << m.values[p].imag() << '\n';
      else
        out << m.values[p] << '\n';
    }
}

} // namespace

void write_coordinate(const std::string& path, const CsrReal& m) { write_impl(path, m); }
void write_coordinate(const std::string& path, const CsrComplex& m) { write_impl(path, m); }

} // namespace spslice
