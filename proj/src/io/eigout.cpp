#include "io/eigout.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

namespace spslice {

void write_eigout(const EigResult& result, const std::string& path, bool complex_spectrum) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << std::scientific << std::setprecision(16);
  if (result.m == 0) {
    out << "# no eigenvalue found inside the search region\n";
    return;
  }
  std::vector<int> order(result.m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const cplx va = result.eigenvalues[a], vb = result.eigenvalues[b];
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });
  for (int k = 0; k < result.m; ++k) {
    const int j = order[k];
    out << (k + 1) << ' ' << result.eigenvalues[j].real();
    if (complex_spectrum) out << ' ' << result.eigenvalues[j].imag();
    out << ' ' << result.residuals[j] << '\n';
  }
}

} // namespace spslice
