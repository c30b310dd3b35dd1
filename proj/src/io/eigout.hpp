// eig.out writer: one line per eigenpair found inside the region, ordered
// ascending by real part then imaginary part. Real spectra print
// "index value residual"; complex ones "index re im residual".
#pragma once

#include <string>

#include "core/types.hpp"

namespace spslice {

void write_eigout(const EigResult& result, const std::string& path, bool complex_spectrum);

} // namespace spslice
