// Coordinate-format matrix files: header line "N N NNZ", then one entry per
// line, "i j value" for real data or "i j re im" for complex, indices
// 1-based.
#pragma once

#include <string>

#include "core/csr.hpp"

namespace spslice {

CsrReal read_coordinate_real(const std::string& path, Uplo uplo = Uplo::Full);
CsrComplex read_coordinate_complex(const std::string& path, Uplo uplo = Uplo::Full);

void write_coordinate(const std::string& path, const CsrReal& m);
void write_coordinate(const std::string& path, const CsrComplex& m);

} // namespace spslice
