// Dense eigensolvers for the projected (reduced) problems. Sizes are of the
// order of the search subspace, so cubic algorithms with accumulated
// transforms are the right tool.
#pragma once

#include <vector>

#include "linalg/blocks.hpp"

namespace spslice {

/// Hermitian-definite pencil: Aq Phi = Bq Phi diag(lambda) with
/// Phi^H Bq Phi = I, eigenvalues ascending. Returns false when Bq is not
/// positive definite (Cholesky breakdown). T is double or cplx.
template <class T>
bool reduced_hermitian_eig(const Block<T>& aq, const Block<T>& bq, std::vector<double>& lambda,
                           Block<T>& phi);

enum class ReducedStatus { Ok, SingularB, NoConvergence };

struct GeneralReducedEig {
  std::vector<cplx> values; // ascending by (Re, Im)
  BlockC right;             // unit right vectors of the pencil
  BlockC left;              // when requested: left vectors, left^H Bq right = I
  bool binormalized = true; // false if some pair resisted binormalization
};

/// General pencil Aq x = lambda Bq x via reduction to Bq^{-1} Aq, complex
/// Schur (Hessenberg + shifted QR), and triangular eigenvector recovery.
ReducedStatus reduced_general_eig(const BlockC& aq, const BlockC& bq, bool want_left,
                                  GeneralReducedEig& out);

/// Companion pencil (Ca, Cb) of size p*m for the matrix polynomial
/// sum_{l=0}^{p} lambda^l coeffs[l]; its right eigenvectors carry the
/// polynomial eigenvector in the FIRST block row, left eigenvectors in the
/// LAST. p = 1 degenerates to (-coeffs[0], coeffs[1]).
void polynomial_linearize(const std::vector<BlockC>& coeffs, BlockC& ca, BlockC& cb);

} // namespace spslice
