#include "drivers/backend.hpp"

#include <cmath>

#include "linalg/bicgstab.hpp"
#include "linalg/matvec.hpp"

namespace spslice {

DenseLuBackend::DenseLuBackend(int n, int nq, Former former, bool single_precision)
    : n_(n), former_(std::move(former)), single_(single_precision), factors_(nq) {}

InfoCode DenseLuBackend::prepare(int node, cplx shift) {
  BlockC az(n_, n_);
  former_(shift, az);
  auto f = std::make_unique<LuFactor>();
  switch (f->factorize(az, single_)) {
    case FactorStatus::Ok: break;
    case FactorStatus::Singular: return InfoCode{InfoCode::InnerSolverError};
    case FactorStatus::PrecisionLoss: return InfoCode{InfoCode::PrecisionError};
  }
  factors_[node] = std::move(f);
  return InfoCode{};
}

bool DenseLuBackend::has(int node) const { return static_cast<bool>(factors_[node]); }

void DenseLuBackend::release_all() {
  for (auto& f : factors_) f.reset();
}

InfoCode DenseLuBackend::solve(int node, cplx* rhs, int cols, bool adjoint,
                               InnerSolveInfo& info) {
  factors_[node]->solve(rhs, cols, adjoint);
  info = InnerSolveInfo{};
  return InfoCode{};
}

BicgstabBackend::BicgstabBackend(std::vector<CsrComplex> coeffs, bool polynomial, int nq,
                                 bool single_precision, double tol, int maxit,
                                 bool materialize)
    : polynomial_(polynomial), single_(single_precision), tol_(tol), maxit_(maxit),
      materialize_(materialize), n_(coeffs.front().n),
      ncoef_(static_cast<int>(coeffs.size())), ready_(nq, false), shifts_(nq),
      shifted_(nq), shifted_f_(nq) {
  std::vector<Triplet<char>> pattern;
  for (const auto& c : coeffs)
    for (int i = 0; i < c.n; ++i)
      for (int p = c.row_ptr[i]; p < c.row_ptr[i + 1]; ++p)
        pattern.push_back({i, c.col_idx[p], 1});
  if (!polynomial_ && ncoef_ == 1) // standard problem: shift*I enters the pattern
    for (int i = 0; i < n_; ++i) pattern.push_back({i, i, 1});
  const Csr<char> merged = csr_from_triplets(n_, std::move(pattern));
  row_ptr_ = merged.row_ptr;
  col_idx_ = merged.col_idx;
  const size_t nnz = col_idx_.size();
  merged_vals_.assign(nnz * ncoef_, cplx{});
  is_diag_.assign(nnz, 0);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      if (col_idx_[p] == i) is_diag_[p] = 1;
  auto locate = [&](int row, int col) {
    int lo = row_ptr_[row], hi = row_ptr_[row + 1];
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (col_idx_[mid] < col)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  };
  for (int k = 0; k < ncoef_; ++k) {
    const auto& c = coeffs[k];
    for (int i = 0; i < n_; ++i)
      for (int p = c.row_ptr[i]; p < c.row_ptr[i + 1]; ++p)
        merged_vals_[static_cast<size_t>(locate(i, c.col_idx[p])) * ncoef_ + k] =
            c.values[p];
  }
}

// One fixed expression per entry: the cached and on-the-fly paths both call
// this, which keeps fpm(10)=0 and fpm(10)=1 results bitwise identical.
cplx BicgstabBackend::shifted_entry(size_t p, cplx z) const {
  const cplx* v = merged_vals_.data() + p * ncoef_;
  if (polynomial_) {
    cplx acc = v[ncoef_ - 1];
    for (int l = ncoef_ - 1; l-- > 0;) acc = acc * z + v[l];
    return acc;
  }
  if (ncoef_ == 1) return is_diag_[p] ? z - v[0] : -v[0];
  return z * v[1] - v[0];
}

InfoCode BicgstabBackend::prepare(int node, cplx shift) {
  shifts_[node] = shift;
  if (materialize_) {
    const size_t nnz = col_idx_.size();
    shifted_[node].assign(nnz, cplx{});
    for (size_t p = 0; p < nnz; ++p) shifted_[node][p] = shifted_entry(p, shift);
    if (single_) {
      shifted_f_[node].resize(nnz);
      for (size_t p = 0; p < nnz; ++p)
        shifted_f_[node][p] =
            std::complex<float>(static_cast<float>(shifted_[node][p].real()),
                                static_cast<float>(shifted_[node][p].imag()));
    }
  }
  ready_[node] = 1;
  return InfoCode{};
}

bool BicgstabBackend::has(int node) const { return ready_[node] != 0; }

void BicgstabBackend::release_all() {
  std::fill(ready_.begin(), ready_.end(), 0);
  for (auto& m : shifted_) m.clear();
  for (auto& m : shifted_f_) m.clear();
}

template <class CT>
void BicgstabBackend::apply_shifted(int node, const CT* x, CT* y, bool adjoint) const {
  const cplx z = shifts_[node];
  auto value_at = [&](int p) -> CT {
    if constexpr (std::is_same_v<CT, std::complex<float>>) {
      if (materialize_) return shifted_f_[node][p];
      const cplx v = shifted_entry(p, z);
      return std::complex<float>(static_cast<float>(v.real()),
                                 static_cast<float>(v.imag()));
    } else {
      if (materialize_) return shifted_[node][p];
      return shifted_entry(p, z);
    }
  };
  if (!adjoint) {
    for (int i = 0; i < n_; ++i) {
      CT s{};
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
        s += value_at(p) * x[col_idx_[p]];
      y[i] = s;
    }
  } else {
    for (int i = 0; i < n_; ++i) y[i] = CT{};
    for (int i = 0; i < n_; ++i) {
      const CT xi = x[i];
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
        y[col_idx_[p]] += std::conj(value_at(p)) * xi;
    }
  }
}

InfoCode BicgstabBackend::solve(int node, cplx* rhs, int cols, bool adjoint,
                                InnerSolveInfo& info) {
  info = InnerSolveInfo{};
  bool first = true;
  for (int c = 0; c < cols; ++c) {
    cplx* col = rhs + static_cast<size_t>(c) * n_;
    SolveStats stats;
    if (single_) {
      std::vector<std::complex<float>> b(n_), x(n_);
      for (int i = 0; i < n_; ++i)
        b[i] = std::complex<float>(static_cast<float>(col[i].real()),
                                   static_cast<float>(col[i].imag()));
      ApplyOp<std::complex<float>> op = [&](const std::complex<float>* in,
                                            std::complex<float>* out) {
        apply_shifted(node, in, out, adjoint);
      };
      bicgstab(op, b.data(), x.data(), n_, tol_, maxit_, stats);
      for (int i = 0; i < n_; ++i) col[i] = cplx(x[i].real(), x[i].imag());
    } else {
      std::vector<cplx> b(col, col + n_), x(n_);
      ApplyOp<cplx> op = [&](const cplx* in, cplx* out) {
        apply_shifted(node, in, out, adjoint);
      };
      bicgstab(op, b.data(), x.data(), n_, tol_, maxit_, stats);
      std::copy(x.begin(), x.end(), col);
    }
    if (stats.breakdown) return InfoCode{InfoCode::InnerSolverError};
    info.iterations += stats.iterations;
    if (first) {
      info.res_min = info.res_max = stats.final_relative_residual;
      first = false;
    } else {
      info.res_min = std::min(info.res_min, stats.final_relative_residual);
      info.res_max = std::max(info.res_max, stats.final_relative_residual);
    }
  }
  return InfoCode{};
}

} // namespace spslice
