#include <cmath>
#include <numeric>

#include "kernel/rci.hpp"
#include "kernel/rci_common.hpp"
#include "linalg/reduced_eig.hpp"

namespace spslice {

using rci_detail::guarded_difference;

namespace {

void permute_active_columns(BlockC& b, const std::vector<int>& perm, int col0 = 0) {
  const int n = b.rows;
  const int m = static_cast<int>(perm.size());
  BlockC tmp(n, m);
  for (int j = 0; j < m; ++j)
    std::copy(b.col(col0 + perm[j]), b.col(col0 + perm[j]) + n, tmp.col(j));
  for (int j = 0; j < m; ++j) std::copy(tmp.col(j), tmp.col(j) + n, b.col(col0 + j));
}

void load_rhs(BlockC& work2, const BlockC& rhs, int n, int m) {
  for (int j = 0; j < m; ++j) std::copy(rhs.col(j), rhs.col(j) + n, work2.col(j));
}

} // namespace

PolynomialRci::PolynomialRci(const KernelSetup& setup, int degree,
                             std::vector<double> coeff_norms)
    : s_(setup), degree_(degree), coeff_norms_(std::move(coeff_norms)), n_(setup.n),
      m0_(setup.m0), m_act_(setup.m0), m_cand_(setup.m0), sided_(setup.config.sidedness()),
      phase_(Phase::Start) {
  const int xcols = two_sided() ? 2 * m0_ : m0_;
  x_.resize(n_, xcols);
  work1_.resize(n_, xcols);
  work2_.resize(n_, m0_);
  rhs_right_.resize(n_, m0_);
  acc_right_.resize(n_, m0_);
  coeff_prod_.assign(degree_ + 1, BlockC{});
  for (auto& b : coeff_prod_) b.resize(n_, m0_);
  r_right_.resize(n_, m0_);
  if (two_sided()) {
    rhs_left_.resize(n_, m0_);
    acc_left_.resize(n_, m0_);
    coeff_prod_left_.assign(degree_ + 1, BlockC{});
    for (auto& b : coeff_prod_left_) b.resize(n_, m0_);
    r_left_.resize(n_, m0_);
    res_left_.assign(m0_, 0.0);
  }
  eig_.assign(m0_, cplx{});
  res_.assign(m0_, 0.0);
  // Residual scale: sum_l (|center|+radius)^l * ||A_l||_F.
  res_scale_poly_ = 0.0;
  for (int l = 0; l <= degree_ && l < static_cast<int>(coeff_norms_.size()); ++l)
    res_scale_poly_ += std::pow(s_.residual_scale, l) * coeff_norms_[l];
  if (res_scale_poly_ <= 0.0) res_scale_poly_ = 1.0;
}

void PolynomialRci::report_failure(InfoCode code) { finish(code); }

void PolynomialRci::finish(InfoCode code) {
  info_ = code;
  done_ = true;
  phase_ = Phase::Finished;
}

void PolynomialRci::start_contour() {
  acc_right_.zero();
  if (two_sided()) acc_left_.zero();
  node_ = 0;
  col_scale_.assign(m0_, cplx(1.0, 0.0));
  if (loop_ > 0)
    for (int j = 0; j < m_cand_; ++j)
      col_scale_[j] = rci_detail::residual_update_scale(s_.rule, eig_[j]);
}

Action PolynomialRci::begin_node() {
  if (node_ >= s_.rule.size()) return after_contour();
  const bool need_factor = (loop_ == 0) || !s_.config.cache_factorizations();
  if (need_factor) {
    phase_ = Phase::NodeFactorize;
    return Action{ActionKind::Factorize, node_, s_.rule.nodes[node_], 1, 1, 0, 0};
  }
  load_rhs(work2_, rhs_right_, n_, m_cand_);
  phase_ = Phase::NodeSolve;
  return Action{ActionKind::Solve, node_, s_.rule.nodes[node_], 1, 1, 0, m_cand_};
}

Action PolynomialRci::after_contour() {
  BlockC q(n_, m0_);
  for (int j = 0; j < m_cand_; ++j)
    for (int i = 0; i < n_; ++i)
      q.at(i, j) = (loop_ == 0) ? acc_right_.at(i, j) : x_.at(i, j) + acc_right_.at(i, j);

  if (s_.config.mode() == 1) {
    for (int j = 0; j < m_cand_; ++j) std::copy(q.col(j), q.col(j) + n_, x_.col(j));
    m_ = m_cand_;
    finish(InfoCode{InfoCode::SubspaceOnly});
    return Action{};
  }
  if (s_.config.mode() == 2) {
    double t = 0.0;
    for (int j = 0; j < m_cand_; ++j)
      t += std::real(blk::dot_conj(x_.col(j), q.col(j), n_));
    m_ = static_cast<int>(std::lround(std::max(0.0, t / m_cand_)));
    finish(InfoCode{InfoCode::StochasticOnly});
    return Action{};
  }

  for (int j = 0; j < m_cand_; ++j) std::copy(q.col(j), q.col(j) + n_, x_.col(j));
  if (two_sided())
    for (int j = 0; j < m_cand_; ++j)
      for (int i = 0; i < n_; ++i)
        x_.at(i, m0_ + j) =
            (loop_ == 0) ? acc_left_.at(i, j) : x_.at(i, m0_ + j) + acc_left_.at(i, j);

  sweep_index_ = 0;
  phase_ = Phase::SweepA;
  return Action{ActionKind::MultiplyA, 0, cplx{}, 1, 1, m_cand_, 0};
}

void PolynomialRci::rayleigh_ritz_and_check() {
  BlockC xr(n_, m_cand_), yl;
  for (int j = 0; j < m_cand_; ++j) std::copy(x_.col(j), x_.col(j) + n_, xr.col(j));
  std::vector<BlockC*> mates_r;
  for (auto& b : coeff_prod_) mates_r.push_back(&b);
  int m_r = rci_detail::mgs_orthonormalize(xr, mates_r, m_cand_);
  int m_l = m_r;
  if (two_sided()) {
    yl.resize(n_, m_cand_);
    for (int j = 0; j < m_cand_; ++j)
      std::copy(x_.col(m0_ + j), x_.col(m0_ + j) + n_, yl.col(j));
    std::vector<BlockC*> mates_l;
    for (auto& b : coeff_prod_left_) mates_l.push_back(&b);
    m_l = rci_detail::mgs_orthonormalize(yl, mates_l, m_cand_);
  }
  m_act_ = std::min(m_r, m_l);
  if (m_act_ == 0) {
    finish(InfoCode{InfoCode::NoEigenvalueFound});
    return;
  }

  const int m = m_act_;
  BlockC xa(n_, m), ya;
  for (int j = 0; j < m; ++j) std::copy(xr.col(j), xr.col(j) + n_, xa.col(j));
  if (two_sided()) {
    ya.resize(n_, m);
    for (int j = 0; j < m; ++j) std::copy(yl.col(j), yl.col(j) + n_, ya.col(j));
  }

  // Project every coefficient, then linearize the reduced polynomial.
  std::vector<BlockC> prods(degree_ + 1), prods_left;
  std::vector<BlockC> aq(degree_ + 1);
  for (int l = 0; l <= degree_; ++l) {
    prods[l].resize(n_, m);
    for (int j = 0; j < m; ++j)
      std::copy(coeff_prod_[l].col(j), coeff_prod_[l].col(j) + n_, prods[l].col(j));
    if (sided_ == 0)
      blk::project(ya, prods[l], aq[l]);
    else if (sided_ == 1)
      blk::project(xa, prods[l], aq[l]);
    else
      blk::project(xa, prods[l], aq[l], /*conjugate=*/false);
  }
  if (two_sided()) {
    prods_left.resize(degree_ + 1);
    for (int l = 0; l <= degree_; ++l) {
      prods_left[l].resize(n_, m);
      for (int j = 0; j < m; ++j)
        std::copy(coeff_prod_left_[l].col(j), coeff_prod_left_[l].col(j) + n_,
                  prods_left[l].col(j));
    }
  }

  BlockC ca, cb;
  polynomial_linearize(aq, ca, cb);
  GeneralReducedEig red;
  if (reduced_general_eig(ca, cb, two_sided(), red) != ReducedStatus::Ok) {
    finish(InfoCode{InfoCode::ReducedSolverError});
    return;
  }
  if (two_sided() && !red.binormalized) biorth_ok_ = false;

  // Keep the candidate list: all inside pencil values first, then the
  // nearest outside ones as buffer. Candidates may outnumber the basis rank
  // (roots sharing eigenvector directions) up to min(m0, degree * rank).
  const int pm = degree_ * m;
  const int n_keep = std::min(m0_, pm);
  std::vector<int> inside_idx, outside_idx;
  for (int i = 0; i < pm; ++i)
    (s_.classifier.inside(red.values[i]) ? inside_idx : outside_idx).push_back(i);
  std::stable_sort(outside_idx.begin(), outside_idx.end(), [&](int a, int b) {
    const double da = std::abs(red.values[a] - s_.region_center);
    const double db = std::abs(red.values[b] - s_.region_center);
    if (da != db) return da < db;
    const cplx va = red.values[a], vb = red.values[b];
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });
  subspace_overflow_ = static_cast<int>(inside_idx.size()) > n_keep;
  std::vector<int> keep;
  for (int i : inside_idx) {
    if (static_cast<int>(keep.size()) == n_keep) break;
    keep.push_back(i);
  }
  for (int i : outside_idx) {
    if (static_cast<int>(keep.size()) == n_keep) break;
    keep.push_back(i);
  }
  m_cand_ = n_keep;
  for (int j = m_cand_; j < m0_; ++j) {
    eig_[j] = cplx{};
    res_[j] = 0.0;
    if (two_sided()) res_left_[j] = 0.0;
  }

  // Reduced polynomial eigenvectors: first block row (right), last (left).
  BlockC phi(m, n_keep), psi;
  for (int j = 0; j < n_keep; ++j)
    for (int i = 0; i < m; ++i) phi.at(i, j) = red.right.at(i, keep[j]);
  if (two_sided()) {
    psi.resize(m, n_keep);
    for (int j = 0; j < n_keep; ++j)
      for (int i = 0; i < m; ++i) psi.at(i, j) = red.left.at((degree_ - 1) * m + i, keep[j]);
  }

  BlockC xn, yn;
  blk::combine(xa, phi, xn);
  std::vector<BlockC> pn(degree_ + 1), pnl;
  for (int l = 0; l <= degree_; ++l) blk::combine(prods[l], phi, pn[l]);
  if (two_sided()) {
    blk::combine(ya, psi, yn);
    pnl.resize(degree_ + 1);
    for (int l = 0; l <= degree_; ++l) blk::combine(prods_left[l], psi, pnl[l]);
  }

  for (int j = 0; j < n_keep; ++j) {
    const double c = blk::norm2(xn.col(j), n_);
    const cplx inv(c > 0 ? 1.0 / c : 1.0, 0.0);
    for (int i = 0; i < n_; ++i) xn.at(i, j) *= inv;
    for (int l = 0; l <= degree_; ++l)
      for (int i = 0; i < n_; ++i) pn[l].at(i, j) *= inv;
    if (two_sided()) {
      const double cl = blk::norm2(yn.col(j), n_);
      const cplx invl(cl > 0 ? 1.0 / cl : 1.0, 0.0);
      for (int i = 0; i < n_; ++i) yn.at(i, j) *= invl;
      for (int l = 0; l <= degree_; ++l)
        for (int i = 0; i < n_; ++i) pnl[l].at(i, j) *= invl;
    }
  }

  for (int j = 0; j < n_keep; ++j) {
    eig_[j] = red.values[keep[j]];
    cplx lp(1.0, 0.0);
    std::vector<cplx> powers(degree_ + 1);
    for (int l = 0; l <= degree_; ++l) {
      powers[l] = lp;
      lp *= eig_[j];
    }
    double rn = 0.0;
    for (int i = 0; i < n_; ++i) {
      cplx r{};
      for (int l = 0; l <= degree_; ++l) r += powers[l] * pn[l].at(i, j);
      r_right_.at(i, j) = r;
      rn += std::norm(r);
    }
    res_[j] = std::sqrt(rn) / res_scale_poly_;
    if (two_sided()) {
      double rl = 0.0;
      for (int i = 0; i < n_; ++i) {
        cplx r{};
        for (int l = 0; l <= degree_; ++l) r += std::conj(powers[l]) * pnl[l].at(i, j);
        r_left_.at(i, j) = r;
        rl += std::norm(r);
      }
      res_left_[j] = std::sqrt(rl) / res_scale_poly_;
    }
  }

  for (int j = 0; j < n_keep; ++j) {
    std::copy(xn.col(j), xn.col(j) + n_, x_.col(j));
    for (int l = 0; l <= degree_; ++l)
      std::copy(pn[l].col(j), pn[l].col(j) + n_, coeff_prod_[l].col(j));
    if (two_sided()) {
      std::copy(yn.col(j), yn.col(j) + n_, x_.col(m0_ + j));
      for (int l = 0; l <= degree_; ++l)
        std::copy(pnl[l].col(j), pnl[l].col(j) + n_, coeff_prod_left_[l].col(j));
    }
  }

  std::vector<cplx> active_eigs(eig_.begin(), eig_.begin() + n_keep);
  int m_inside = 0;
  const auto perm =
      rci_detail::inside_first_order(active_eigs, n_keep, s_.classifier, m_inside);
  rci_detail::permute_values(eig_, perm);
  rci_detail::permute_values(res_, perm);
  permute_active_columns(x_, perm);
  permute_active_columns(r_right_, perm);
  for (int l = 0; l <= degree_; ++l) permute_active_columns(coeff_prod_[l], perm);
  if (two_sided()) {
    rci_detail::permute_values(res_left_, perm);
    permute_active_columns(x_, perm, m0_);
    permute_active_columns(r_left_, perm);
    for (int l = 0; l <= degree_; ++l) permute_active_columns(coeff_prod_left_[l], perm);
  }

  m_ = m_inside;
  double trace = 0.0;
  for (int j = 0; j < m_; ++j) trace += eig_[j].real();
  epsout_ = have_trace_ ? std::abs(trace - trace_prev_) / std::max(s_.trace_scale, 1e-300)
                        : 1.0;
  trace_prev_ = trace;
  have_trace_ = true;
  {
    LoopStat st;
    st.loop = loop_;
    st.m = m_;
    st.trace = trace;
    st.epsout = epsout_;
    st.max_res = convergence_report().max_res;
    history_.push_back(st);
  }

  if (m_ == 0) {
    finish(InfoCode{InfoCode::NoEigenvalueFound});
    return;
  }
  if (convergence_report().converged) {
    if (m_ >= m_cand_ || subspace_overflow_) {
      finish(InfoCode{InfoCode::SubspaceTooSmall});
      return;
    }
    finish((two_sided() && !biorth_ok_) ? InfoCode{InfoCode::NotBiorthonormal} : InfoCode{});
    return;
  }
  if (loop_ >= s_.config.max_loops()) {
    finish((m_ >= m_cand_ || subspace_overflow_) ? InfoCode{InfoCode::SubspaceTooSmall}
                                                 : InfoCode{InfoCode::NoConvergence});
    return;
  }
  ++loop_;
  rhs_right_ = r_right_;
  if (two_sided()) rhs_left_ = r_left_;
  start_contour();
}

ConvergenceReport PolynomialRci::convergence_report() const {
  ConvergenceReport rep;
  rep.epsout = epsout_;
  rep.m = m_;
  for (int j = 0; j < m_; ++j) {
    rep.max_res = std::max(rep.max_res, res_[j]);
    if (two_sided()) rep.max_res = std::max(rep.max_res, res_left_[j]);
  }
  const double eps = s_.config.stop_eps();
  rep.converged = (s_.config.convergence_criterion() == 0) ? (rep.epsout < eps)
                                                           : (rep.max_res < eps);
  return rep;
}

Action PolynomialRci::next() {
  switch (phase_) {
    case Phase::Start: {
      if (!s_.config.use_initial_guess()) {
        rci_detail::Rng rng(s_.seed);
        const int xcols = two_sided() ? 2 * m0_ : m0_;
        for (int j = 0; j < xcols; ++j)
          for (int i = 0; i < n_; ++i)
            x_.at(i, j) = (s_.config.mode() == 2) ? cplx(rng.rademacher(), 0.0)
                                                  : rng.unit_disk();
      }
      // The first pass filters the block itself; no mass matrix exists here.
      for (int j = 0; j < m_cand_; ++j)
        std::copy(x_.col(j), x_.col(j) + n_, rhs_right_.col(j));
      if (two_sided())
        for (int j = 0; j < m_cand_; ++j)
          std::copy(x_.col(m0_ + j), x_.col(m0_ + j) + n_, rhs_left_.col(j));
      start_contour();
      return begin_node();
    }
    case Phase::NodeFactorize:
      load_rhs(work2_, rhs_right_, n_, m_cand_);
      phase_ = Phase::NodeSolve;
      return Action{ActionKind::Solve, node_, s_.rule.nodes[node_], 1, 1, 0, m_cand_};
    case Phase::NodeSolve: {
      const cplx w = s_.rule.weights[node_];
      const cplx z = s_.rule.nodes[node_];
      for (int j = 0; j < m_cand_; ++j) {
        // Loop 0 is the plain filter; later loops subtract the update built
        // from P(lambda_j) x_j, hence the sign flip.
        const cplx coef =
            (loop_ == 0) ? w : -col_scale_[j] * w / guarded_difference(z, eig_[j]);
        blk::axpy(n_, coef, work2_.col(j), acc_right_.col(j));
      }
      if (two_sided()) {
        const bool need_factor = (loop_ == 0) || !s_.config.cache_factorizations();
        if (!s_.adjoint_reuse && need_factor) {
          phase_ = Phase::NodeFactorizeAdjoint;
          return Action{ActionKind::FactorizeAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, 0};
        }
        load_rhs(work2_, rhs_left_, n_, m_cand_);
        phase_ = Phase::NodeSolveAdjoint;
        return Action{ActionKind::SolveAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0,
                      m_cand_};
      }
      ++node_;
      return begin_node();
    }
    case Phase::NodeFactorizeAdjoint:
      load_rhs(work2_, rhs_left_, n_, m_cand_);
      phase_ = Phase::NodeSolveAdjoint;
      return Action{ActionKind::SolveAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, m_cand_};
    case Phase::NodeSolveAdjoint: {
      const cplx w = s_.rule.weights[node_];
      const cplx z = s_.rule.nodes[node_];
      for (int j = 0; j < m_cand_; ++j) {
        const cplx coef = std::conj(
            (loop_ == 0) ? w : -col_scale_[j] * w / guarded_difference(z, eig_[j]));
        blk::axpy(n_, coef, work2_.col(j), acc_left_.col(j));
      }
      ++node_;
      return begin_node();
    }
    case Phase::SweepA: {
      for (int j = 0; j < m_cand_; ++j)
        std::copy(work1_.col(j), work1_.col(j) + n_, coeff_prod_[sweep_index_].col(j));
      ++sweep_index_;
      if (sweep_index_ <= degree_)
        return Action{ActionKind::MultiplyA, 0, cplx{}, sweep_index_ + 1, 1, m_cand_, 0};
      if (two_sided()) {
        sweep_index_ = 0;
        phase_ = Phase::SweepAAdjoint;
        return Action{ActionKind::MultiplyAAdjoint, 0, cplx{}, 1, m0_ + 1, m_cand_, 0};
      }
      rayleigh_ritz_and_check();
      if (done_) return Action{};
      return begin_node();
    }
    case Phase::SweepAAdjoint: {
      for (int j = 0; j < m_cand_; ++j)
        std::copy(work1_.col(m0_ + j), work1_.col(m0_ + j) + n_,
                  coeff_prod_left_[sweep_index_].col(j));
      ++sweep_index_;
      if (sweep_index_ <= degree_)
        return Action{ActionKind::MultiplyAAdjoint, 0, cplx{}, sweep_index_ + 1, m0_ + 1,
                      m_cand_, 0};
      rayleigh_ritz_and_check();
      if (done_) return Action{};
      return begin_node();
    }
    case Phase::Finished:
      return Action{};
    default:
      return Action{};
  }
}

} // namespace spslice
