#include <cmath>

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

GeneralRci::GeneralRci(const KernelSetup& setup)
    : s_(setup), n_(setup.n), m0_(setup.m0), m_act_(setup.m0),
      sided_(setup.config.sidedness()), phase_(Phase::Start) {
  const int xcols = two_sided() ? 2 * m0_ : m0_;
  x_.resize(n_, xcols);
  work1_.resize(n_, xcols);
  work2_.resize(n_, m0_);
  rhs_right_.resize(n_, m0_);
  acc_right_.resize(n_, m0_);
  ax_.resize(n_, m0_);
  bx_.resize(n_, m0_);
  r_right_.resize(n_, m0_);
  if (two_sided()) {
    rhs_left_.resize(n_, m0_);
    acc_left_.resize(n_, m0_);
    ahy_.resize(n_, m0_);
    bhy_.resize(n_, m0_);
    r_left_.resize(n_, m0_);
    res_left_.assign(m0_, 0.0);
  }
  eig_.assign(m0_, cplx{});
  res_.assign(m0_, 0.0);
}

void GeneralRci::report_failure(InfoCode code) { finish(code); }

void GeneralRci::finish(InfoCode code) {
  info_ = code;
  done_ = true;
  phase_ = Phase::Finished;
}

void GeneralRci::start_contour() {
  acc_right_.zero();
  if (two_sided()) acc_left_.zero();
  node_ = 0;
  col_scale_.assign(m0_, cplx(1.0, 0.0));
  if (loop_ > 0)
    for (int j = 0; j < m_act_; ++j)
      col_scale_[j] = rci_detail::residual_update_scale(s_.rule, eig_[j]);
}

Action GeneralRci::begin_node() {
  if (node_ >= s_.rule.size()) return after_contour();
  const bool need_factor = (loop_ == 0) || !s_.config.cache_factorizations();
  if (need_factor) {
    phase_ = Phase::NodeFactorize;
    return Action{ActionKind::Factorize, node_, s_.rule.nodes[node_], 1, 1, 0, 0};
  }
  load_rhs(work2_, rhs_right_, n_, m_act_);
  phase_ = Phase::NodeSolve;
  return Action{ActionKind::Solve, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
}

Action GeneralRci::after_contour() {
  BlockC q(n_, m0_);
  for (int j = 0; j < m_act_; ++j)
    for (int i = 0; i < n_; ++i)
      q.at(i, j) = (loop_ == 0) ? acc_right_.at(i, j) : x_.at(i, j) + acc_right_.at(i, j);

  if (s_.config.mode() == 1) {
    for (int j = 0; j < m_act_; ++j) std::copy(q.col(j), q.col(j) + n_, x_.col(j));
    if (two_sided())
      for (int j = 0; j < m_act_; ++j) {
        for (int i = 0; i < n_; ++i)
          x_.at(i, m0_ + j) = (loop_ == 0) ? acc_left_.at(i, j)
                                           : x_.at(i, m0_ + j) + acc_left_.at(i, j);
      }
    m_ = m_act_;
    finish(InfoCode{InfoCode::SubspaceOnly});
    return Action{};
  }
  if (s_.config.mode() == 2) {
    double t = 0.0;
    for (int j = 0; j < m_act_; ++j)
      t += std::real(blk::dot_conj(x_.col(j), q.col(j), n_));
    m_ = static_cast<int>(std::lround(std::max(0.0, t / m_act_)));
    finish(InfoCode{InfoCode::StochasticOnly});
    return Action{};
  }

  for (int j = 0; j < m_act_; ++j) std::copy(q.col(j), q.col(j) + n_, x_.col(j));
  if (two_sided()) {
    for (int j = 0; j < m_act_; ++j)
      for (int i = 0; i < n_; ++i)
        x_.at(i, m0_ + j) =
            (loop_ == 0) ? acc_left_.at(i, j) : x_.at(i, m0_ + j) + acc_left_.at(i, j);
  }
  phase_ = Phase::SweepA;
  return Action{ActionKind::MultiplyA, 0, cplx{}, 1, 1, m_act_, 0};
}

void GeneralRci::rayleigh_ritz_and_check() {
  // Views over the right and (optionally) left halves of x_.
  BlockC xr(n_, m_act_), yl;
  for (int j = 0; j < m_act_; ++j) std::copy(x_.col(j), x_.col(j) + n_, xr.col(j));

  std::vector<BlockC*> mates_r{&ax_, &bx_};
  int m_r = rci_detail::mgs_orthonormalize(xr, mates_r, m_act_);
  int m_l = m_r;
  if (two_sided()) {
    yl.resize(n_, m_act_);
    for (int j = 0; j < m_act_; ++j)
      std::copy(x_.col(m0_ + j), x_.col(m0_ + j) + n_, yl.col(j));
    std::vector<BlockC*> mates_l{&ahy_, &bhy_};
    m_l = rci_detail::mgs_orthonormalize(yl, mates_l, m_act_);
  }
  m_act_ = std::min(m_r, m_l);
  for (int j = m_act_; j < m0_; ++j) {
    eig_[j] = cplx{};
    res_[j] = 0.0;
    if (two_sided()) res_left_[j] = 0.0;
  }
  if (m_act_ == 0) {
    finish(InfoCode{InfoCode::NoEigenvalueFound});
    return;
  }

  BlockC xa(n_, m_act_), ya;
  for (int j = 0; j < m_act_; ++j) std::copy(xr.col(j), xr.col(j) + n_, xa.col(j));
  if (two_sided()) {
    ya.resize(n_, m_act_);
    for (int j = 0; j < m_act_; ++j) std::copy(yl.col(j), yl.col(j) + n_, ya.col(j));
  }
  BlockC axa(n_, m_act_), bxa(n_, m_act_), ahya, bhya;
  for (int j = 0; j < m_act_; ++j) {
    std::copy(ax_.col(j), ax_.col(j) + n_, axa.col(j));
    std::copy(bx_.col(j), bx_.col(j) + n_, bxa.col(j));
  }
  if (two_sided()) {
    ahya.resize(n_, m_act_);
    bhya.resize(n_, m_act_);
    for (int j = 0; j < m_act_; ++j) {
      std::copy(ahy_.col(j), ahy_.col(j) + n_, ahya.col(j));
      std::copy(bhy_.col(j), bhy_.col(j) + n_, bhya.col(j));
    }
  }

  BlockC aq, bq;
  if (sided_ == 0) {
    blk::project(ya, axa, aq);
    blk::project(ya, bxa, bq);
  } else if (sided_ == 1) {
    blk::project(xa, axa, aq);
    blk::project(xa, bxa, bq);
  } else {
    // left = conj(right): transpose projections keep the pencil symmetric.
    blk::project(xa, axa, aq, /*conjugate=*/false);
    blk::project(xa, bxa, bq, /*conjugate=*/false);
  }

  GeneralReducedEig red;
  if (reduced_general_eig(aq, bq, two_sided(), red) != ReducedStatus::Ok) {
    finish(InfoCode{InfoCode::ReducedSolverError});
    return;
  }
  if (two_sided() && !red.binormalized) biorth_ok_ = false;

  BlockC xn, an, bn, yn, ahn, bhn;
  blk::combine(xa, red.right, xn);
  blk::combine(axa, red.right, an);
  blk::combine(bxa, red.right, bn);
  if (two_sided()) {
    blk::combine(ya, red.left, yn);
    blk::combine(ahya, red.left, ahn);
    blk::combine(bhya, red.left, bhn);
  }

  // Unit right columns; left columns co-scaled to preserve y^H B x.
  for (int j = 0; j < m_act_; ++j) {
    const double c = blk::norm2(xn.col(j), n_);
    if (c == 0.0) continue;
    const cplx inv(1.0 / c, 0.0);
    for (int i = 0; i < n_; ++i) {
      xn.at(i, j) *= inv;
      an.at(i, j) *= inv;
      bn.at(i, j) *= inv;
    }
    if (two_sided()) {
      const cplx mul(c, 0.0);
      for (int i = 0; i < n_; ++i) {
        yn.at(i, j) *= mul;
        ahn.at(i, j) *= mul;
        bhn.at(i, j) *= mul;
      }
    }
  }

  const double alpha = s_.residual_scale;
  for (int j = 0; j < m_act_; ++j) {
    eig_[j] = red.values[j];
    double rn = 0.0, bnrm = 0.0;
    for (int i = 0; i < n_; ++i) {
      const cplx r = an.at(i, j) - eig_[j] * bn.at(i, j);
      r_right_.at(i, j) = r;
      rn += std::norm(r);
      bnrm += std::norm(bn.at(i, j));
    }
    res_[j] = std::sqrt(rn) / std::max(alpha * std::sqrt(bnrm), 1e-300);
    if (two_sided()) {
      double rl = 0.0, bl = 0.0;
      const cplx lc = std::conj(eig_[j]);
      for (int i = 0; i < n_; ++i) {
        const cplx r = ahn.at(i, j) - lc * bhn.at(i, j);
        r_left_.at(i, j) = r;
        rl += std::norm(r);
        bl += std::norm(bhn.at(i, j));
      }
      res_left_[j] = std::sqrt(rl) / std::max(alpha * std::sqrt(bl), 1e-300);
    }
  }

  for (int j = 0; j < m_act_; ++j) {
    std::copy(xn.col(j), xn.col(j) + n_, x_.col(j));
    std::copy(an.col(j), an.col(j) + n_, ax_.col(j));
    std::copy(bn.col(j), bn.col(j) + n_, bx_.col(j));
    if (two_sided()) {
      std::copy(yn.col(j), yn.col(j) + n_, x_.col(m0_ + j));
      std::copy(ahn.col(j), ahn.col(j) + n_, ahy_.col(j));
      std::copy(bhn.col(j), bhn.col(j) + n_, bhy_.col(j));
    }
  }

  std::vector<cplx> active_eigs(eig_.begin(), eig_.begin() + m_act_);
  int m_inside = 0;
  const auto perm =
      rci_detail::inside_first_order(active_eigs, m_act_, s_.classifier, m_inside);
  rci_detail::permute_values(eig_, perm);
  rci_detail::permute_values(res_, perm);
  permute_active_columns(x_, perm);
  permute_active_columns(ax_, perm);
  permute_active_columns(bx_, perm);
  permute_active_columns(r_right_, perm);
  if (two_sided()) {
    rci_detail::permute_values(res_left_, perm);
    permute_active_columns(x_, perm, m0_);
    permute_active_columns(ahy_, perm);
    permute_active_columns(bhy_, perm);
    permute_active_columns(r_left_, perm);
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
    if (m_ >= m_act_) {
      finish(InfoCode{InfoCode::SubspaceTooSmall});
      return;
    }
    if (two_sided()) {
      // Final bi-orthonormality audit over the converged pairs.
      double off = biorth_ok_ ? 0.0 : 1.0;
      for (int i = 0; i < m_ && off <= 1e-8; ++i)
        for (int j = 0; j < m_; ++j) {
          const cplx g = blk::dot_conj(x_.col(m0_ + i), bx_.col(j), n_);
          const double dev = std::abs(g - ((i == j) ? cplx(1.0, 0.0) : cplx{}));
          off = std::max(off, dev);
        }
      if (off > 1e-8) {
        finish(InfoCode{InfoCode::NotBiorthonormal});
        return;
      }
    }
    finish(InfoCode{});
    return;
  }
  if (loop_ >= s_.config.max_loops()) {
    finish(m_ >= m_act_ ? InfoCode{InfoCode::SubspaceTooSmall}
                        : InfoCode{InfoCode::NoConvergence});
    return;
  }
  ++loop_;
  rhs_right_ = r_right_;
  if (two_sided()) rhs_left_ = r_left_;
  start_contour();
}

ConvergenceReport GeneralRci::convergence_report() const {
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

Action GeneralRci::next() {
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
      phase_ = Phase::InitB;
      return Action{ActionKind::MultiplyB, 0, cplx{}, 1, 1, m_act_, 0};
    }
    case Phase::InitB: {
      for (int j = 0; j < m_act_; ++j)
        std::copy(work1_.col(j), work1_.col(j) + n_, rhs_right_.col(j));
      if (two_sided()) {
        phase_ = Phase::InitBAdjoint;
        return Action{ActionKind::MultiplyBAdjoint, 0, cplx{}, 1, m0_ + 1, m_act_, 0};
      }
      start_contour();
      return begin_node();
    }
    case Phase::InitBAdjoint: {
      for (int j = 0; j < m_act_; ++j)
        std::copy(work1_.col(m0_ + j), work1_.col(m0_ + j) + n_, rhs_left_.col(j));
      start_contour();
      return begin_node();
    }
    case Phase::NodeFactorize:
      load_rhs(work2_, rhs_right_, n_, m_act_);
      phase_ = Phase::NodeSolve;
      return Action{ActionKind::Solve, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
    case Phase::NodeSolve: {
      const cplx w = s_.rule.weights[node_];
      const cplx z = s_.rule.nodes[node_];
      for (int j = 0; j < m_act_; ++j) {
        const cplx coef =
            (loop_ == 0) ? w : col_scale_[j] * w / guarded_difference(z, eig_[j]);
        blk::axpy(n_, coef, work2_.col(j), acc_right_.col(j));
      }
      if (two_sided()) {
        const bool need_factor = (loop_ == 0) || !s_.config.cache_factorizations();
        if (!s_.adjoint_reuse && need_factor) {
          phase_ = Phase::NodeFactorizeAdjoint;
          return Action{ActionKind::FactorizeAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, 0};
        }
        load_rhs(work2_, rhs_left_, n_, m_act_);
        phase_ = Phase::NodeSolveAdjoint;
        return Action{ActionKind::SolveAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
      }
      ++node_;
      return begin_node();
    }
    case Phase::NodeFactorizeAdjoint:
      load_rhs(work2_, rhs_left_, n_, m_act_);
      phase_ = Phase::NodeSolveAdjoint;
      return Action{ActionKind::SolveAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
    case Phase::NodeSolveAdjoint: {
      const cplx w = s_.rule.weights[node_];
      const cplx z = s_.rule.nodes[node_];
      for (int j = 0; j < m_act_; ++j) {
        const cplx coef = std::conj(
            (loop_ == 0) ? w : col_scale_[j] * w / guarded_difference(z, eig_[j]));
        blk::axpy(n_, coef, work2_.col(j), acc_left_.col(j));
      }
      ++node_;
      return begin_node();
    }
    case Phase::SweepA:
      for (int j = 0; j < m_act_; ++j)
        std::copy(work1_.col(j), work1_.col(j) + n_, ax_.col(j));
      if (two_sided()) {
        phase_ = Phase::SweepAAdjoint;
        return Action{ActionKind::MultiplyAAdjoint, 0, cplx{}, 1, m0_ + 1, m_act_, 0};
      }
      phase_ = Phase::SweepB;
      return Action{ActionKind::MultiplyB, 0, cplx{}, 1, 1, m_act_, 0};
    case Phase::SweepAAdjoint:
      for (int j = 0; j < m_act_; ++j)
        std::copy(work1_.col(m0_ + j), work1_.col(m0_ + j) + n_, ahy_.col(j));
      phase_ = Phase::SweepB;
      return Action{ActionKind::MultiplyB, 0, cplx{}, 1, 1, m_act_, 0};
    case Phase::SweepB:
      for (int j = 0; j < m_act_; ++j)
        std::copy(work1_.col(j), work1_.col(j) + n_, bx_.col(j));
      if (two_sided()) {
        phase_ = Phase::SweepBAdjoint;
        return Action{ActionKind::MultiplyBAdjoint, 0, cplx{}, 1, m0_ + 1, m_act_, 0};
      }
      rayleigh_ritz_and_check();
      if (done_) return Action{};
      return begin_node();
    case Phase::SweepBAdjoint:
      for (int j = 0; j < m_act_; ++j)
        std::copy(work1_.col(m0_ + j), work1_.col(m0_ + j) + n_, bhy_.col(j));
      rayleigh_ritz_and_check();
      if (done_) return Action{};
      return begin_node();
    case Phase::Finished:
      return Action{};
  }
  return Action{};
}

} // namespace spslice
