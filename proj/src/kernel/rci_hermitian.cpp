#include <cmath>

#include "kernel/rci.hpp"
#include "kernel/rci_common.hpp"
#include "linalg/reduced_eig.hpp"

namespace spslice {

using rci_detail::guarded_difference;

namespace {

inline void assign_scalar(double& dst, const cplx& src) { dst = src.real(); }
inline void assign_scalar(cplx& dst, const cplx& src) { dst = src; }

// Reorder the first m_act columns of a block by perm.
template <class T>
void permute_active_columns(Block<T>& b, const std::vector<int>& perm) {
  const int n = b.rows;
  const int m = static_cast<int>(perm.size());
  Block<T> tmp(n, m);
  for (int j = 0; j < m; ++j) std::copy(b.col(perm[j]), b.col(perm[j]) + n, tmp.col(j));
  for (int j = 0; j < m; ++j) std::copy(tmp.col(j), tmp.col(j) + n, b.col(j));
}

} // namespace

template <class Scalar>
HermitianRci<Scalar>::HermitianRci(const KernelSetup& setup)
    : s_(setup), n_(setup.n), m0_(setup.m0), m_act_(setup.m0), phase_(Phase::Start) {
  x_.resize(n_, m0_);
  work1_.resize(n_, m0_);
  work2_.resize(n_, m0_);
  rhs_.resize(n_, m0_);
  acc_.resize(n_, m0_);
  resid_block_.resize(n_, m0_);
  eig_.assign(m0_, 0.0);
  res_.assign(m0_, 0.0);
  // With complex storage the conjugate-node contributions of a half rule
  // need explicit adjoint solves; real storage folds them in as 2*Re.
  need_adjoint_pass_ = !std::is_same_v<Scalar, double> &&
                       s_.rule.closure == ContourRule::Closure::HalfSymmetric;
}

template <class Scalar>
void HermitianRci<Scalar>::report_failure(InfoCode code) {
  finish(code);
}

template <class Scalar>
void HermitianRci<Scalar>::finish(InfoCode code) {
  info_ = code;
  done_ = true;
  phase_ = Phase::Finished;
}

template <class Scalar>
void HermitianRci<Scalar>::start_contour() {
  acc_.zero();
  node_ = 0;
  col_scale_.assign(m0_, cplx(1.0, 0.0));
  if (loop_ > 0)
    for (int j = 0; j < m_act_; ++j)
      col_scale_[j] = rci_detail::residual_update_scale(s_.rule, cplx(eig_[j], 0.0));
}

template <class Scalar>
Action HermitianRci<Scalar>::begin_node() {
  if (node_ >= s_.rule.size()) return after_contour();
  const bool need_factor = (loop_ == 0) || !s_.config.cache_factorizations();
  if (need_factor) {
    phase_ = Phase::NodeFactorize;
    return Action{ActionKind::Factorize, node_, s_.rule.nodes[node_], 1, 1, 0, 0};
  }
  for (int j = 0; j < m_act_; ++j)
    for (int i = 0; i < n_; ++i) work2_.at(i, j) = cplx(rhs_.at(i, j));
  phase_ = Phase::NodeSolve;
  return Action{ActionKind::Solve, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
}

template <class Scalar>
void HermitianRci<Scalar>::accumulate_solution(bool adjoint) {
  const cplx w = s_.rule.weights[node_];
  const cplx z = s_.rule.nodes[node_];
  const bool fold_conjugate =
      std::is_same_v<Scalar, double> && s_.rule.closure == ContourRule::Closure::HalfSymmetric;
  for (int j = 0; j < m_act_; ++j) {
    cplx coef = (loop_ == 0) ? w : col_scale_[j] * w / guarded_difference(z, eig_[j]);
    if (adjoint) coef = std::conj(coef);
    cplx* acc = acc_.col(j);
    const cplx* sol = work2_.col(j);
    if (fold_conjugate) {
      for (int i = 0; i < n_; ++i) acc[i] += 2.0 * std::real(coef * sol[i]);
    } else {
      for (int i = 0; i < n_; ++i) acc[i] += coef * sol[i];
    }
  }
}

template <class Scalar>
Action HermitianRci<Scalar>::after_contour() {
  Block<Scalar> q(n_, m0_);
  for (int j = 0; j < m_act_; ++j)
    for (int i = 0; i < n_; ++i) {
      Scalar v;
      assign_scalar(v, acc_.at(i, j));
      q.at(i, j) = (loop_ == 0) ? v : x_.at(i, j) + v;
    }

  if (s_.config.mode() == 1) { // subspace-only: hand back the raw filtered block
    x_ = q;
    m_ = m_act_;
    finish(InfoCode{InfoCode::SubspaceOnly});
    return Action{};
  }
  if (s_.config.mode() == 2) { // stochastic estimate of the filter trace
    double t = 0.0;
    for (int j = 0; j < m_act_; ++j)
      t += std::real(blk::dot_conj(x_.col(j), q.col(j), n_));
    m_ = static_cast<int>(std::lround(std::max(0.0, t / m_act_)));
    finish(InfoCode{InfoCode::StochasticOnly});
    return Action{};
  }

  x_ = q;
  phase_ = Phase::SweepA;
  return Action{ActionKind::MultiplyA, 0, cplx{}, 1, 1, m_act_, 0};
}

template <class Scalar>
void HermitianRci<Scalar>::rayleigh_ritz_and_check() {
  std::vector<Block<Scalar>*> mates{&aq_prod_};
  m_act_ = rci_detail::mgs_orthonormalize(x_, &bq_prod_, mates, m_act_);
  for (int j = m_act_; j < m0_; ++j) {
    eig_[j] = 0.0;
    res_[j] = 0.0;
  }
  if (m_act_ == 0) {
    finish(InfoCode{InfoCode::NoEigenvalueFound});
    return;
  }

  Block<Scalar> xa(n_, m_act_), aa(n_, m_act_), bb(n_, m_act_);
  for (int j = 0; j < m_act_; ++j) {
    std::copy(x_.col(j), x_.col(j) + n_, xa.col(j));
    std::copy(aq_prod_.col(j), aq_prod_.col(j) + n_, aa.col(j));
    std::copy(bq_prod_.col(j), bq_prod_.col(j) + n_, bb.col(j));
  }
  Block<Scalar> aq, bq;
  blk::project(xa, aa, aq);
  blk::project(xa, bb, bq);

  std::vector<double> lam;
  Block<Scalar> phi;
  if (!reduced_hermitian_eig(aq, bq, lam, phi)) {
    finish(InfoCode{InfoCode::ReducedSolverError});
    return;
  }

  Block<Scalar> xn, an, bn;
  blk::combine(xa, phi, xn);
  blk::combine(aa, phi, an);
  blk::combine(bb, phi, bn);
  for (int j = 0; j < m_act_; ++j) {
    std::copy(xn.col(j), xn.col(j) + n_, x_.col(j));
    std::copy(an.col(j), an.col(j) + n_, aq_prod_.col(j));
    std::copy(bn.col(j), bn.col(j) + n_, bq_prod_.col(j));
  }

  const double alpha = s_.residual_scale;
  for (int j = 0; j < m_act_; ++j) {
    eig_[j] = lam[j];
    double rn = 0.0, bnrm = 0.0;
    for (int i = 0; i < n_; ++i) {
      const Scalar r = aq_prod_.at(i, j) - Scalar(lam[j]) * bq_prod_.at(i, j);
      resid_block_.at(i, j) = r;
      rn += std::norm(r);
      bnrm += std::norm(bq_prod_.at(i, j));
    }
    res_[j] = std::sqrt(rn) / std::max(alpha * std::sqrt(bnrm), 1e-300);
  }

  std::vector<double> active_eigs(eig_.begin(), eig_.begin() + m_act_);
  int m_inside = 0;
  const auto perm =
      rci_detail::inside_first_order(active_eigs, m_act_, s_.classifier, m_inside);
  rci_detail::permute_values(eig_, perm);
  rci_detail::permute_values(res_, perm);
  permute_active_columns(x_, perm);
  permute_active_columns(aq_prod_, perm);
  permute_active_columns(bq_prod_, perm);
  permute_active_columns(resid_block_, perm);

  m_ = m_inside;
  double trace = 0.0;
  for (int j = 0; j < m_; ++j) trace += eig_[j];
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
    finish(m_ >= m_act_ ? InfoCode{InfoCode::SubspaceTooSmall} : InfoCode{});
    return;
  }
  if (loop_ >= s_.config.max_loops()) {
    finish(m_ >= m_act_ ? InfoCode{InfoCode::SubspaceTooSmall}
                        : InfoCode{InfoCode::NoConvergence});
    return;
  }
  ++loop_;
  rhs_ = resid_block_;
  start_contour();
}

template <class Scalar>
ConvergenceReport HermitianRci<Scalar>::convergence_report() const {
  ConvergenceReport rep;
  rep.epsout = epsout_;
  rep.m = m_;
  for (int j = 0; j < m_; ++j) rep.max_res = std::max(rep.max_res, res_[j]);
  const double eps = s_.config.stop_eps();
  rep.converged = (s_.config.convergence_criterion() == 0) ? (rep.epsout < eps)
                                                           : (rep.max_res < eps);
  return rep;
}

template <class Scalar>
Action HermitianRci<Scalar>::next() {
  switch (phase_) {
    case Phase::Start: {
      if (!s_.config.use_initial_guess()) {
        rci_detail::Rng rng(s_.seed);
        for (int j = 0; j < m0_; ++j)
          for (int i = 0; i < n_; ++i) {
            if (s_.config.mode() == 2)
              x_.at(i, j) = Scalar(rng.rademacher());
            else if constexpr (std::is_same_v<Scalar, double>)
              x_.at(i, j) = rng.uniform_pm1();
            else
              x_.at(i, j) = rng.unit_disk();
          }
      }
      phase_ = Phase::InitB;
      return Action{ActionKind::MultiplyB, 0, cplx{}, 1, 1, m_act_, 0};
    }
    case Phase::InitB:
      rhs_ = work1_;
      start_contour();
      return begin_node();
    case Phase::NodeFactorize: {
      for (int j = 0; j < m_act_; ++j)
        for (int i = 0; i < n_; ++i) work2_.at(i, j) = cplx(rhs_.at(i, j));
      phase_ = Phase::NodeSolve;
      return Action{ActionKind::Solve, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
    }
    case Phase::NodeSolve: {
      accumulate_solution(false);
      if (need_adjoint_pass_) {
        const bool need_factor = (loop_ == 0) || !s_.config.cache_factorizations();
        if (!s_.adjoint_reuse && need_factor) {
          phase_ = Phase::NodeFactorizeAdjoint;
          return Action{ActionKind::FactorizeAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, 0};
        }
        for (int j = 0; j < m_act_; ++j)
          for (int i = 0; i < n_; ++i) work2_.at(i, j) = cplx(rhs_.at(i, j));
        phase_ = Phase::NodeSolveAdjoint;
        return Action{ActionKind::SolveAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
      }
      ++node_;
      return begin_node();
    }
    case Phase::NodeFactorizeAdjoint: {
      for (int j = 0; j < m_act_; ++j)
        for (int i = 0; i < n_; ++i) work2_.at(i, j) = cplx(rhs_.at(i, j));
      phase_ = Phase::NodeSolveAdjoint;
      return Action{ActionKind::SolveAdjoint, node_, s_.rule.nodes[node_], 1, 1, 0, m_act_};
    }
    case Phase::NodeSolveAdjoint:
      accumulate_solution(true);
      ++node_;
      return begin_node();
    case Phase::SweepA:
      aq_prod_ = work1_;
      phase_ = Phase::SweepB;
      return Action{ActionKind::MultiplyB, 0, cplx{}, 1, 1, m_act_, 0};
    case Phase::SweepB:
      bq_prod_ = work1_;
      rayleigh_ritz_and_check();
      if (done_) return Action{};
      return begin_node();
    case Phase::Finished:
      return Action{};
  }
  return Action{};
}

template class HermitianRci<double>;
template class HermitianRci<cplx>;

} // namespace spslice
