// Reverse-communication kernels. A kernel owns the iteration state and the
// shared workspaces; each next() call hands the caller one operation request
// (factorize a shifted operator, solve against the workspace, multiply a
// block). The caller performs it on the exposed workspaces and calls next()
// again. The kernel never touches user matrices, which keeps it storage- and
// solver-agnostic.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "contour/contour.hpp"
#include "core/config.hpp"
#include "core/types.hpp"
#include "linalg/blocks.hpp"

namespace spslice {

/// Operation requests, numbered like the classical ijob codes.
enum class ActionKind : int {
  Done = 0,
  Factorize = 10,        // build/factorize Az = Ze*B - A  (poly: P(Ze))
  Solve = 11,            // work2(:,1:rhs_count) <- Az^{-1} work2(:,1:rhs_count)
  FactorizeAdjoint = 20, // build/factorize Az^H (skipped when caller reuses)
  SolveAdjoint = 21,     // work2 <- Az^{-H} work2
  MultiplyA = 30,        // work1(:,c) <- A * x(:,c), c = col_first..col_first+col_count-1
  MultiplyAAdjoint = 31, // work1(:,c) <- A^H * x(:,c)
  MultiplyB = 40,        // work1(:,c) <- B * x(:,c)   (set work1 = x when B = I)
  MultiplyBAdjoint = 41, // work1(:,c) <- B^H * x(:,c)
};

struct Action {
  ActionKind kind = ActionKind::Done;
  int node = 0;        // contour-node index for factorize/solve
  cplx shift{};        // Ze for factorize
  int matrix_index = 1; // polynomial coefficient selector, 1..p+1 (A_{index-1})
  int col_first = 1;   // 1-based first column of x/work1 touched
  int col_count = 0;
  int rhs_count = 0;   // columns of work2 to solve
};

struct ConvergenceReport {
  double epsout = 0.0;
  double max_res = 0.0;
  int m = 0;
  bool converged = false;
};

/// One refinement iteration's summary, kept for run logs.
struct LoopStat {
  int loop = 0;
  int m = 0;
  double trace = 0.0;
  double epsout = 0.0;
  double max_res = 0.0;
};

/// Inputs shared by every kernel; drivers (or expert callers) build the
/// quadrature rule and the inside/outside test.
struct KernelSetup {
  int n = 0;
  int m0 = 0;
  Config config;
  ContourRule rule;
  RegionClassifier classifier = RegionClassifier::interval(0, 1);
  double residual_scale = 1.0; // alpha in the residual denominator
  double trace_scale = 1.0;    // normalizer of the trace error
  cplx region_center{};        // used to rank buffer values outside the region
  bool adjoint_reuse = true;   // caller solves Az^H from the Az factorization
  std::uint64_t seed = 0;
};

namespace rci_detail {

/// Deterministic uniform stream shared by every kernel (engine-native, so it
/// does not depend on the standard library's distribution implementation).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}
  double uniform01() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }
  cplx unit_disk() {
    const double r = std::sqrt(uniform01());
    const double t = 2.0 * 3.14159265358979323846 * uniform01();
    return cplx(r * std::cos(t), r * std::sin(t));
  }
  double rademacher() { return uniform01() < 0.5 ? -1.0 : 1.0; }

private:
  std::uint64_t state_;
};

} // namespace rci_detail

/// Kernel for real-symmetric (Scalar = double) and complex-Hermitian
/// (Scalar = cplx) problems over a real search interval. work1/x are real in
/// the real-symmetric instantiation; work2 is always complex.
template <class Scalar>
class HermitianRci {
public:
  HermitianRci(const KernelSetup& setup);

  Action next();
  void report_failure(InfoCode code);

  Block<Scalar>& x() { return x_; }
  Block<Scalar>& work1() { return work1_; }
  BlockC& work2() { return work2_; }
  const Block<Scalar>& x() const { return x_; }

  bool done() const { return done_; }
  InfoCode info() const { return info_; }
  int found() const { return m_; }
  int active_columns() const { return m_act_; }
  int loops() const { return loop_; }
  double epsout() const { return epsout_; }
  const std::vector<double>& eigenvalues() const { return eig_; }
  const std::vector<double>& residuals() const { return res_; }
  const std::vector<LoopStat>& history() const { return history_; }
  ConvergenceReport convergence_report() const;

private:
  enum class Phase {
    Start,
    InitB,
    NodeFactorize,
    NodeSolve,
    NodeFactorizeAdjoint,
    NodeSolveAdjoint,
    SweepA,
    SweepB,
    Finished,
  };
  void start_contour();
  Action begin_node();
  void accumulate_solution(bool adjoint);
  Action after_contour();
  void rayleigh_ritz_and_check();
  void finish(InfoCode code);

  KernelSetup s_;
  int n_, m0_, m_act_;
  Phase phase_;
  int node_ = 0;
  int loop_ = 0;
  bool need_adjoint_pass_ = false; // complex path with a half rule
  bool adjoint_factor_pending_ = false;

  Block<Scalar> x_, work1_;
  BlockC work2_;
  Block<Scalar> rhs_;      // solve right-hand side of the current loop
  BlockC acc_;             // contour accumulator
  std::vector<cplx> col_scale_; // filter normalization of the residual update
  Block<Scalar> aq_prod_, bq_prod_; // A*Q and B*Q co-transformed with Q
  Block<Scalar> resid_block_;       // A X - B X Lambda for the next loop

  std::vector<double> eig_, res_;
  std::vector<LoopStat> history_;
  double trace_prev_ = 0.0, epsout_ = 1.0;
  int m_ = 0;
  bool have_trace_ = false;
  bool done_ = false;
  InfoCode info_{};
};

/// Kernel for complex-symmetric and real/complex general problems over a
/// full contour. Everything is complex. Sidedness follows fpm(15).
class GeneralRci {
public:
  GeneralRci(const KernelSetup& setup);

  Action next();
  void report_failure(InfoCode code);

  BlockC& x() { return x_; } // n x m0 (right) or n x 2*m0 (two-sided)
  BlockC& work1() { return work1_; }
  BlockC& work2() { return work2_; }
  const BlockC& x() const { return x_; }

  bool done() const { return done_; }
  InfoCode info() const { return info_; }
  int found() const { return m_; }
  int active_columns() const { return m_act_; }
  int loops() const { return loop_; }
  double epsout() const { return epsout_; }
  bool two_sided() const { return sided_ == 0; }
  const std::vector<cplx>& eigenvalues() const { return eig_; }
  const std::vector<double>& residuals() const { return res_; }
  const std::vector<double>& residuals_left() const { return res_left_; }
  const std::vector<LoopStat>& history() const { return history_; }
  ConvergenceReport convergence_report() const;

private:
  enum class Phase {
    Start,
    InitB,
    InitBAdjoint,
    NodeFactorize,
    NodeSolve,
    NodeFactorizeAdjoint,
    NodeSolveAdjoint,
    SweepA,
    SweepAAdjoint,
    SweepB,
    SweepBAdjoint,
    Finished,
  };
  void start_contour();
  Action begin_node();
  Action after_contour();
  void rayleigh_ritz_and_check();
  void finish(InfoCode code);

  KernelSetup s_;
  int n_, m0_, m_act_, sided_;
  Phase phase_;
  int node_ = 0;
  int loop_ = 0;

  BlockC x_, work1_, work2_;
  BlockC rhs_right_, rhs_left_;
  BlockC acc_right_, acc_left_;
  BlockC ax_, bx_, ahy_, bhy_;
  BlockC r_right_, r_left_;
  std::vector<cplx> col_scale_;

  std::vector<cplx> eig_;
  std::vector<double> res_, res_left_;
  std::vector<LoopStat> history_;
  double trace_prev_ = 0.0, epsout_ = 1.0;
  int m_ = 0;
  bool have_trace_ = false;
  bool biorth_ok_ = true;
  bool done_ = false;
  InfoCode info_{};
};

/// Kernel for polynomial problems sum_l lambda^l A_l x = 0 over a full
/// contour. Factorize means "form and factorize P(Ze)"; MultiplyA carries the
/// coefficient index. Candidate eigenpairs may outnumber the basis rank
/// (several roots can share an eigenvector direction), so m0 may be as large
/// as degree * n.
class PolynomialRci {
public:
  PolynomialRci(const KernelSetup& setup, int degree, std::vector<double> coeff_norms);

  Action next();
  void report_failure(InfoCode code);

  BlockC& x() { return x_; }
  BlockC& work1() { return work1_; }
  BlockC& work2() { return work2_; }
  const BlockC& x() const { return x_; }

  bool done() const { return done_; }
  InfoCode info() const { return info_; }
  int found() const { return m_; }
  int active_columns() const { return m_act_; }
  int loops() const { return loop_; }
  double epsout() const { return epsout_; }
  bool two_sided() const { return sided_ == 0; }
  const std::vector<cplx>& eigenvalues() const { return eig_; }
  const std::vector<double>& residuals() const { return res_; }
  const std::vector<double>& residuals_left() const { return res_left_; }
  const std::vector<LoopStat>& history() const { return history_; }
  ConvergenceReport convergence_report() const;

private:
  enum class Phase {
    Start,
    NodeFactorize,
    NodeSolve,
    NodeFactorizeAdjoint,
    NodeSolveAdjoint,
    SweepA,
    SweepAAdjoint,
    Finished,
  };
  void start_contour();
  Action begin_node();
  Action after_contour();
  void rayleigh_ritz_and_check();
  void finish(InfoCode code);

  KernelSetup s_;
  int degree_;
  std::vector<double> coeff_norms_;
  double res_scale_poly_ = 1.0;
  int n_, m0_, m_act_, m_cand_, sided_;
  Phase phase_;
  int node_ = 0;
  int loop_ = 0;
  int sweep_index_ = 0; // coefficient sweep progress

  BlockC x_, work1_, work2_;
  BlockC rhs_right_, rhs_left_;
  BlockC acc_right_, acc_left_;
  std::vector<BlockC> coeff_prod_;      // A_l * Q per coefficient
  std::vector<BlockC> coeff_prod_left_; // A_l^H * Y per coefficient
  BlockC r_right_, r_left_;
  std::vector<cplx> col_scale_;

  std::vector<cplx> eig_;
  std::vector<double> res_, res_left_;
  std::vector<LoopStat> history_;
  double trace_prev_ = 0.0, epsout_ = 1.0;
  int m_ = 0;
  bool have_trace_ = false;
  bool biorth_ok_ = true;
  bool subspace_overflow_ = false;
  bool done_ = false;
  InfoCode info_{};
};

template <class Kernel>
ConvergenceReport compute_convergence(const Kernel& k) {
  return k.convergence_report();
}

} // namespace spslice
