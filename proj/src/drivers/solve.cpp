#include "drivers/solve.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "drivers/backend.hpp"
#include "drivers/log.hpp"
#include "kernel/rci.hpp"
#include "linalg/matvec.hpp"

namespace spslice {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int nthreads = std::min(workers, count);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

template <class Scalar>
struct MulOps {
  // (coefficient index 1..p+1, x, y, cols, adjoint)
  std::function<void(int, const Scalar*, Scalar*, int, bool)> mul_a;
  // (x, y, cols, adjoint); empty means B = I
  std::function<void(const Scalar*, Scalar*, int, bool)> mul_b;
};

struct DriveStats {
  int inner_iterations = 0;
  double t_factor = 0.0, t_solve = 0.0, t_mult = 0.0;
};

/// Pumps kernel actions against a backend. All contour-node systems of a
/// refinement loop share one right-hand side, so on the first solve request
/// the whole node set is solved (in parallel when configured) and stashed;
/// the kernel then consumes the stash node by node in fixed order, which
/// keeps results independent of the worker count.
template <class Kernel, class Scalar>
void drive(Kernel& k, const ContourRule& rule, NodeBackend& backend,
           const MulOps<Scalar>& ops, const Config& cfg, RunLog& log, DriveStats& st) {
  const int nq = rule.size();
  const int n = k.x().rows;
  std::vector<std::unique_ptr<BlockC>> stash_r(nq), stash_l(nq);
  int filled_r = 0, filled_l = 0;

  auto maybe_release = [&] {
    if (filled_r == 0 && filled_l == 0 && !cfg.cache_factorizations()) backend.release_all();
  };

  auto run_batch = [&](bool adjoint, int cols) -> bool {
    auto& stash = adjoint ? stash_l : stash_r;
    BlockC rhs(n, cols);
    for (int j = 0; j < cols; ++j)
      std::copy(k.work2().col(j), k.work2().col(j) + n, rhs.col(j));
    std::vector<InfoCode> codes(nq);
    std::vector<InnerSolveInfo> infos(nq);
    const auto t0 = clock_type::now();
    parallel_for(nq, cfg.workers, [&](int j) {
      if (!backend.has(j)) codes[j] = backend.prepare(j, rule.nodes[j]);
      if (!codes[j].ok()) return;
      auto block = std::make_unique<BlockC>(n, cols);
      block->data = rhs.data;
      codes[j] = backend.solve(j, block->data.data(), cols, adjoint, infos[j]);
      stash[j] = std::move(block);
    });
    st.t_solve += seconds_since(t0);
    for (int j = 0; j < nq; ++j) {
      if (!codes[j].ok()) {
        k.report_failure(codes[j]);
        return false;
      }
      st.inner_iterations += infos[j].iterations;
      if (infos[j].iterations > 0)
        log.line("  inner solve node ", j, (adjoint ? " (adjoint)" : ""), ": it ",
                 infos[j].iterations, "  res min=", infos[j].res_min,
                 " max=", infos[j].res_max);
    }
    (adjoint ? filled_l : filled_r) = nq;
    return true;
  };

  while (!k.done()) {
    const Action a = k.next();
    switch (a.kind) {
      case ActionKind::Done:
        break;
      case ActionKind::Factorize:
      case ActionKind::FactorizeAdjoint: {
        const auto t0 = clock_type::now();
        if (!backend.has(a.node)) {
          const InfoCode code = backend.prepare(a.node, a.shift);
          if (!code.ok()) k.report_failure(code);
        }
        st.t_factor += seconds_since(t0);
        break;
      }
      case ActionKind::Solve:
      case ActionKind::SolveAdjoint: {
        const bool adjoint = a.kind == ActionKind::SolveAdjoint;
        auto& stash = adjoint ? stash_l : stash_r;
        if (!stash[a.node] && !run_batch(adjoint, a.rhs_count)) break;
        for (int j = 0; j < a.rhs_count; ++j)
          std::copy(stash[a.node]->col(j), stash[a.node]->col(j) + n, k.work2().col(j));
        stash[a.node].reset();
        --(adjoint ? filled_l : filled_r);
        maybe_release();
        break;
      }
      case ActionKind::MultiplyA:
      case ActionKind::MultiplyAAdjoint: {
        const auto t0 = clock_type::now();
        const bool adjoint = a.kind == ActionKind::MultiplyAAdjoint;
        const Scalar* xp = k.x().col(a.col_first - 1);
        Scalar* wp = k.work1().col(a.col_first - 1);
        ops.mul_a(a.matrix_index, xp, wp, a.col_count, adjoint);
        st.t_mult += seconds_since(t0);
        break;
      }
      case ActionKind::MultiplyB:
      case ActionKind::MultiplyBAdjoint: {
        const auto t0 = clock_type::now();
        const bool adjoint = a.kind == ActionKind::MultiplyBAdjoint;
        const Scalar* xp = k.x().col(a.col_first - 1);
        Scalar* wp = k.work1().col(a.col_first - 1);
        if (ops.mul_b)
          ops.mul_b(xp, wp, a.col_count, adjoint);
        else
          std::copy(xp, xp + static_cast<size_t>(n) * a.col_count, wp);
        st.t_mult += seconds_since(t0);
        break;
      }
    }
  }
}

struct ProblemSetup {
  Config cfg;
  int m0 = 0;
  ContourRule rule;
  RegionClassifier classifier = RegionClassifier::interval(0, 1);
  double residual_scale = 1.0;
  double trace_scale = 1.0;
  cplx region_center{};
  InfoCode precheck{};
};

// Stochastic counting wants few nodes but a clean filter plateau; when the
// relevant slots still hold the non-stochastic defaults, swap in the
// low-count trapezoidal circle.
void apply_stochastic_defaults(Config& cfg, bool inexact_path) {
  if (cfg.mode() != 2) return;
  if (cfg.fpm(2) == (inexact_path ? 4 : 8)) cfg.set_fpm(2, 3);
  if (cfg.fpm(8) == (inexact_path ? 8 : 16)) cfg.set_fpm(8, 6);
  if (cfg.fpm(16) == 0) cfg.set_fpm(16, 1);
  if (cfg.fpm(18) == 30) cfg.set_fpm(18, 100);
  cfg.set_fpm(15, 1);
}

ProblemSetup prepare_interval(Interval region, int n, int m0, Config cfg,
                              const SolveOptions& opts, bool inexact_path) {
  ProblemSetup s;
  apply_stochastic_defaults(cfg, inexact_path);
  s.cfg = cfg;
  s.m0 = std::min(m0, n); // a subspace wider than the operator is meaningless
  s.precheck = validate(cfg, SearchRegion{region}, n, s.m0);
  if (!s.precheck.ok()) return s;
  s.rule = opts.custom_rule
               ? *opts.custom_rule
               : hermitian_contour(region.emin, region.emax, cfg.half_nodes(),
                                   static_cast<QuadratureKind>(cfg.quadrature()),
                                   cfg.ellipse_ratio_pct());
  s.classifier = RegionClassifier::interval(region.emin, region.emax);
  s.residual_scale = std::max(std::abs(region.emin), std::abs(region.emax));
  if (s.residual_scale == 0.0) s.residual_scale = 1.0;
  s.trace_scale = s.residual_scale;
  s.region_center = cplx(0.5 * (region.emin + region.emax), 0.0);
  return s;
}

ProblemSetup prepare_ellipse(Ellipse region, int n, int m0, Config cfg,
                             const SolveOptions& opts, bool inexact_path,
                             int m0_cap = -1) {
  ProblemSetup s;
  apply_stochastic_defaults(cfg, inexact_path);
  s.cfg = cfg;
  const int cap = m0_cap > 0 ? m0_cap : n;
  s.m0 = std::min(m0, cap);
  s.precheck = validate(cfg, SearchRegion{region}, cap, s.m0);
  if (!s.precheck.ok()) return s;
  if (opts.custom_rule) {
    s.rule = symmetrize(*opts.custom_rule);
    s.classifier = RegionClassifier::polygon(s.rule.nodes);
  } else {
    s.rule = general_contour(region.center, region.radius, cfg.full_nodes(),
                             static_cast<QuadratureKind>(cfg.quadrature()),
                             cfg.ellipse_ratio_pct(), cfg.rotation_deg());
    s.classifier = RegionClassifier::ellipse(region.center, region.radius,
                                             cfg.ellipse_ratio_pct(), cfg.rotation_deg());
  }
  s.residual_scale = std::abs(region.center) + region.radius;
  s.trace_scale = s.residual_scale;
  s.region_center = region.center;
  return s;
}

KernelSetup make_kernel_setup(const ProblemSetup& ps, int n) {
  KernelSetup ks;
  ks.n = n;
  ks.m0 = ps.m0;
  ks.config = ps.cfg;
  ks.rule = ps.rule;
  ks.classifier = ps.classifier;
  ks.residual_scale = ps.residual_scale;
  ks.trace_scale = ps.trace_scale;
  ks.region_center = ps.region_center;
  ks.adjoint_reuse = true;
  ks.seed = ps.cfg.seed;
  return ks;
}


// Copies a caller-provided warm-start block into the kernel workspace (slot
// 5 = 1). Returns false when the guess is missing.
template <class Kernel, class Scalar>
bool seed_initial_guess(Kernel& k, const ProblemSetup& ps, const SolveOptions& opts,
                        int n) {
  if (!ps.cfg.use_initial_guess()) return true;
  if (!opts.initial_vectors ||
      opts.initial_vectors->size() < static_cast<size_t>(n) * ps.m0)
    return false;
  const auto& g = *opts.initial_vectors;
  for (int j = 0; j < ps.m0; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx v = g[static_cast<size_t>(j) * n + i];
      if constexpr (std::is_same_v<Scalar, double>)
        k.x().at(i, j) = v.real();
      else
        k.x().at(i, j) = v;
    }
  if (k.x().cols >= 2 * ps.m0) // two-sided layouts: seed the left block too
    for (int j = 0; j < ps.m0; ++j)
      for (int i = 0; i < n; ++i) {
        const cplx v = g[static_cast<size_t>(j) * n + i];
        if constexpr (!std::is_same_v<Scalar, double>) k.x().at(i, ps.m0 + j) = v;
      }
  return true;
}

EigResult failed_result(int n, int m0, InfoCode code) {
  EigResult r;
  r.n = n;
  r.m0 = m0;
  r.info = code;
  return r;
}

void log_header(RunLog& log, const char* routine, const ProblemSetup& ps, int n,
                const char* backend_name) {
  if (!log.enabled()) return;
  log.line("----------------------------------------------");
  log.line("spectral-slice ", routine);
  log.line("  size ", n, ", subspace ", ps.m0, ", nodes ", ps.rule.size(),
           ps.rule.closure == ContourRule::Closure::HalfSymmetric ? " (half contour)"
                                                                  : " (full contour)");
  log.line("  quadrature ", ps.cfg.quadrature() == 0 ? "Gauss" : "trapezoidal",
           ", ellipse ratio ", ps.cfg.ellipse_ratio_pct() / 100.0);
  log.line("  inner solver ", backend_name,
           ps.cfg.single_precision() ? " (single precision)" : " (double precision)",
           ps.cfg.cache_factorizations() ? ", operators cached" : "");
  log.line("  seed ", ps.cfg.seed, ", workers ", ps.cfg.workers);
  if (ps.cfg.fpm(41) == 1) log.line("  note: matrix scaling flag set; not applied");
}

template <class Kernel>
void log_run(RunLog& log, const Kernel& k, const DriveStats& st) {
  if (!log.enabled()) return;
  log.line("  loop |  found |        trace        |  trace error |  max residual");
  for (const auto& h : k.history())
    log.line("  ", h.loop, "  ", h.m, "  ", h.trace, "  ", h.epsout, "  ", h.max_res);
  log.line("  exit: ", info_message(k.info()));
  if (st.inner_iterations > 0) log.line("  total inner iterations ", st.inner_iterations);
  log.line("  time: factor ", st.t_factor, "s, solve ", st.t_solve, "s, multiply ",
           st.t_mult, "s");
  log.line("----------------------------------------------");
}

template <class Scalar>
void fill_common(EigResult& r, int n, int m0, const DriveStats& st, const Config& cfg) {
  r.n = n;
  r.m0 = m0;
  r.inner_iterations = st.inner_iterations;
  r.seed = cfg.seed;
}

template <class Scalar>
EigResult harvest_hermitian(const HermitianRci<Scalar>& k, int n, int m0,
                            const DriveStats& st, const Config& cfg) {
  EigResult r;
  fill_common<Scalar>(r, n, m0, st, cfg);
  r.m = k.found();
  r.loops = k.loops();
  r.epsout = k.epsout();
  r.info = k.info();
  r.eigenvalues.assign(m0, cplx{});
  r.residuals.assign(m0, 0.0);
  r.vectors.assign(static_cast<size_t>(n) * m0, cplx{});
  for (int j = 0; j < m0; ++j) {
    r.eigenvalues[j] = cplx(k.eigenvalues()[j], 0.0);
    r.residuals[j] = k.residuals()[j];
    for (int i = 0; i < n; ++i)
      r.vectors[static_cast<size_t>(j) * n + i] = cplx(k.x().at(i, j));
  }
  return r;
}

EigResult harvest_general(const GeneralRci& k, int n, int m0, const DriveStats& st,
                          const Config& cfg) {
  EigResult r;
  fill_common<cplx>(r, n, m0, st, cfg);
  r.m = k.found();
  r.loops = k.loops();
  r.epsout = k.epsout();
  r.info = k.info();
  r.eigenvalues.assign(k.eigenvalues().begin(), k.eigenvalues().begin() + m0);
  r.residuals.assign(k.residuals().begin(), k.residuals().begin() + m0);
  r.vectors.assign(static_cast<size_t>(n) * m0, cplx{});
  for (int j = 0; j < m0; ++j)
    for (int i = 0; i < n; ++i)
      r.vectors[static_cast<size_t>(j) * n + i] = k.x().at(i, j);
  if (k.two_sided()) {
    r.vectors_left.assign(static_cast<size_t>(n) * m0, cplx{});
    r.residuals_left.assign(k.residuals_left().begin(), k.residuals_left().begin() + m0);
    for (int j = 0; j < m0; ++j)
      for (int i = 0; i < n; ++i)
        r.vectors_left[static_cast<size_t>(j) * n + i] = k.x().at(i, m0 + j);
  }
  return r;
}

EigResult harvest_polynomial(const PolynomialRci& k, int n, int m0, const DriveStats& st,
                             const Config& cfg) {
  EigResult r;
  fill_common<cplx>(r, n, m0, st, cfg);
  r.m = k.found();
  r.loops = k.loops();
  r.epsout = k.epsout();
  r.info = k.info();
  r.eigenvalues.assign(k.eigenvalues().begin(), k.eigenvalues().begin() + m0);
  r.residuals.assign(k.residuals().begin(), k.residuals().begin() + m0);
  r.vectors.assign(static_cast<size_t>(n) * m0, cplx{});
  for (int j = 0; j < m0; ++j)
    for (int i = 0; i < n; ++i)
      r.vectors[static_cast<size_t>(j) * n + i] = k.x().at(i, j);
  if (k.two_sided()) {
    r.vectors_left.assign(static_cast<size_t>(n) * m0, cplx{});
    r.residuals_left.assign(k.residuals_left().begin(), k.residuals_left().begin() + m0);
    for (int j = 0; j < m0; ++j)
      for (int i = 0; i < n; ++i)
        r.vectors_left[static_cast<size_t>(j) * n + i] = k.x().at(i, m0 + j);
  }
  return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Dense Hermitian drivers
// ---------------------------------------------------------------------------

namespace {

template <class T, class Scalar>
EigResult dense_hermitian_impl(const Dense<T>& a_in, const Dense<T>* b_in, Interval region,
                               int m0, const Config& config, const SolveOptions& opts,
                               Structure structure) {
  const int n = a_in.n;
  ProblemSetup ps = prepare_interval(region, n, m0, config, opts, /*inexact=*/false);
  if (!ps.precheck.ok()) return failed_result(n, ps.m0, ps.precheck);

  const Dense<T> a = expand_uplo(a_in, structure);
  Dense<T> b;
  const bool has_b = b_in != nullptr;
  if (has_b) b = expand_uplo(*b_in, structure);

  RunLog log(ps.cfg.print_level());
  log_header(log, "dense Hermitian solve", ps, n, "dense LU");
  if (ps.cfg.inexact_switch()) log.line("  note: iterative-solver switch ignored by the dense driver");

  DenseLuBackend backend(
      n, ps.rule.size(),
      [&](cplx shift, BlockC& out) {
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            const cplx bij = has_b ? cplx(b.at(i, j)) : cplx(i == j ? 1.0 : 0.0, 0.0);
            out.at(i, j) = shift * bij - cplx(a.at(i, j));
          }
      },
      ps.cfg.single_precision());

  MulOps<Scalar> ops;
  ops.mul_a = [&](int, const Scalar* x, Scalar* y, int cols, bool) {
    dense_matvec(a, x, y, cols, MulMode::Normal);
  };
  if (has_b)
    ops.mul_b = [&](const Scalar* x, Scalar* y, int cols, bool) {
      dense_matvec(b, x, y, cols, MulMode::Normal);
    };

  HermitianRci<Scalar> kernel(make_kernel_setup(ps, n));
  if (!seed_initial_guess<HermitianRci<Scalar>, Scalar>(kernel, ps, opts, n))
    return failed_result(n, ps.m0, InfoCode::bad_fpm(5));
  DriveStats st;
  drive<HermitianRci<Scalar>, Scalar>(kernel, ps.rule, backend, ops, ps.cfg, log, st);
  log_run(log, kernel, st);
  return harvest_hermitian(kernel, n, ps.m0, st, ps.cfg);
}

} // namespace

EigResult solve_dense_hermitian(const DenseReal& a, const DenseReal* b, Interval region,
                                int m0, const Config& config, const SolveOptions& opts) {
  return dense_hermitian_impl<double, double>(a, b, region, m0, config, opts,
                                              Structure::RealSymmetric);
}

EigResult solve_dense_hermitian(const DenseComplex& a, const DenseComplex* b,
                                Interval region, int m0, const Config& config,
                                const SolveOptions& opts) {
  return dense_hermitian_impl<cplx, cplx>(a, b, region, m0, config, opts,
                                          Structure::ComplexHermitian);
}

// ---------------------------------------------------------------------------
// Dense general driver
// ---------------------------------------------------------------------------

EigResult solve_dense_general(Structure structure, const DenseComplex& a_in,
                              const DenseComplex* b_in, Ellipse region, int m0,
                              const Config& config, const SolveOptions& opts) {
  const int n = a_in.n;
  ProblemSetup ps = prepare_ellipse(region, n, m0, config, opts, /*inexact=*/false);
  if (!ps.precheck.ok()) return failed_result(n, ps.m0, ps.precheck);

  const DenseComplex a = expand_uplo(a_in, structure);
  DenseComplex b;
  const bool has_b = b_in != nullptr;
  if (has_b) b = expand_uplo(*b_in, structure);

  RunLog log(ps.cfg.print_level());
  log_header(log, "dense general solve", ps, n, "dense LU");
  if (ps.cfg.inexact_switch()) log.line("  note: iterative-solver switch ignored by the dense driver");

  DenseLuBackend backend(
      n, ps.rule.size(),
      [&](cplx shift, BlockC& out) {
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            const cplx bij = has_b ? b.at(i, j) : cplx(i == j ? 1.0 : 0.0, 0.0);
            out.at(i, j) = shift * bij - a.at(i, j);
          }
      },
      ps.cfg.single_precision());

  MulOps<cplx> ops;
  ops.mul_a = [&](int, const cplx* x, cplx* y, int cols, bool adjoint) {
    dense_matvec(a, x, y, cols, adjoint ? MulMode::ConjugateTranspose : MulMode::Normal);
  };
  if (has_b)
    ops.mul_b = [&](const cplx* x, cplx* y, int cols, bool adjoint) {
      dense_matvec(b, x, y, cols, adjoint ? MulMode::ConjugateTranspose : MulMode::Normal);
    };

  GeneralRci kernel(make_kernel_setup(ps, n));
  if (!seed_initial_guess<GeneralRci, cplx>(kernel, ps, opts, n))
    return failed_result(n, ps.m0, InfoCode::bad_fpm(5));
  DriveStats st;
  drive<GeneralRci, cplx>(kernel, ps.rule, backend, ops, ps.cfg, log, st);
  log_run(log, kernel, st);
  return harvest_general(kernel, n, ps.m0, st, ps.cfg);
}

EigResult solve_dense_general(Structure structure, const DenseReal& a, const DenseReal* b,
                              Ellipse region, int m0, const Config& config,
                              const SolveOptions& opts) {
  const DenseComplex ac = to_complex(a);
  if (b) {
    const DenseComplex bc = to_complex(*b);
    return solve_dense_general(structure, ac, &bc, region, m0, config, opts);
  }
  return solve_dense_general(structure, ac, nullptr, region, m0, config, opts);
}

// ---------------------------------------------------------------------------
// Sparse drivers
// ---------------------------------------------------------------------------

namespace {

template <class T, class Scalar>
EigResult sparse_hermitian_impl(const Csr<T>& a_in, const Csr<T>* b_in, Interval region,
                                int m0, const Config& config, const SolveOptions& opts,
                                Structure structure) {
  const int n = a_in.n;
  const bool force_dense = opts.force_dense_backend && n <= 64;
  ProblemSetup ps = prepare_interval(region, n, m0, config, opts, !force_dense);
  if (!ps.precheck.ok()) return failed_result(n, ps.m0, ps.precheck);

  const Csr<T> a = expand_uplo(a_in, structure);
  Csr<T> b;
  const bool has_b = b_in != nullptr;
  if (has_b) b = expand_uplo(*b_in, structure);

  RunLog log(ps.cfg.print_level());

  std::vector<CsrComplex> coeffs;
  coeffs.push_back(to_complex(a));
  if (has_b) coeffs.push_back(to_complex(b));

  std::unique_ptr<NodeBackend> backend;
  if (force_dense) {
    const CsrComplex az = coeffs[0];
    const CsrComplex bz = has_b ? coeffs[1] : CsrComplex{};
    backend = std::make_unique<DenseLuBackend>(
        n, ps.rule.size(),
        [n, az, bz, has_b](cplx shift, BlockC& out) {
          out.zero();
          for (int i = 0; i < n; ++i) {
            if (!has_b) out.at(i, i) = shift;
            for (int p = az.row_ptr[i]; p < az.row_ptr[i + 1]; ++p)
              out.at(i, az.col_idx[p]) -= az.values[p];
          }
          if (has_b)
            for (int i = 0; i < n; ++i)
              for (int p = bz.row_ptr[i]; p < bz.row_ptr[i + 1]; ++p)
                out.at(i, bz.col_idx[p]) += shift * bz.values[p];
        },
        ps.cfg.single_precision());
  } else {
    backend = std::make_unique<BicgstabBackend>(
        coeffs, /*polynomial=*/false, ps.rule.size(), ps.cfg.single_precision(),
        ps.cfg.inner_tol(), ps.cfg.inner_maxit(), ps.cfg.cache_factorizations());
  }
  log_header(log, "sparse Hermitian solve", ps, n, backend->name());

  MulOps<Scalar> ops;
  ops.mul_a = [&](int, const Scalar* x, Scalar* y, int cols, bool) {
    csr_matvec(a, x, y, cols, MulMode::Normal);
  };
  if (has_b)
    ops.mul_b = [&](const Scalar* x, Scalar* y, int cols, bool) {
      csr_matvec(b, x, y, cols, MulMode::Normal);
    };

  HermitianRci<Scalar> kernel(make_kernel_setup(ps, n));
  if (!seed_initial_guess<HermitianRci<Scalar>, Scalar>(kernel, ps, opts, n))
    return failed_result(n, ps.m0, InfoCode::bad_fpm(5));
  DriveStats st;
  drive<HermitianRci<Scalar>, Scalar>(kernel, ps.rule, *backend, ops, ps.cfg, log, st);
  log_run(log, kernel, st);
  return harvest_hermitian(kernel, n, ps.m0, st, ps.cfg);
}

EigResult sparse_general_impl(Structure structure, const CsrComplex& a_in,
                              const CsrComplex* b_in, Ellipse region, int m0,
                              const Config& config, const SolveOptions& opts) {
  const int n = a_in.n;
  const bool force_dense = opts.force_dense_backend && n <= 64;
  ProblemSetup ps = prepare_ellipse(region, n, m0, config, opts, !force_dense);
  if (!ps.precheck.ok()) return failed_result(n, ps.m0, ps.precheck);

  const CsrComplex a = expand_uplo(a_in, structure);
  CsrComplex b;
  const bool has_b = b_in != nullptr;
  if (has_b) b = expand_uplo(*b_in, structure);

  RunLog log(ps.cfg.print_level());

  std::vector<CsrComplex> coeffs;
  coeffs.push_back(a);
  if (has_b) coeffs.push_back(b);
  std::unique_ptr<NodeBackend> backend;
  if (force_dense) {
    backend = std::make_unique<DenseLuBackend>(
        n, ps.rule.size(),
        [n, a, b, has_b](cplx shift, BlockC& out) {
          out.zero();
          for (int i = 0; i < n; ++i) {
            if (!has_b) out.at(i, i) = shift;
            for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
              out.at(i, a.col_idx[p]) -= a.values[p];
          }
          if (has_b)
            for (int i = 0; i < n; ++i)
              for (int p = b.row_ptr[i]; p < b.row_ptr[i + 1]; ++p)
                out.at(i, b.col_idx[p]) += shift * b.values[p];
        },
        ps.cfg.single_precision());
  } else {
    backend = std::make_unique<BicgstabBackend>(
        coeffs, /*polynomial=*/false, ps.rule.size(), ps.cfg.single_precision(),
        ps.cfg.inner_tol(), ps.cfg.inner_maxit(), ps.cfg.cache_factorizations());
  }
  log_header(log, "sparse general solve", ps, n, backend->name());

  MulOps<cplx> ops;
  ops.mul_a = [&](int, const cplx* x, cplx* y, int cols, bool adjoint) {
    csr_matvec(a, x, y, cols, adjoint ? MulMode::ConjugateTranspose : MulMode::Normal);
  };
  if (has_b)
    ops.mul_b = [&](const cplx* x, cplx* y, int cols, bool adjoint) {
      csr_matvec(b, x, y, cols, adjoint ? MulMode::ConjugateTranspose : MulMode::Normal);
    };

  GeneralRci kernel(make_kernel_setup(ps, n));
  if (!seed_initial_guess<GeneralRci, cplx>(kernel, ps, opts, n))
    return failed_result(n, ps.m0, InfoCode::bad_fpm(5));
  DriveStats st;
  drive<GeneralRci, cplx>(kernel, ps.rule, *backend, ops, ps.cfg, log, st);
  log_run(log, kernel, st);
  return harvest_general(kernel, n, ps.m0, st, ps.cfg);
}

} // namespace

EigResult solve_sparse(Structure structure, const CsrReal& a, const CsrReal* b,
                       const SearchRegion& region, int m0, const Config& config,
                       const SolveOptions& opts) {
  if (structure == Structure::RealSymmetric)
    return sparse_hermitian_impl<double, double>(a, b, std::get<Interval>(region), m0,
                                                 config, opts, structure);
  const CsrComplex ac = to_complex(a);
  if (b) {
    const CsrComplex bc = to_complex(*b);
    return sparse_general_impl(structure, ac, &bc, std::get<Ellipse>(region), m0, config,
                               opts);
  }
  return sparse_general_impl(structure, ac, nullptr, std::get<Ellipse>(region), m0, config,
                             opts);
}

EigResult solve_sparse(Structure structure, const CsrComplex& a, const CsrComplex* b,
                       const SearchRegion& region, int m0, const Config& config,
                       const SolveOptions& opts) {
  if (structure == Structure::ComplexHermitian)
    return sparse_hermitian_impl<cplx, cplx>(a, b, std::get<Interval>(region), m0, config,
                                             opts, structure);
  if (structure == Structure::RealSymmetric)
    return sparse_hermitian_impl<cplx, cplx>(a, b, std::get<Interval>(region), m0, config,
                                             opts, Structure::ComplexHermitian);
  return sparse_general_impl(structure, a, b, std::get<Ellipse>(region), m0, config, opts);
}

// ---------------------------------------------------------------------------
// Polynomial drivers
// ---------------------------------------------------------------------------

namespace {

std::vector<double> coefficient_norms(const std::vector<DenseComplex>& coeffs) {
  std::vector<double> norms;
  for (const auto& c : coeffs) {
    double s = 0.0;
    for (const auto& v : c.values) s += std::norm(v);
    norms.push_back(std::sqrt(s));
  }
  return norms;
}

std::vector<double> coefficient_norms(const std::vector<CsrComplex>& coeffs) {
  std::vector<double> norms;
  for (const auto& c : coeffs) {
    double s = 0.0;
    for (const auto& v : c.values) s += std::norm(v);
    norms.push_back(std::sqrt(s));
  }
  return norms;
}

} // namespace

EigResult solve_polynomial(Structure structure, const std::vector<DenseComplex>& coeffs_in,
                           Ellipse region, int m0, const Config& config,
                           const SolveOptions& opts) {
  if (coeffs_in.size() < 2) return failed_result(0, m0, InfoCode{-102});
  const int degree = static_cast<int>(coeffs_in.size()) - 1;
  const int n = coeffs_in[0].n;
  for (const auto& c : coeffs_in)
    if (c.n != n) return failed_result(n, m0, InfoCode{-102});
  ProblemSetup ps =
      prepare_ellipse(region, n, m0, config, opts, /*inexact=*/false, degree * n);
  if (!ps.precheck.ok()) return failed_result(n, ps.m0, ps.precheck);

  std::vector<DenseComplex> coeffs;
  coeffs.reserve(coeffs_in.size());
  for (const auto& c : coeffs_in) coeffs.push_back(expand_uplo(c, structure));

  RunLog log(ps.cfg.print_level());
  log_header(log, "dense polynomial solve", ps, n, "dense LU");

  DenseLuBackend backend(
      n, ps.rule.size(),
      [&](cplx shift, BlockC& out) {
        out.zero();
        cplx zp(1.0, 0.0);
        for (const auto& c : coeffs) {
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) out.at(i, j) += zp * c.at(i, j);
          zp *= shift;
        }
      },
      ps.cfg.single_precision());

  MulOps<cplx> ops;
  ops.mul_a = [&](int index, const cplx* x, cplx* y, int cols, bool adjoint) {
    dense_matvec(coeffs[index - 1], x, y, cols,
                 adjoint ? MulMode::ConjugateTranspose : MulMode::Normal);
  };

  PolynomialRci kernel(make_kernel_setup(ps, n), degree, coefficient_norms(coeffs));
  if (!seed_initial_guess<PolynomialRci, cplx>(kernel, ps, opts, n))
    return failed_result(n, ps.m0, InfoCode::bad_fpm(5));
  DriveStats st;
  drive<PolynomialRci, cplx>(kernel, ps.rule, backend, ops, ps.cfg, log, st);
  log_run(log, kernel, st);
  return harvest_polynomial(kernel, n, ps.m0, st, ps.cfg);
}

EigResult solve_polynomial(Structure structure, const std::vector<CsrComplex>& coeffs_in,
                           Ellipse region, int m0, const Config& config,
                           const SolveOptions& opts) {
  if (coeffs_in.size() < 2) return failed_result(0, m0, InfoCode{-102});
  const int degree = static_cast<int>(coeffs_in.size()) - 1;
  const int n = coeffs_in[0].n;
  for (const auto& c : coeffs_in)
    if (c.n != n) return failed_result(n, m0, InfoCode{-102});
  ProblemSetup ps =
      prepare_ellipse(region, n, m0, config, opts, /*inexact=*/true, degree * n);
  if (!ps.precheck.ok()) return failed_result(n, ps.m0, ps.precheck);

  std::vector<CsrComplex> coeffs;
  coeffs.reserve(coeffs_in.size());
  for (const auto& c : coeffs_in) coeffs.push_back(expand_uplo(c, structure));

  RunLog log(ps.cfg.print_level());

  BicgstabBackend backend(coeffs, /*polynomial=*/true, ps.rule.size(),
                          ps.cfg.single_precision(), ps.cfg.inner_tol(),
                          ps.cfg.inner_maxit(), ps.cfg.cache_factorizations());
  log_header(log, "sparse polynomial solve", ps, n, backend.name());

  MulOps<cplx> ops;
  ops.mul_a = [&](int index, const cplx* x, cplx* y, int cols, bool adjoint) {
    csr_matvec(coeffs[index - 1], x, y, cols,
               adjoint ? MulMode::ConjugateTranspose : MulMode::Normal);
  };

  PolynomialRci kernel(make_kernel_setup(ps, n), degree, coefficient_norms(coeffs));
  if (!seed_initial_guess<PolynomialRci, cplx>(kernel, ps, opts, n))
    return failed_result(n, ps.m0, InfoCode::bad_fpm(5));
  DriveStats st;
  drive<PolynomialRci, cplx>(kernel, ps.rule, backend, ops, ps.cfg, log, st);
  log_run(log, kernel, st);
  return harvest_polynomial(kernel, n, ps.m0, st, ps.cfg);
}

// ---------------------------------------------------------------------------
// Mode wrappers
// ---------------------------------------------------------------------------

namespace {

template <class Matrix>
EigResult run_mode(Structure structure, const Matrix& a, const Matrix* b,
                   const SearchRegion& region, int m0, Config config) {
  if constexpr (std::is_same_v<Matrix, DenseReal> || std::is_same_v<Matrix, DenseComplex>) {
    if (is_hermitian_structure(structure))
      return solve_dense_hermitian(a, b, std::get<Interval>(region), m0, config);
    return solve_dense_general(structure, a, b, std::get<Ellipse>(region), m0, config);
  } else {
    return solve_sparse(structure, a, b, region, m0, config);
  }
}

} // namespace

template <class Matrix>
EigResult stochastic_count(Structure structure, const Matrix& a, const Matrix* b,
                           const SearchRegion& region, int m0, Config config) {
  config.set_fpm(14, 2);
  return run_mode(structure, a, b, region, m0, config);
}

template <class Matrix>
EigResult subspace_only(Structure structure, const Matrix& a, const Matrix* b,
                        const SearchRegion& region, int m0, Config config) {
  config.set_fpm(14, 1);
  return run_mode(structure, a, b, region, m0, config);
}

template EigResult stochastic_count<DenseReal>(Structure, const DenseReal&, const DenseReal*,
                                               const SearchRegion&, int, Config);
template EigResult stochastic_count<DenseComplex>(Structure, const DenseComplex&,
                                                  const DenseComplex*, const SearchRegion&,
                                                  int, Config);
template EigResult stochastic_count<CsrReal>(Structure, const CsrReal&, const CsrReal*,
                                             const SearchRegion&, int, Config);
template EigResult stochastic_count<CsrComplex>(Structure, const CsrComplex&,
                                                const CsrComplex*, const SearchRegion&, int,
                                                Config);
template EigResult subspace_only<DenseReal>(Structure, const DenseReal&, const DenseReal*,
                                            const SearchRegion&, int, Config);
template EigResult subspace_only<DenseComplex>(Structure, const DenseComplex&,
                                               const DenseComplex*, const SearchRegion&,
                                               int, Config);
template EigResult subspace_only<CsrReal>(Structure, const CsrReal&, const CsrReal*,
                                          const SearchRegion&, int, Config);
template EigResult subspace_only<CsrComplex>(Structure, const CsrComplex&, const CsrComplex*,
                                             const SearchRegion&, int, Config);

} // namespace spslice
