// C surface over the C++ core. Handles own copies of their inputs; no
// exception crosses the boundary.
#include "spectral_slice.h"

#include <cstring>
#include <variant>

#include "core/config.hpp"
#include "core/csr.hpp"
#include "core/dense.hpp"
#include "drivers/solve.hpp"
#include "io/session.hpp"

using namespace spslice;

struct ss_config {
  Config cfg;
};

struct ss_matrix {
  std::variant<DenseReal, DenseComplex, CsrReal, CsrComplex> m;
  int n = 0;
};

struct ss_result {
  EigResult r;
  std::vector<double> eigenvalues2; // interleaved caches
  std::vector<double> vectors2, vectors_left2;
};

namespace {

Structure to_structure(ss_structure s) {
  switch (s) {
    case SS_REAL_SYMMETRIC: return Structure::RealSymmetric;
    case SS_COMPLEX_HERMITIAN: return Structure::ComplexHermitian;
    case SS_COMPLEX_SYMMETRIC: return Structure::ComplexSymmetric;
    case SS_REAL_GENERAL: return Structure::RealGeneral;
    default: return Structure::ComplexGeneral;
  }
}

bool valid_uplo(char u) { return u == 'F' || u == 'L' || u == 'U'; }

ss_result* wrap_result(EigResult&& r) {
  auto* out = new ss_result{std::move(r), {}, {}, {}};
  const auto& res = out->r;
  out->eigenvalues2.reserve(res.eigenvalues.size() * 2);
  for (const auto& v : res.eigenvalues) {
    out->eigenvalues2.push_back(v.real());
    out->eigenvalues2.push_back(v.imag());
  }
  out->vectors2.reserve(res.vectors.size() * 2);
  for (const auto& v : res.vectors) {
    out->vectors2.push_back(v.real());
    out->vectors2.push_back(v.imag());
  }
  out->vectors_left2.reserve(res.vectors_left.size() * 2);
  for (const auto& v : res.vectors_left) {
    out->vectors_left2.push_back(v.real());
    out->vectors_left2.push_back(v.imag());
  }
  return out;
}

ContourRule rule_from_arrays(const double* zne, const double* wne, int nq, bool full) {
  ContourRule rule;
  rule.closure = full ? ContourRule::Closure::Full : ContourRule::Closure::HalfSymmetric;
  rule.nodes.resize(nq);
  rule.weights.resize(nq);
  for (int j = 0; j < nq; ++j) {
    rule.nodes[j] = cplx(zne[2 * j], zne[2 * j + 1]);
    rule.weights[j] = cplx(wne[2 * j], wne[2 * j + 1]);
  }
  return rule;
}

template <class Fn>
int guarded_solve(Fn&& fn, ss_result** out) {
  if (!out) return SS_ERR_ARGUMENT;
  *out = nullptr;
  try {
    EigResult r = fn();
    const int info = r.info.value;
    *out = wrap_result(std::move(r));
    return info;
  } catch (const std::exception&) {
    return SS_ERR_ARGUMENT;
  }
}

// Dispatches an interval solve over the stored matrix representation.
EigResult interval_dispatch(Structure st, const ss_matrix* a, const ss_matrix* b,
                            Interval region, int m0, const Config& cfg,
                            const SolveOptions& opts) {
  return std::visit(
      [&](const auto& am) -> EigResult {
        using MT = std::decay_t<decltype(am)>;
        const MT* bm = nullptr;
        if (b) bm = std::get_if<MT>(&b->m);
        if (b && !bm) throw std::invalid_argument("A and B storage kinds differ");
        if constexpr (std::is_same_v<MT, DenseReal> || std::is_same_v<MT, DenseComplex>) {
          (void)st;
          return solve_dense_hermitian(am, bm, region, m0, cfg, opts);
        } else {
          return solve_sparse(st, am, bm, SearchRegion{region}, m0, cfg, opts);
        }
      },
      a->m);
}

EigResult contour_dispatch(Structure st, const ss_matrix* a, const ss_matrix* b,
                           Ellipse region, int m0, const Config& cfg,
                           const SolveOptions& opts) {
  return std::visit(
      [&](const auto& am) -> EigResult {
        using MT = std::decay_t<decltype(am)>;
        const MT* bm = nullptr;
        if (b) bm = std::get_if<MT>(&b->m);
        if (b && !bm) throw std::invalid_argument("A and B storage kinds differ");
        if constexpr (std::is_same_v<MT, DenseReal> || std::is_same_v<MT, DenseComplex>) {
          return solve_dense_general(st, am, bm, region, m0, cfg, opts);
        } else {
          return solve_sparse(st, am, bm, SearchRegion{region}, m0, cfg, opts);
        }
      },
      a->m);
}

template <class T>
ss_matrix* make_csr(int n, const int* row_ptr, const int* col_idx, const double* values,
                    char uplo, bool complex_values) {
  if (n <= 0 || !row_ptr || !col_idx || !values || !valid_uplo(uplo)) return nullptr;
  if (row_ptr[0] != 1) return nullptr;
  const int nnz = row_ptr[n] - 1;
  if (nnz < 0) return nullptr;
  Csr<T> m;
  m.n = n;
  m.uplo = static_cast<Uplo>(uplo);
  m.row_ptr.resize(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) m.row_ptr[i] = row_ptr[i] - 1;
  m.col_idx.resize(nnz);
  m.values.resize(nnz);
  for (int k = 0; k < nnz; ++k) {
    const int c = col_idx[k] - 1;
    if (c < 0 || c >= n) return nullptr;
    m.col_idx[k] = c;
    if constexpr (std::is_same_v<T, cplx>)
      m.values[k] = cplx(values[2 * k], values[2 * k + 1]);
    else
      m.values[k] = values[k];
  }
  (void)complex_values;
  if (!csr_well_formed(m)) {
    // Accept unsorted rows by rebuilding through triplets.
    std::vector<Triplet<T>> tri;
    for (int i = 0; i < n; ++i)
      for (int p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p)
        tri.push_back({i, m.col_idx[p], m.values[p]});
    try {
      m = csr_from_triplets(n, std::move(tri), static_cast<Uplo>(uplo));
    } catch (const std::exception&) {
      return nullptr;
    }
  }
  return new ss_matrix{std::move(m), n};
}

} // namespace

extern "C" {

ss_config* ss_config_new(ss_structure structure, int inexact) {
  ProblemKind kind;
  kind.structure = to_structure(structure);
  return new ss_config{default_config(kind, inexact != 0)};
}

void ss_config_free(ss_config* cfg) { delete cfg; }

int ss_config_set(ss_config* cfg, int index, int value) {
  if (!cfg || index < 1 || index > 64) return SS_ERR_ARGUMENT;
  cfg->cfg.set_fpm(index, value);
  return SS_OK;
}

int ss_config_get(const ss_config* cfg, int index, int* value) {
  if (!cfg || !value || index < 1 || index > 64) return SS_ERR_ARGUMENT;
  *value = cfg->cfg.fpm(index);
  return SS_OK;
}

void ss_config_set_seed(ss_config* cfg, unsigned long long seed) {
  if (cfg) cfg->cfg.seed = seed;
}

void ss_config_set_workers(ss_config* cfg, int workers) {
  if (cfg) cfg->cfg.workers = workers > 0 ? workers : 1;
}

ss_matrix* ss_matrix_dense_real(int n, const double* values, char uplo) {
  if (n <= 0 || !values || !valid_uplo(uplo)) return nullptr;
  DenseReal m(n, static_cast<Uplo>(uplo));
  std::memcpy(m.values.data(), values, sizeof(double) * static_cast<size_t>(n) * n);
  return new ss_matrix{std::move(m), n};
}

ss_matrix* ss_matrix_dense_complex(int n, const double* values, char uplo) {
  if (n <= 0 || !values || !valid_uplo(uplo)) return nullptr;
  DenseComplex m(n, static_cast<Uplo>(uplo));
  for (size_t k = 0; k < m.values.size(); ++k)
    m.values[k] = cplx(values[2 * k], values[2 * k + 1]);
  return new ss_matrix{std::move(m), n};
}

ss_matrix* ss_matrix_csr_real(int n, const int* row_ptr, const int* col_idx,
                              const double* values, char uplo) {
  return make_csr<double>(n, row_ptr, col_idx, values, uplo, false);
}

ss_matrix* ss_matrix_csr_complex(int n, const int* row_ptr, const int* col_idx,
                                 const double* values, char uplo) {
  return make_csr<cplx>(n, row_ptr, col_idx, values, uplo, true);
}

void ss_matrix_free(ss_matrix* m) { delete m; }

int ss_solve_interval(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                      double emin, double emax, int m0, const ss_config* cfg,
                      ss_result** out) {
  if (!a || !cfg) return SS_ERR_ARGUMENT;
  return guarded_solve(
      [&] {
        return interval_dispatch(to_structure(structure), a, b, Interval{emin, emax}, m0,
                                 cfg->cfg, SolveOptions{});
      },
      out);
}

int ss_solve_contour(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                     double emid_re, double emid_im, double r, int m0,
                     const ss_config* cfg, ss_result** out) {
  if (!a || !cfg) return SS_ERR_ARGUMENT;
  return guarded_solve(
      [&] {
        return contour_dispatch(to_structure(structure), a, b,
                                Ellipse{cplx(emid_re, emid_im), r}, m0, cfg->cfg,
                                SolveOptions{});
      },
      out);
}

int ss_solve_interval_x(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                        double emin, double emax, int m0, const ss_config* cfg,
                        const double* zne, const double* wne, int nq, int full_contour,
                        ss_result** out) {
  if (!a || !cfg || !zne || !wne || nq < 1) return SS_ERR_ARGUMENT;
  return guarded_solve(
      [&] {
        SolveOptions opts;
        opts.custom_rule = rule_from_arrays(zne, wne, nq, full_contour != 0);
        return interval_dispatch(to_structure(structure), a, b, Interval{emin, emax}, m0,
                                 cfg->cfg, opts);
      },
      out);
}

int ss_solve_contour_x(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                       double emid_re, double emid_im, double r, int m0,
                       const ss_config* cfg, const double* zne, const double* wne, int nq,
                       ss_result** out) {
  if (!a || !cfg || !zne || !wne || nq < 1) return SS_ERR_ARGUMENT;
  return guarded_solve(
      [&] {
        SolveOptions opts;
        opts.custom_rule = rule_from_arrays(zne, wne, nq, true);
        return contour_dispatch(to_structure(structure), a, b,
                                Ellipse{cplx(emid_re, emid_im), r}, m0, cfg->cfg, opts);
      },
      out);
}

int ss_solve_polynomial(ss_structure structure, int degree,
                        const ss_matrix* const* coeffs, double emid_re, double emid_im,
                        double r, int m0, const ss_config* cfg, ss_result** out) {
  if (!coeffs || !cfg || degree < 1) return SS_ERR_ARGUMENT;
  for (int l = 0; l <= degree; ++l)
    if (!coeffs[l]) return SS_ERR_ARGUMENT;
  return guarded_solve(
      [&] {
        const Ellipse region{cplx(emid_re, emid_im), r};
        const Structure st = to_structure(structure);
        const bool dense = std::holds_alternative<DenseReal>(coeffs[0]->m) ||
                           std::holds_alternative<DenseComplex>(coeffs[0]->m);
        if (dense) {
          std::vector<DenseComplex> cs;
          for (int l = 0; l <= degree; ++l) {
            if (const auto* dr = std::get_if<DenseReal>(&coeffs[l]->m))
              cs.push_back(to_complex(*dr));
            else if (const auto* dz = std::get_if<DenseComplex>(&coeffs[l]->m))
              cs.push_back(*dz);
            else
              throw std::invalid_argument("mixed dense/sparse coefficient list");
          }
          return solve_polynomial(st, cs, region, m0, cfg->cfg);
        }
        std::vector<CsrComplex> cs;
        for (int l = 0; l <= degree; ++l) {
          if (const auto* sr = std::get_if<CsrReal>(&coeffs[l]->m))
            cs.push_back(to_complex(*sr));
          else if (const auto* sz = std::get_if<CsrComplex>(&coeffs[l]->m))
            cs.push_back(*sz);
          else
            throw std::invalid_argument("mixed dense/sparse coefficient list");
        }
        return solve_polynomial(st, cs, region, m0, cfg->cfg);
      },
      out);
}

int ss_contour_interval(double emin, double emax, int nq, int quadrature, int ratio_pct,
                        double* zne, double* wne) {
  if (!zne || !wne) return SS_ERR_ARGUMENT;
  try {
    const ContourRule rule = hermitian_contour(
        emin, emax, nq, static_cast<QuadratureKind>(quadrature), ratio_pct);
    for (int j = 0; j < rule.size(); ++j) {
      zne[2 * j] = rule.nodes[j].real();
      zne[2 * j + 1] = rule.nodes[j].imag();
      wne[2 * j] = rule.weights[j].real();
      wne[2 * j + 1] = rule.weights[j].imag();
    }
    return SS_OK;
  } catch (const std::exception&) {
    return SS_ERR_REGION;
  }
}

int ss_contour_ellipse(double emid_re, double emid_im, double r, int nq, int quadrature,
                       int ratio_pct, int angle_deg, double* zne, double* wne) {
  if (!zne || !wne) return SS_ERR_ARGUMENT;
  try {
    const ContourRule rule =
        general_contour(cplx(emid_re, emid_im), r, nq,
                        static_cast<QuadratureKind>(quadrature), ratio_pct, angle_deg);
    for (int j = 0; j < rule.size(); ++j) {
      zne[2 * j] = rule.nodes[j].real();
      zne[2 * j + 1] = rule.nodes[j].imag();
      wne[2 * j] = rule.weights[j].real();
      wne[2 * j + 1] = rule.weights[j].imag();
    }
    return SS_OK;
  } catch (const std::exception&) {
    return SS_ERR_REGION;
  }
}

int ss_contour_custom(int nc, int pieces, const int* subdivisions, const int* types,
                      const double* edges, double* zne, double* wne) {
  if (!subdivisions || !types || !edges || !zne || !wne || pieces < 1)
    return SS_ERR_ARGUMENT;
  try {
    CustomGeometry g;
    g.edges.resize(pieces);
    g.types.assign(types, types + pieces);
    g.subdivisions.assign(subdivisions, subdivisions + pieces);
    for (int k = 0; k < pieces; ++k) g.edges[k] = cplx(edges[2 * k], edges[2 * k + 1]);
    int total = 0;
    for (int k = 0; k < pieces; ++k) total += subdivisions[k];
    if (total != nc) return SS_ERR_ARGUMENT;
    const ContourRule rule = custom_contour(g);
    for (int j = 0; j < rule.size(); ++j) {
      zne[2 * j] = rule.nodes[j].real();
      zne[2 * j + 1] = rule.nodes[j].imag();
      wne[2 * j] = rule.weights[j].real();
      wne[2 * j + 1] = rule.weights[j].imag();
    }
    return SS_OK;
  } catch (const std::exception&) {
    return SS_ERR_ARGUMENT;
  }
}

int ss_result_info(const ss_result* r) { return r ? r->r.info.value : SS_ERR_ARGUMENT; }
int ss_result_found(const ss_result* r) { return r ? r->r.m : 0; }
int ss_result_dimension(const ss_result* r) { return r ? r->r.n : 0; }
int ss_result_subspace(const ss_result* r) { return r ? r->r.m0 : 0; }
int ss_result_loops(const ss_result* r) { return r ? r->r.loops : 0; }
double ss_result_epsout(const ss_result* r) { return r ? r->r.epsout : 0.0; }
int ss_result_inner_iterations(const ss_result* r) { return r ? r->r.inner_iterations : 0; }

const double* ss_result_eigenvalues(const ss_result* r) {
  return r ? r->eigenvalues2.data() : nullptr;
}
const double* ss_result_vectors(const ss_result* r) {
  return r ? r->vectors2.data() : nullptr;
}
const double* ss_result_vectors_left(const ss_result* r) {
  return (r && !r->vectors_left2.empty()) ? r->vectors_left2.data() : nullptr;
}
const double* ss_result_residuals(const ss_result* r) {
  return r ? r->r.residuals.data() : nullptr;
}
const double* ss_result_residuals_left(const ss_result* r) {
  return (r && !r->r.residuals_left.empty()) ? r->r.residuals_left.data() : nullptr;
}

void ss_result_free(ss_result* r) { delete r; }

const char* ss_status_message(int status) {
  static thread_local std::string buf;
  if (status == SS_ERR_ARGUMENT) return "invalid argument";
  buf = info_message(InfoCode{status});
  return buf.c_str();
}

int ss_run_files(const char* prefix, long long seed, int workers, int inexact,
                 char* errbuf, int errbuf_len) {
  if (!prefix) return 64;
  SessionOptions opts;
  opts.seed = seed;
  opts.workers = workers > 0 ? workers : 1;
  opts.inexact = inexact != 0;
  const SessionResult res = run_files(prefix, opts);
  if (!res.error.empty() && errbuf && errbuf_len > 0) {
    std::snprintf(errbuf, static_cast<size_t>(errbuf_len), "%s", res.error.c_str());
  }
  return res.exit_code;
}

} // extern "C"
