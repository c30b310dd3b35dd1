/*
 * spectral-slice: contour-integration eigensolver.
 *
 * Computes all eigenpairs inside a user-chosen region of the complex plane
 * for standard/generalized Hermitian, general non-Hermitian and polynomial
 * eigenvalue problems. Handles are opaque; every entry point returns a
 * status code (0 success, small positive warnings, 2xx input errors, 1xx
 * bad parameter-slot values, negative internal failures; see
 * ss_status_message).
 *
 * Complex data crosses this interface as interleaved doubles (re0, im0,
 * re1, im1, ...). Matrix indices in CSR arrays are 1-based, matching the
 * coordinate-file convention. Parameter slots are addressed with their
 * 1-based index i in [1, 64]; a C array holding the block would store slot
 * i at position i-1.
 */
#ifndef SPECTRAL_SLICE_H
#define SPECTRAL_SLICE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SS_REAL_SYMMETRIC = 0,
  SS_COMPLEX_HERMITIAN = 1,
  SS_COMPLEX_SYMMETRIC = 2,
  SS_REAL_GENERAL = 3,
  SS_COMPLEX_GENERAL = 4
} ss_structure;

/* Selected status values (the full model follows the library's info table) */
#define SS_OK 0
#define SS_WARN_NO_EIGENVALUE 1
#define SS_WARN_NO_CONVERGENCE 2
#define SS_WARN_SUBSPACE_TOO_SMALL 3
#define SS_WARN_SUBSPACE_ONLY 4
#define SS_WARN_STOCHASTIC_ONLY 5
#define SS_WARN_NOT_BIORTHONORMAL 6
#define SS_ERR_REGION 200
#define SS_ERR_SUBSPACE 201
#define SS_ERR_SIZE 202
#define SS_ERR_ARGUMENT (-100)

typedef struct ss_config ss_config;
typedef struct ss_matrix ss_matrix;
typedef struct ss_result ss_result;

/* ---- configuration ----------------------------------------------------- */

/* Default parameter block for a problem structure; nonzero `inexact`
 * selects the iterative-inner-solver defaults. Never returns NULL. */
ss_config* ss_config_new(ss_structure structure, int inexact);
void ss_config_free(ss_config* cfg);

/* 1-based slot access; returns SS_ERR_ARGUMENT for an index outside [1,64]. */
int ss_config_set(ss_config* cfg, int index, int value);
int ss_config_get(const ss_config* cfg, int index, int* value);

void ss_config_set_seed(ss_config* cfg, unsigned long long seed);
void ss_config_set_workers(ss_config* cfg, int workers);

/* ---- matrices ----------------------------------------------------------- */

/* Dense column-major input, n x n. uplo is 'F', 'L' or 'U'; triangular
 * storage is mirrored internally for symmetric/Hermitian structures.
 * Complex variants take interleaved values of length 2*n*n. */
ss_matrix* ss_matrix_dense_real(int n, const double* values, char uplo);
ss_matrix* ss_matrix_dense_complex(int n, const double* values, char uplo);

/* CSR input with 1-based row_ptr (length n+1) and col_idx (length nnz =
 * row_ptr[n]-1). Complex values interleaved (length 2*nnz). */
ss_matrix* ss_matrix_csr_real(int n, const int* row_ptr, const int* col_idx,
                              const double* values, char uplo);
ss_matrix* ss_matrix_csr_complex(int n, const int* row_ptr, const int* col_idx,
                                 const double* values, char uplo);
void ss_matrix_free(ss_matrix* m);

/* ---- solves ------------------------------------------------------------- */

/* Hermitian problems over a real interval [emin, emax]. `b` may be NULL for
 * a standard problem. m0 is the search-subspace width. On success (and on
 * warning statuses) *out receives a result handle. */
int ss_solve_interval(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                      double emin, double emax, int m0, const ss_config* cfg,
                      ss_result** out);

/* Non-Hermitian problems over an ellipse: center (emid_re, emid_im),
 * horizontal radius r; vertical radius and rotation come from parameter
 * slots 18 and 19. */
int ss_solve_contour(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                     double emid_re, double emid_im, double r, int m0,
                     const ss_config* cfg, ss_result** out);

/* Polynomial problems sum_l lambda^l A_l x = 0; coeffs lists A_0..A_p. */
int ss_solve_polynomial(ss_structure structure, int degree,
                        const ss_matrix* const* coeffs, double emid_re, double emid_im,
                        double r, int m0, const ss_config* cfg, ss_result** out);

/* Expert variants: supply custom quadrature nodes/weights (interleaved
 * complex, length 2*nq) instead of the built-in elliptic rule. For interval
 * solves the nodes describe the upper half-contour unless `full_contour` is
 * nonzero. */
int ss_solve_interval_x(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                        double emin, double emax, int m0, const ss_config* cfg,
                        const double* zne, const double* wne, int nq, int full_contour,
                        ss_result** out);
int ss_solve_contour_x(ss_structure structure, const ss_matrix* a, const ss_matrix* b,
                       double emid_re, double emid_im, double r, int m0,
                       const ss_config* cfg, const double* zne, const double* wne, int nq,
                       ss_result** out);

/* ---- quadrature utilities ------------------------------------------------ */

/* Half-contour rule for [emin, emax]: nq nodes/weights written interleaved
 * (arrays of length 2*nq). quadrature: 0 Gauss, 1 trapezoidal. ratio_pct is
 * 100 * vertical/horizontal axis ratio. */
int ss_contour_interval(double emin, double emax, int nq, int quadrature, int ratio_pct,
                        double* zne, double* wne);

/* Full elliptic rule around (emid_re, emid_im) with horizontal radius r and
 * rotation angle in degrees. */
int ss_contour_ellipse(double emid_re, double emid_im, double r, int nq, int quadrature,
                       int ratio_pct, int angle_deg, double* zne, double* wne);

/* Piecewise custom contour: pieces chain clockwise through `edges`
 * (interleaved complex, length 2*pieces); type[k] = 0 for a line, t > 0 for
 * a convex half-ellipse with primary/secondary axis ratio t/100;
 * subdivisions[k] nodes per piece. nc must equal the subdivision total;
 * zne/wne receive nc interleaved values each. */
int ss_contour_custom(int nc, int pieces, const int* subdivisions, const int* types,
                      const double* edges, double* zne, double* wne);

/* ---- results ------------------------------------------------------------- */

int ss_result_info(const ss_result* r);
int ss_result_found(const ss_result* r);          /* eigenpairs inside the region */
int ss_result_dimension(const ss_result* r);      /* system size n */
int ss_result_subspace(const ss_result* r);       /* columns allocated (m0) */
int ss_result_loops(const ss_result* r);
double ss_result_epsout(const ss_result* r);
int ss_result_inner_iterations(const ss_result* r);

/* Interleaved complex eigenvalues, length 2*m0 doubles; entries beyond the
 * first `found` lie outside the region. */
const double* ss_result_eigenvalues(const ss_result* r);
/* Right eigenvectors, column-major n x m0 interleaved complex. */
const double* ss_result_vectors(const ss_result* r);
/* Left eigenvectors when computed (two-sided runs), else NULL. */
const double* ss_result_vectors_left(const ss_result* r);
/* Relative residuals, length m0 (right); left residuals when computed. */
const double* ss_result_residuals(const ss_result* r);
const double* ss_result_residuals_left(const ss_result* r);
void ss_result_free(ss_result* r);

const char* ss_status_message(int status);

/* ---- file-based session (used by the CLI) -------------------------------- */

/* Loads <prefix>.mtx / <prefix>B.mtx / <prefix>.in, solves, writes eig.out.
 * seed < 0 derives a seed from the clock. Returns the process exit code
 * (0 also for the usable warning statuses 1, 4, 5); parse/setup failures
 * return 64 and, when `errbuf` is given, copy a message into it. */
int ss_run_files(const char* prefix, long long seed, int workers, int inexact,
                 char* errbuf, int errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* SPECTRAL_SLICE_H */
