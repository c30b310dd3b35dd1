#include "linalg/bicgstab.hpp"

#include <cmath>
#include <vector>

namespace spslice {

namespace {

template <class CT>
double nrm2(const std::vector<CT>& v) {
  double s = 0.0;
  for (const auto& e : v) s += std::norm(e);
  return std::sqrt(s);
}

template <class CT>
CT cdot(const std::vector<CT>& a, const std::vector<CT>& b) {
  CT s{};
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

} // namespace

template <class CT>
void bicgstab(const ApplyOp<CT>& apply, const CT* b, CT* x, int n, double tol, int maxit,
              SolveStats& stats) {
  using R = typename CT::value_type;
  stats = SolveStats{};
  std::vector<CT> r(b, b + n), rhat, p(n), v(n), s(n), t(n), work(n);
  const double bnorm = nrm2(r);
  for (int i = 0; i < n; ++i) x[i] = CT{};
  if (bnorm == 0.0) return;

  std::vector<CT> best(n, CT{});
  double best_res = 1.0;
  auto consider = [&](const CT* cand, double res) {
    if (res < best_res) {
      best_res = res;
      std::copy(cand, cand + n, best.begin());
    }
  };
  auto perturb = [&] {
    for (int i = 0; i < n; ++i)
      x[i] += CT(static_cast<R>(1e-8 * bnorm * ((i % 3) - 1)), static_cast<R>(0));
  };

  bool restarted = false;
restart:
  apply(x, work.data());
  for (int i = 0; i < n; ++i) r[i] = b[i] - work[i];
  rhat = r;
  CT rho{1}, alpha{1}, omega{1};
  std::fill(p.begin(), p.end(), CT{});
  std::fill(v.begin(), v.end(), CT{});

  while (stats.iterations < maxit) {
    const CT rho_new = cdot(rhat, r);
    if (std::abs(rho_new) == 0.0 || std::abs(omega) == 0.0) {
      if (!restarted) {
        restarted = true;
        perturb();
        goto restart;
      }
      stats.breakdown = true;
      break;
    }
    const CT beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    apply(p.data(), v.data());
    const CT rv = cdot(rhat, v);
    if (std::abs(rv) == 0.0) {
      if (!restarted) {
        restarted = true;
        perturb();
        goto restart;
      }
      stats.breakdown = true;
      break;
    }
    alpha = rho / rv;
    for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    ++stats.iterations;
    const double sres = nrm2(s) / bnorm;
    if (sres <= tol) {
      for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
      consider(x, sres);
      break;
    }
    for (int i = 0; i < n; ++i) work[i] = x[i] + alpha * p[i];
    consider(work.data(), sres);
    apply(s.data(), t.data());
    const CT tt = cdot(t, t);
    if (std::abs(tt) == 0.0) {
      for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
      consider(x, sres);
      break;
    }
    omega = cdot(t, s) / tt;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i] + omega * s[i];
      r[i] = s[i] - omega * t[i];
    }
    const double rres = nrm2(r) / bnorm;
    consider(x, rres);
    if (rres <= tol) break;
  }

  std::copy(best.begin(), best.end(), x);
  // Report the honestly recomputed residual of the returned iterate.
  apply(x, work.data());
  for (int i = 0; i < n; ++i) work[i] = b[i] - work[i];
  stats.final_relative_residual = nrm2(work) / bnorm;
}

template void bicgstab<std::complex<double>>(const ApplyOp<std::complex<double>>&,
                                             const std::complex<double>*, std::complex<double>*,
                                             int, double, int, SolveStats&);
template void bicgstab<std::complex<float>>(const ApplyOp<std::complex<float>>&,
                                            const std::complex<float>*, std::complex<float>*,
                                            int, double, int, SolveStats&);

} // namespace spslice
