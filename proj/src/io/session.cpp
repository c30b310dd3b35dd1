#include "io/session.hpp"

#include <chrono>
#include <fstream>

#include "core/config.hpp"
#include "drivers/log.hpp"
#include "drivers/solve.hpp"
#include "io/coordinate.hpp"
#include "io/eigout.hpp"
#include "io/runspec.hpp"

namespace spslice {

namespace {

int exit_code_for(InfoCode info) {
  if (info.value == 0 || info.value == 1 || info.value == 4 || info.value == 5) return 0;
  if (info.value < 0) return 250 - info.value; // -1 -> 251, -2 -> 252, -3 -> 253
  return info.value;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

} // namespace

SessionResult run_files(const std::string& prefix, const SessionOptions& options) {
  SessionResult out;
  RunSpec spec;
  try {
    spec = read_runspec(prefix + ".in");
  } catch (const std::exception& e) {
    out.error = e.what();
    out.exit_code = 64;
    return out;
  }

  const Structure structure = spec.problem_structure();
  ProblemKind kind;
  kind.structure = structure;
  kind.form = spec.form == 'g' ? Form::generalized() : Form::standard();
  Config cfg = default_config(kind, options.inexact);
  for (const auto& [idx, val] : spec.overrides) cfg.set_fpm(idx, val);
  cfg.workers = options.workers;
  const bool time_seed = options.seed < 0;
  cfg.seed = time_seed ? static_cast<std::uint64_t>(
                             std::chrono::steady_clock::now().time_since_epoch().count())
                       : static_cast<std::uint64_t>(options.seed);
  {
    RunLog log(cfg.print_level());
    log.line("run '", prefix, "': seed ", cfg.seed, time_seed ? " (clock-derived)" : "",
             ", workers ", cfg.workers);
  }

  const std::string a_path = prefix + ".mtx";
  const std::string b_path = prefix + "B.mtx";
  if (!file_exists(a_path)) {
    out.error = "missing matrix file: " + a_path;
    out.exit_code = 64;
    return out;
  }
  if (spec.form == 'g' && !file_exists(b_path)) {
    out.error = "missing mass-matrix file for a generalized run: " + b_path;
    out.exit_code = 64;
    return out;
  }

  EigResult result;
  try {
    if (spec.precision == 'd') {
      const CsrReal a = read_coordinate_real(a_path, spec.uplo);
      if (spec.form == 'g') {
        const CsrReal b = read_coordinate_real(b_path, spec.uplo);
        result = solve_sparse(structure, a, &b, spec.region, spec.m0, cfg);
      } else {
        result = solve_sparse(structure, a, nullptr, spec.region, spec.m0, cfg);
      }
    } else {
      const CsrComplex a = read_coordinate_complex(a_path, spec.uplo);
      if (spec.form == 'g') {
        const CsrComplex b = read_coordinate_complex(b_path, spec.uplo);
        result = solve_sparse(structure, a, &b, spec.region, spec.m0, cfg);
      } else {
        result = solve_sparse(structure, a, nullptr, spec.region, spec.m0, cfg);
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    out.exit_code = 64;
    return out;
  }

  try {
    write_eigout(result, "eig.out", /*complex_spectrum=*/!spec.hermitian_problem());
  } catch (const std::exception& e) {
    out.error = e.what();
    out.exit_code = 64;
    return out;
  }

  out.info = result.info;
  out.exit_code = exit_code_for(result.info);
  return out;
}

} // namespace spslice
