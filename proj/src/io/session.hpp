// File-based solve session backing the command-line harness: loads
// <prefix>.mtx (+ <prefix>B.mtx for generalized runs) and <prefix>.in, runs
// the sparse driver, writes eig.out, and maps the outcome to a process exit
// code.
#pragma once

#include <cstdint>
#include <string>

#include "core/types.hpp"

namespace spslice {

struct SessionOptions {
  long long seed = -1; // < 0: derive from the clock and report it in the log
  int workers = 1;
  bool inexact = false; // force the iterative-solver defaults
};

struct SessionResult {
  int exit_code = 0;
  InfoCode info{};
  std::string error; // nonempty on setup/parse failures
};

/// Exit code 0 when info is in {0, 1, 4, 5}; positive infos map to
/// themselves; negative infos map to 250+|info|; file/parse problems give 64.
SessionResult run_files(const std::string& prefix, const SessionOptions& options);

} // namespace spslice
