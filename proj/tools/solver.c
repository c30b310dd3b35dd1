/* Command-line harness: solver <prefix> [--seed S] [--workers W] [--inexact]
 *
 * Expects <prefix>.mtx (coordinate format) and <prefix>.in (run
 * configuration); <prefix>B.mtx as well for generalized problems. Writes the
 * eigenpairs found to eig.out in the working directory. The exit code is 0
 * for usable runs, the solver status otherwise (64 for file/parse errors).
 */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "spectral_slice.h"

static void usage(const char* prog) {
  fprintf(stderr, "usage: %s <prefix> [--seed S] [--workers W] [--inexact]\n", prog);
}

int main(int argc, char** argv) {
  const char* prefix = NULL;
  long long seed = -1;
  int workers = 1;
  int inexact = 0;

  for (int i = 1; i < argc; ++i) {
    if (strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = atoll(argv[++i]);
    } else if (strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      workers = atoi(argv[++i]);
    } else if (strcmp(argv[i], "--inexact") == 0) {
      inexact = 1;
    } else if (strcmp(argv[i], "--help") == 0 || strcmp(argv[i], "-h") == 0) {
      usage(argv[0]);
      return 0;
    } else if (argv[i][0] == '-') {
      fprintf(stderr, "unknown option: %s\n", argv[i]);
      usage(argv[0]);
      return 64;
    } else if (!prefix) {
      prefix = argv[i];
    } else {
      fprintf(stderr, "unexpected argument: %s\n", argv[i]);
      usage(argv[0]);
      return 64;
    }
  }
  if (!prefix) {
    usage(argv[0]);
    return 64;
  }

  char err[512] = {0};
  const int code = ss_run_files(prefix, seed, workers, inexact, err, sizeof(err));
  if (code != 0) {
    if (err[0])
      fprintf(stderr, "solver: %s\n", err);
    else
      fprintf(stderr, "solver: exit status %d (%s)\n", code,
              ss_status_message(code >= 250 ? 250 - code : code));
  }
  return code;
}
