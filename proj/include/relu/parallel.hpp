#pragma once

#include <cstddef>

namespace relu {

// Execution policy for the candidate-evaluation kernels. The serial path is
// the reference implementation; the OpenMP path must produce identical
// results (the reductions use a strict total order), which the tests check.
enum class Execution { serial, openmp };

inline Execution default_execution() {
#ifdef RELUFIT_HAVE_OPENMP
  return Execution::openmp;
#else
  return Execution::serial;
#endif
}

}  // namespace relu
