#pragma once

#include <vector>

#include "relu/loss.hpp"

namespace relu {

struct SolverConfig {
  int max_iters = 5000;
  double rel_tol = 1e-10;
  double grad_tol = 1e-8;
  int polish_rounds = 20;
  // When set, every accepted objective value is appended (both phases).
  std::vector<double>* trace = nullptr;
};

struct SolveReport {
  Params params;
  double value = 0.0;  // surrogate objective at params, re-evaluated
  int iterations = 0;
  bool converged = false;
  // Final subgradient norm; exactly 0 encodes a polish fixed point.
  double certificate = 0.0;
};

// Minimizes the convex surrogate for a fixed active set. Phase 1 runs
// subgradient descent with Armijo backtracking from theta = 0; phase 2
// repeatedly freezes each term's quadratic piece at the current point and
// solves the resulting least-squares system exactly, accepting only
// non-increasing steps. Deterministic given (d, I, cfg).
//
// Throws std::runtime_error if a non-finite objective shows up.
SolveReport minimize_surrogate(const Dataset& d, const ActiveSet& I, const SolverConfig& cfg = {});

}  // namespace relu
