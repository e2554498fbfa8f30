#pragma once

#include <cstdint>
#include <vector>

#include "relu/solver.hpp"

namespace relu {

struct GdConfig {
  int max_iters = 1000;       // T
  double eps = 0.01;          // stop when the objective decrease drops to eps
  double eta0 = 1.0;          // initial step
  double gamma_step = 0.03;   // step decay: eta <- eta0 / (1 + gamma_step * t)
  double alpha = 0.6;         // backtrack factor
  int batch = 0;              // SGD only; 0 means floor(0.1 n), clamped to [1, n]
};

// Alternates solving the surrogate for the current active set with refreshing
// the active set from the solution's preactivation signs; stops at a fixed
// point or after max_outer solves. The surrogate value sequence (optionally
// recorded in surrogate_trace) is nonincreasing.
SolveReport iterative_heuristic(const Dataset& d, const Params& init, int max_outer,
                                const SolverConfig& cfg = {},
                                std::vector<double>* surrogate_trace = nullptr);

// Gradient descent on the unnormalized ReLU objective with backtracking and
// the eta0 / (1 + gamma_step * t) step reset after each accepted iteration.
// beta0 rides along as one more coordinate, which matches folding a constant
// feature into the data. The per-sample gradient factor (1 + sgn(w)) is 0 on
// w <= 0 and 2 on w > 0, so a point with all preactivations <= 0 is
// stationary for this update.
SolveReport gradient_descent(const Dataset& d, const GdConfig& cfg, const Params& init,
                             std::vector<double>* objective_trace = nullptr);

// Mini-batch variant: a fresh uniform without-replacement batch per
// iteration; backtracking and termination test the batch loss. With
// batch == n the iterates reproduce gradient_descent bit for bit.
SolveReport sgd(const Dataset& d, const GdConfig& cfg, const Params& init, std::uint64_t seed);

}  // namespace relu
