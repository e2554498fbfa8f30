#pragma once

#include "relu/approx.hpp"

namespace relu {

// Largest positive-label count the exhaustive oracle will take on (2^m
// surrogate solves).
inline constexpr int kOracleMaxPositives = 20;

// Exact global optimum: solves the surrogate for every subset of the
// positive-label set and returns the minimum, which equals the global
// optimum of the nonconvex objective. Refuses m > kOracleMaxPositives with
// std::invalid_argument.
ApproxResult brute_force_opt(const Dataset& d, const SolverConfig& cfg = {},
                             Execution exec = default_execution());

// z_approx / max(z_opt, floor) for generalized_approx with parameter k.
// The z_opt = 0 case is asserted separately by callers (z_approx ~ 0).
double verify_ratio(const Dataset& d, int k, const SolverConfig& cfg = {});

}  // namespace relu
