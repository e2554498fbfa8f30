#pragma once

#include <cstdint>
#include <vector>

#include "relu/parallel.hpp"
#include "relu/solver.hpp"

namespace relu {

// Deduplicated inactive sets in rank space (0-based ranks into the Y-sorted
// positive-label list), in first-enumeration order: j ascending, then the
// index tuples lexicographically.
struct CandidateFamily {
  int k = 0;
  int m = 0;
  std::vector<std::vector<int>> inactive_sets;
  std::size_t size() const { return inactive_sets.size(); }
};

// All inactive sets of the form {1..i1} u {i2} u ... u {ij} for j = 1..k and
// 0 <= i1 < ... < ij <= m, with duplicates by set identity removed.
CandidateFamily enumerate_candidates(int m, int k);

struct ApproxResult {
  SolveReport best;
  ActiveSet best_active;
  std::int64_t candidates_evaluated = 0;
  double relu_value = 0.0;  // relu_objective at best.params
};

// Solves the surrogate for every candidate active set and keeps the minimum
// by surrogate value (ties go to the first-enumerated candidate). The k = n
// ratio contract is z_opt <= best.value <= (n/k) z_opt.
ApproxResult generalized_approx(const Dataset& d, int k, const SolverConfig& cfg = {},
                                Execution exec = default_execution());

// Prefix-only variant: for t = 0..N the inactive set is the first
// floor(t*m/N) ranks. A strict subset of the k = 1 candidates.
ApproxResult sorting_method(const Dataset& d, int splits, const SolverConfig& cfg = {},
                            Execution exec = default_execution());

// Shared kernel: evaluate explicit candidates (active sets given as rank
// lists) and min-reduce. Exposed for the serial-vs-parallel benchmark.
ApproxResult evaluate_rank_candidates(const Dataset& d, const std::vector<std::vector<int>>& inactive_rank_sets,
                                      const SolverConfig& cfg, Execution exec);

}  // namespace relu
