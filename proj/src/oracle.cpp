#include "relu/oracle.hpp"

#include <stdexcept>

namespace relu {

ApproxResult brute_force_opt(const Dataset& d, const SolverConfig& cfg, Execution exec) {
  const int m = d.m();
  if (m > kOracleMaxPositives)
    throw std::invalid_argument("brute_force_opt: refusing m > " + std::to_string(kOracleMaxPositives) +
                                " positive labels (2^m solves)");
  const std::uint64_t subsets = std::uint64_t{1} << m;
  std::vector<std::vector<int>> inactive_sets;
  inactive_sets.reserve(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<int> inactive;
    for (int r = 0; r < m; ++r) {
      if (!(mask & (std::uint64_t{1} << r))) inactive.push_back(r);
    }
    inactive_sets.push_back(std::move(inactive));
  }
  return evaluate_rank_candidates(d, inactive_sets, cfg, exec);
}

double verify_ratio(const Dataset& d, int k, const SolverConfig& cfg) {
  const ApproxResult approx = generalized_approx(d, k, cfg);
  const ApproxResult opt = brute_force_opt(d, cfg);
  constexpr double kFloor = 1e-12;
  return approx.best.value / std::max(opt.best.value, kFloor);
}

}  // namespace relu
