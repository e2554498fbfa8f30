#include "relu/approx.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#ifdef RELUFIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace relu {
namespace {

// Active set (raw sample ids) for an inactive rank set within the sorted
// positive-label list.
ActiveSet active_from_inactive_ranks(const Dataset& d, const std::vector<int>& inactive_ranks) {
  std::vector<bool> inactive(static_cast<std::size_t>(d.m()), false);
  for (int r : inactive_ranks) inactive[static_cast<std::size_t>(r)] = true;
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(d.m()) - inactive_ranks.size());
  for (int r = 0; r < d.m(); ++r) {
    if (!inactive[static_cast<std::size_t>(r)]) ids.push_back(d.pos_idx()[static_cast<std::size_t>(r)]);
  }
  return ActiveSet::of(d, std::move(ids));
}

struct BestSlot {
  double value = 0.0;
  std::size_t ordinal = 0;
  SolveReport report;
  bool set = false;

  // Strict total order: smaller value wins, ties to the smaller ordinal.
  void offer(double v, std::size_t ord, SolveReport rep) {
    if (!set || v < value || (v == value && ord < ordinal)) {
      value = v;
      ordinal = ord;
      report = std::move(rep);
      set = true;
    }
  }
  void merge(const BestSlot& other) {
    if (other.set) offer(other.value, other.ordinal, other.report);
  }
};

}  // namespace

CandidateFamily enumerate_candidates(int m, int k) {
  if (m < 0 || k < 0) throw std::invalid_argument("enumerate_candidates: negative m or k");
  CandidateFamily fam;
  fam.k = k;
  fam.m = m;
  std::set<std::vector<int>> seen;

  std::vector<int> tuple;
  // Indices i1 < ... < ij range over {0..m}; the inactive set is the prefix
  // {1..i1} plus the singletons {i2, ..., ij} (1-based ranks).
  auto emit = [&](const std::vector<int>& t) {
    std::vector<int> inactive;
    for (int r = 1; r <= t[0]; ++r) inactive.push_back(r - 1);  // 0-based ranks
    for (std::size_t l = 1; l < t.size(); ++l) inactive.push_back(t[l] - 1);
    std::sort(inactive.begin(), inactive.end());
    if (seen.insert(inactive).second) fam.inactive_sets.push_back(std::move(inactive));
  };
  auto recurse = [&](auto&& self, int next_min, int remaining) -> void {
    if (remaining == 0) {
      emit(tuple);
      return;
    }
    for (int i = next_min; i <= m; ++i) {
      tuple.push_back(i);
      self(self, i + 1, remaining - 1);
      tuple.pop_back();
    }
  };
  for (int j = 1; j <= k && j <= m + 1; ++j) recurse(recurse, 0, j);
  return fam;
}

ApproxResult evaluate_rank_candidates(const Dataset& d, const std::vector<std::vector<int>>& inactive_rank_sets,
                                      const SolverConfig& cfg, Execution exec) {
  if (inactive_rank_sets.empty())
    throw std::invalid_argument("evaluate_rank_candidates: no candidates");
  const std::size_t count = inactive_rank_sets.size();
  std::vector<ActiveSet> actives(count);
  for (std::size_t c = 0; c < count; ++c)
    actives[c] = active_from_inactive_ranks(d, inactive_rank_sets[c]);

  BestSlot best;
#ifdef RELUFIT_HAVE_OPENMP
  if (exec == Execution::openmp) {
#pragma omp parallel
    {
      BestSlot local;
#pragma omp for schedule(dynamic)
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(count); ++c) {
        SolveReport rep = minimize_surrogate(d, actives[static_cast<std::size_t>(c)], cfg);
        local.offer(rep.value, static_cast<std::size_t>(c), std::move(rep));
      }
#pragma omp critical
      best.merge(local);
    }
  } else
#else
  (void)exec;
#endif
  {
    for (std::size_t c = 0; c < count; ++c) {
      SolveReport rep = minimize_surrogate(d, actives[c], cfg);
      best.offer(rep.value, c, std::move(rep));
    }
  }

  ApproxResult res;
  res.best = best.report;
  res.best_active = actives[best.ordinal];
  res.candidates_evaluated = static_cast<std::int64_t>(count);
  res.relu_value = relu_objective(d, res.best.params);
  return res;
}

ApproxResult generalized_approx(const Dataset& d, int k, const SolverConfig& cfg, Execution exec) {
  if (k < 1) throw std::invalid_argument("generalized_approx: k must be >= 1");
  const CandidateFamily fam = enumerate_candidates(d.m(), k);
  return evaluate_rank_candidates(d, fam.inactive_sets, cfg, exec);
}

ApproxResult sorting_method(const Dataset& d, int splits, const SolverConfig& cfg, Execution exec) {
  if (splits < 1) throw std::invalid_argument("sorting_method: splits must be >= 1");
  std::vector<std::vector<int>> prefixes;
  std::set<int> seen;
  for (int t = 0; t <= splits; ++t) {
    const int cut = static_cast<int>((static_cast<std::int64_t>(t) * d.m()) / splits);
    if (!seen.insert(cut).second) continue;
    std::vector<int> inactive(static_cast<std::size_t>(cut));
    for (int r = 0; r < cut; ++r) inactive[static_cast<std::size_t>(r)] = r;
    prefixes.push_back(std::move(inactive));
  }
  return evaluate_rank_candidates(d, prefixes, cfg, exec);
}

}  // namespace relu
