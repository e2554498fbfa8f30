#pragma once

#include <cstdint>
#include <vector>

#include "relu/dataset.hpp"

namespace relu {

// Nonnegative integer weights of a subset-sum / {+-1}-subset-sum instance.
struct SubsetSumInstance {
  std::vector<std::int64_t> a;
  int p() const { return static_cast<int>(a.size()); }
};

// Appends a_{p+1} = sum(a). The extended instance, read as {+-1}-subset-sum,
// is feasible iff the original subset-sum instance is.
SubsetSumInstance to_pm1(const SubsetSumInstance& inst);

// The 2p+3 training samples whose optimal objective is threshold(p) exactly
// when the {+-1} instance is feasible, and strictly larger otherwise:
//   (a, sum(a)/2), (2a, sum(a)), the pairs (e_i, 1), (-e_i, 1), and (0, 10p).
// Throws if p != inst.p().
Dataset reduce_to_relu(const SubsetSumInstance& inst, int p);

// p + 100 p^2.
double threshold(int p);

// Exhaustive {+-1} decision: true iff some x in {+-1}^p has a.x = sum(a)/2.
// Refuses p > 24.
bool check_feasibility_small(const SubsetSumInstance& inst);

}  // namespace relu
