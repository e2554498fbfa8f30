#include "relu/hardness.hpp"

#include <numeric>
#include <stdexcept>

namespace relu {

SubsetSumInstance to_pm1(const SubsetSumInstance& inst) {
  for (std::int64_t v : inst.a) {
    if (v < 0) throw std::invalid_argument("to_pm1: negative weight");
  }
  SubsetSumInstance out = inst;
  out.a.push_back(std::accumulate(inst.a.begin(), inst.a.end(), std::int64_t{0}));
  return out;
}

Dataset reduce_to_relu(const SubsetSumInstance& inst, int p) {
  if (inst.p() != p) throw std::invalid_argument("reduce_to_relu: p mismatch");
  if (p < 1) throw std::invalid_argument("reduce_to_relu: need p >= 1");
  for (std::int64_t v : inst.a) {
    if (v < 0) throw std::invalid_argument("reduce_to_relu: negative weight");
  }
  const std::int64_t total = std::accumulate(inst.a.begin(), inst.a.end(), std::int64_t{0});

  std::vector<Sample> rows;
  rows.reserve(static_cast<std::size_t>(2 * p + 3));

  Sample s;
  s.x.resize(p);
  for (int j = 0; j < p; ++j) s.x[j] = static_cast<double>(inst.a[static_cast<std::size_t>(j)]);
  s.y = 0.5 * static_cast<double>(total);
  rows.push_back(s);

  for (int j = 0; j < p; ++j) s.x[j] = 2.0 * static_cast<double>(inst.a[static_cast<std::size_t>(j)]);
  s.y = static_cast<double>(total);
  rows.push_back(s);

  for (int i = 0; i < p; ++i) {
    Sample e;
    e.x = Eigen::VectorXd::Zero(p);
    e.x[i] = 1.0;
    e.y = 1.0;
    rows.push_back(e);
    e.x[i] = -1.0;
    rows.push_back(e);
  }

  // The label is -10p: the intercept-penalty term of the equivalent
  // objective is (max{0, beta0} + 10p)^2, which floors the optimum at
  // 100 p^2 and vanishes only on beta0 <= 0.
  Sample zero;
  zero.x = Eigen::VectorXd::Zero(p);
  zero.y = -10.0 * static_cast<double>(p);
  rows.push_back(zero);

  return build_dataset(rows);
}

double threshold(int p) {
  if (p < 1) throw std::invalid_argument("threshold: need p >= 1");
  return static_cast<double>(p) + 100.0 * static_cast<double>(p) * static_cast<double>(p);
}

bool check_feasibility_small(const SubsetSumInstance& inst) {
  const int p = inst.p();
  if (p > 24) throw std::invalid_argument("check_feasibility_small: refusing p > 24");
  const std::int64_t total = std::accumulate(inst.a.begin(), inst.a.end(), std::int64_t{0});
  // a.x = total/2 with x in {+-1}^p, in integers: 2 * sum_{x_i = +1} a_i
  // equals total + total/2, i.e. 4 * plus_sum == 3 * total.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
    std::int64_t plus = 0;
    for (int j = 0; j < p; ++j) {
      if (mask & (std::uint64_t{1} << j)) plus += inst.a[static_cast<std::size_t>(j)];
    }
    if (4 * plus == 3 * total) return true;
  }
  return false;
}

}  // namespace relu
