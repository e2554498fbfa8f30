#include "relu/loss.hpp"

#include <algorithm>
#include <stdexcept>

namespace relu {

ActiveSet ActiveSet::of(const Dataset& d, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<int> pos = d.pos_idx();
  std::sort(pos.begin(), pos.end());
  if (!std::includes(pos.begin(), pos.end(), members.begin(), members.end()))
    throw std::invalid_argument("ActiveSet: member outside the positive-label set");
  ActiveSet s;
  s.members_ = std::move(members);
  return s;
}

ActiveSet ActiveSet::all(const Dataset& d) { return of(d, d.pos_idx()); }

ActiveSet ActiveSet::none(const Dataset&) { return ActiveSet{}; }

bool ActiveSet::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

double phi(const Dataset& d, const Params& theta) {
  if (theta.dim() != d.p()) throw std::invalid_argument("phi: dimension mismatch");
  CompensatedSum acc;
  for (int i : d.neg_idx()) {
    const double w = d.preactivation(i, theta);
    const double r = std::max(0.0, w) - d.y(i);
    acc.add(r * r);
  }
  return acc.value();
}

double surrogate_objective(const Dataset& d, const ActiveSet& I, const Params& theta) {
  if (theta.dim() != d.p()) throw std::invalid_argument("surrogate_objective: dimension mismatch");
  CompensatedSum acc;
  for (int i : d.pos_idx()) {
    const double w = d.preactivation(i, theta);
    if (I.contains(i)) {
      const double r = w - d.y(i);
      acc.add(r * r);
    } else {
      acc.add(sigma(w, d.y(i)));
    }
  }
  for (int i : d.neg_idx()) {
    const double w = d.preactivation(i, theta);
    const double r = std::max(0.0, w) - d.y(i);
    acc.add(r * r);
  }
  return acc.value();
}

SubgradientVector subgradient_surrogate(const Dataset& d, const ActiveSet& I, const Params& theta) {
  if (theta.dim() != d.p()) throw std::invalid_argument("subgradient_surrogate: dimension mismatch");
  SubgradientVector g;
  g.g_beta = Eigen::VectorXd::Zero(d.p());
  const auto accumulate = [&](int i, double factor) {
    if (factor == 0.0) return;
    const double* row = d.x_row(i);
    for (int j = 0; j < d.p(); ++j) g.g_beta[j] += factor * row[j];
    g.g_beta0 += factor;
  };
  for (int i : d.pos_idx()) {
    const double w = d.preactivation(i, theta);
    if (I.contains(i)) {
      accumulate(i, 2.0 * (w - d.y(i)));
    } else {
      accumulate(i, sigma_dx(w, d.y(i)));
    }
  }
  for (int i : d.neg_idx()) {
    const double w = d.preactivation(i, theta);
    accumulate(i, w > 0.0 ? 2.0 * (w - d.y(i)) : 0.0);
  }
  return g;
}

double empirical_S(const Dataset& d, const Params& theta, double y) {
  CompensatedSum acc;
  for (int i = 0; i < d.n(); ++i) {
    const double w = d.preactivation(i, theta);
    acc.add(psi_y(w, d.y(i), y));
  }
  return acc.value() / static_cast<double>(d.n());
}

}  // namespace relu
