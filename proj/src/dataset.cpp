#include "relu/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relu {

Sample Dataset::sample(int i) const {
  Sample s;
  s.x = Eigen::Map<const Eigen::VectorXd>(x_row(i), p_);
  s.y = ys_[static_cast<std::size_t>(i)];
  return s;
}

double Dataset::preactivation(int i, const Params& theta) const {
  const double* row = x_row(i);
  double w = 0.0;
  for (int j = 0; j < p_; ++j) w += row[j] * theta.beta[j];
  return w + theta.beta0;
}

Dataset build_dataset(const std::vector<Sample>& raw) {
  if (raw.empty()) throw std::invalid_argument("build_dataset: empty sample list");
  const int p = static_cast<int>(raw.front().x.size());
  if (p < 1) throw std::invalid_argument("build_dataset: feature dimension must be >= 1");

  Dataset d;
  d.n_ = static_cast<int>(raw.size());
  d.p_ = p;
  d.xs_.resize(static_cast<std::size_t>(d.n_) * p);
  d.ys_.resize(static_cast<std::size_t>(d.n_));
  for (int i = 0; i < d.n_; ++i) {
    const Sample& s = raw[static_cast<std::size_t>(i)];
    if (static_cast<int>(s.x.size()) != p)
      throw std::invalid_argument("build_dataset: inconsistent feature dimension");
    if (!std::isfinite(s.y)) throw std::invalid_argument("build_dataset: non-finite label");
    for (int j = 0; j < p; ++j) {
      if (!std::isfinite(s.x[j])) throw std::invalid_argument("build_dataset: non-finite feature");
      d.xs_[static_cast<std::size_t>(i) * p + j] = s.x[j];
    }
    d.ys_[static_cast<std::size_t>(i)] = s.y;
  }

  for (int i = 0; i < d.n_; ++i) {
    (d.ys_[static_cast<std::size_t>(i)] > 0.0 ? d.pos_idx_ : d.neg_idx_).push_back(i);
  }
  std::stable_sort(d.pos_idx_.begin(), d.pos_idx_.end(),
                   [&](int a, int b) { return d.ys_[static_cast<std::size_t>(a)] < d.ys_[static_cast<std::size_t>(b)]; });
  return d;
}

Dataset augment_intercept(const Dataset& d) {
  Dataset out;
  out.n_ = d.n_;
  out.p_ = d.p_ + 1;
  out.ys_ = d.ys_;
  out.pos_idx_ = d.pos_idx_;
  out.neg_idx_ = d.neg_idx_;
  out.xs_.resize(static_cast<std::size_t>(out.n_) * out.p_);
  for (int i = 0; i < d.n_; ++i) {
    const double* src = d.x_row(i);
    double* dst = out.xs_.data() + static_cast<std::size_t>(i) * out.p_;
    for (int j = 0; j < d.p_; ++j) dst[j] = src[j];
    dst[d.p_] = 1.0;
  }
  return out;
}

double relu_objective(const Dataset& d, const Params& theta) {
  if (theta.dim() != d.p()) throw std::invalid_argument("relu_objective: dimension mismatch");
  CompensatedSum acc;
  for (int i = 0; i < d.n(); ++i) {
    const double w = d.preactivation(i, theta);
    const double r = std::max(0.0, w) - d.y(i);
    acc.add(r * r);
  }
  return acc.value();
}

double relu_objective_subset(const Dataset& d, const Params& theta, const std::vector<int>& idx) {
  if (theta.dim() != d.p()) throw std::invalid_argument("relu_objective_subset: dimension mismatch");
  CompensatedSum acc;
  for (int i : idx) {
    const double w = d.preactivation(i, theta);
    const double r = std::max(0.0, w) - d.y(i);
    acc.add(r * r);
  }
  return acc.value();
}

}  // namespace relu
