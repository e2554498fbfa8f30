#pragma once

#include <Eigen/Dense>
#include <vector>

namespace relu {

struct Sample {
  Eigen::VectorXd x;
  double y = 0.0;
};

// Candidate solution (beta, beta0).
struct Params {
  Eigen::VectorXd beta;
  double beta0 = 0.0;

  static Params zero(int p) { return {Eigen::VectorXd::Zero(p), 0.0}; }
  int dim() const { return static_cast<int>(beta.size()); }
};

// Samples plus the positive/negative label split. pos_idx() lists the
// indices with y > 0 ordered so their labels are nondecreasing (stable:
// ties keep input order); neg_idx() lists y <= 0 in input order. Sample
// storage itself keeps the input order. Immutable once built.
class Dataset {
 public:
  Dataset() = default;

  int n() const { return n_; }
  int p() const { return p_; }
  int m() const { return static_cast<int>(pos_idx_.size()); }

  double y(int i) const { return ys_[static_cast<std::size_t>(i)]; }
  const double* x_row(int i) const { return xs_.data() + static_cast<std::size_t>(i) * p_; }
  Sample sample(int i) const;

  const std::vector<int>& pos_idx() const { return pos_idx_; }
  const std::vector<int>& neg_idx() const { return neg_idx_; }

  // x_i . beta + beta0, accumulated serially left to right. All loss and
  // solver code funnels through this so intercept folding is bit-exact.
  double preactivation(int i, const Params& theta) const;

 private:
  friend Dataset build_dataset(const std::vector<Sample>& raw);
  friend Dataset augment_intercept(const Dataset& d);

  std::vector<double> xs_;  // row-major, n * p
  std::vector<double> ys_;
  std::vector<int> pos_idx_;
  std::vector<int> neg_idx_;
  int n_ = 0;
  int p_ = 0;
};

// Throws std::invalid_argument on dimension mismatch or non-finite input.
Dataset build_dataset(const std::vector<Sample>& raw);

// Appends a constant-1 feature to every sample; p grows by one. Repeated
// augmentation appends another 1 (no dedup).
Dataset augment_intercept(const Dataset& d);

// Unnormalized sum of squares  sum_i (max{0, x_i.beta + beta0} - y_i)^2.
double relu_objective(const Dataset& d, const Params& theta);

// Same sum restricted to an index subset, in the order given.
double relu_objective_subset(const Dataset& d, const Params& theta, const std::vector<int>& idx);

// Compensated (Neumaier) accumulator used for all objective reductions.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace relu
