#pragma once

#include <vector>

#include "relu/dataset.hpp"

namespace relu {

// Subset of the positive-label indices that is assumed to sit on the linear
// piece of the ReLU. Stored as sorted raw sample indices.
class ActiveSet {
 public:
  // Validates members against d.pos_idx(); throws std::invalid_argument on
  // indices outside the positive-label set.
  static ActiveSet of(const Dataset& d, std::vector<int> members);
  static ActiveSet all(const Dataset& d);
  static ActiveSet none(const Dataset& d);

  const std::vector<int>& members() const { return members_; }
  bool contains(int i) const;
  std::size_t size() const { return members_.size(); }
  bool operator==(const ActiveSet& other) const { return members_ == other.members_; }

 private:
  std::vector<int> members_;  // sorted
};

struct SubgradientVector {
  Eigen::VectorXd g_beta;
  double g_beta0 = 0.0;
};

// Convex per-sample majorant of the positive-label ReLU loss:
//   (x - y)^2 for x > 2y, y^2 otherwise.
inline double sigma(double x, double y) {
  if (x > 2.0 * y) {
    const double r = x - y;
    return r * r;
  }
  return y * y;
}

// d/dx of sigma with the left-piece convention at the kink x = 2y.
inline double sigma_dx(double x, double y) { return x > 2.0 * y ? 2.0 * (x - y) : 0.0; }

// Negative-label part of the objective: sum over I- of (max{0, w_i} - y_i)^2.
double phi(const Dataset& d, const Params& theta);

// f_I^sigma + phi: active terms quadratic, inactive positive-label terms
// through sigma, negative-label terms through phi.
double surrogate_objective(const Dataset& d, const ActiveSet& I, const Params& theta);

// A valid subgradient of surrogate_objective; equals the gradient at
// differentiable points. Kinks (sigma at w = 2y, phi terms at w = 0) take the
// left-piece derivative, which is zero contribution.
SubgradientVector subgradient_surrogate(const Dataset& d, const ActiveSet& I, const Params& theta);

// Asymptotic integrand: sigma(u, Y) when 0 < Y <= y, squared linear residual
// when Y > y, ReLU squared residual when Y <= 0.
inline double psi_y(double u, double Y, double y) {
  if (Y > 0.0 && Y <= y) return sigma(u, Y);
  if (Y > y) {
    const double r = u - Y;
    return r * r;
  }
  const double r = std::max(0.0, u) - Y;
  return r * r;
}

// d/du of psi_y, left-piece convention at both kinds of kink.
inline double psi_y_du(double u, double Y, double y) {
  if (Y > 0.0 && Y <= y) return sigma_dx(u, Y);
  if (Y > y) return 2.0 * (u - Y);
  return u > 0.0 ? 2.0 * (u - Y) : 0.0;
}

// (1/n) sum_i psi_y(x_i.beta + beta0, y_i, y)  -- the one place the 1/n
// normalization is kept.
double empirical_S(const Dataset& d, const Params& theta, double y);

}  // namespace relu
