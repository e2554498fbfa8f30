#pragma once

#include <cstdint>
#include <limits>

#include "relu/dataset.hpp"

namespace relu {

// Ground-truth model for synthetic instances. Features are iid ternary:
// +1 and -1 with probability sparsity/2 each, 0 otherwise. The true
// intercept is fixed at 0; responses are max{0, x.beta_star} plus Gaussian
// noise whose standard deviation is rho * signal std, with rho derived from
// the signal-to-noise level in dB.
struct StatModelSpec {
  int p = 1;
  int n = 1;
  double sparsity = 0.5;                                    // P in [0, 1]
  double beta_star_mean = 0.0;                              // beta* ~ N(mean 1, var I)
  double beta_star_var = 1.0;
  double db = std::numeric_limits<double>::infinity();      // infinity = noiseless
  bool realizable_rows = false;  // prepend the p rows e_i * sgn(beta*_i)
  std::uint64_t seed = 0;
};

// rho = 10^(-dB/20); infinity maps to 0. Strictly decreasing on dB > 0.
double db_to_rho(double db);

struct Instance {
  Dataset train;
  Dataset test;
  Params truth;      // (beta*, 0)
  double sigma = 0;  // signal std on the training design
  double rho = 0;
  double delta_sq = 0;  // beta*' Cov(X) beta* for the ternary design
};

// Deterministic under spec.seed; draw order is beta*, then train X row-major
// (random rows only), then train noise, then test X, then test noise. The
// test set is a pure random draw (no deterministic rows) and reuses the
// training-design sigma. Throws when the signal is degenerate (sigma = 0)
// while rho > 0.
Instance generate_instance(const StatModelSpec& spec);

// beta' Sigma beta. Throws std::invalid_argument if Sigma is not symmetric.
double delta_squared(const Eigen::VectorXd& beta_star, const Eigen::MatrixXd& Sigma);

// Closed-form bracket on the asymptotic optimal value of the y = 0 sorted
// objective:  gamma^2 <= z <= 3 gamma^2 / 2 + (2 + 2 delta^2) gamma / sqrt(2 pi).
struct AsymptoticBracket {
  double lower = 0;
  double upper = 0;
  double gamma = 0;
  double delta_sq = 0;
};
AsymptoticBracket asymptotic_bracket(double gamma, double delta_sq);

// Gaussian-design model used by the Monte Carlo check of the bracket.
struct GaussianModel {
  int p = 1;
  Eigen::MatrixXd Sigma;
  Eigen::VectorXd beta_star;
  double gamma = 1.0;
  int n = 100000;
  std::uint64_t seed = 0;
};

struct MonteCarloResult {
  double estimate = 0;   // empirical S^0_n at the truth
  double std_error = 0;  // standard error of the estimate
};

// Draws X ~ N(0, Sigma), eps ~ N(0, gamma^2), Y = max{0, X.beta*} + eps and
// averages psi_0 at the true parameters. Requires n >= 1000.
MonteCarloResult monte_carlo_check(const GaussianModel& model);

}  // namespace relu
