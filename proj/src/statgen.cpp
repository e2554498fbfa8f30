#include "relu/statgen.hpp"

#include <cmath>
#include <stdexcept>

#include "relu/loss.hpp"
#include "relu/rng.hpp"

namespace relu {
namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : -1.0; }

// One ternary feature draw: +1 / -1 with probability P/2 each, else 0.
double ternary(Rng& rng, double sparsity) {
  const double u = rng.uniform();
  if (u < 0.5 * sparsity) return 1.0;
  if (u < sparsity) return -1.0;
  return 0.0;
}

Dataset assemble(const std::vector<double>& xs, const std::vector<double>& ys, int p) {
  std::vector<Sample> rows(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    rows[i].x = Eigen::Map<const Eigen::VectorXd>(xs.data() + i * static_cast<std::size_t>(p), p);
    rows[i].y = ys[i];
  }
  return build_dataset(rows);
}

}  // namespace

double db_to_rho(double db) {
  if (std::isinf(db) && db > 0.0) return 0.0;
  return std::pow(10.0, -db / 20.0);
}

Instance generate_instance(const StatModelSpec& spec) {
  if (spec.p < 1 || spec.n < 1) throw std::invalid_argument("generate_instance: need p >= 1, n >= 1");
  if (spec.sparsity < 0.0 || spec.sparsity > 1.0)
    throw std::invalid_argument("generate_instance: sparsity outside [0, 1]");
  if (spec.realizable_rows && spec.n < spec.p)
    throw std::invalid_argument("generate_instance: realizable rows need n >= p");

  Rng rng(spec.seed);
  const int p = spec.p, n = spec.n;

  Eigen::VectorXd beta_star(p);
  const double beta_std = std::sqrt(spec.beta_star_var);
  for (int j = 0; j < p; ++j) beta_star[j] = rng.normal(spec.beta_star_mean, beta_std);

  std::vector<double> xs(static_cast<std::size_t>(n) * p, 0.0);
  int first_random_row = 0;
  if (spec.realizable_rows) {
    for (int i = 0; i < p; ++i) xs[static_cast<std::size_t>(i) * p + i] = sgn(beta_star[i]);
    first_random_row = p;
  }
  for (int i = first_random_row; i < n; ++i) {
    for (int j = 0; j < p; ++j) xs[static_cast<std::size_t>(i) * p + j] = ternary(rng, spec.sparsity);
  }

  // Signal scale from the training design: sigma^2 = (1/n) sum (Z_i - Zbar)^2.
  std::vector<double> z(static_cast<std::size_t>(n));
  CompensatedSum zsum;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < p; ++j) acc += xs[static_cast<std::size_t>(i) * p + j] * beta_star[j];
    z[static_cast<std::size_t>(i)] = acc;
    zsum.add(acc);
  }
  const double zbar = zsum.value() / n;
  CompensatedSum var;
  for (double zi : z) var.add((zi - zbar) * (zi - zbar));
  const double sigma = std::sqrt(var.value() / n);

  const double rho = db_to_rho(spec.db);
  if (rho > 0.0 && sigma == 0.0)
    throw std::invalid_argument("generate_instance: constant signal (sigma = 0) with rho > 0");
  const double noise_std = rho * sigma;

  std::vector<double> ys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    ys[static_cast<std::size_t>(i)] = std::max(0.0, z[static_cast<std::size_t>(i)]) + noise_std * rng.normal();

  // Test set: fresh random design and noise, same beta* and sigma.
  std::vector<double> xs_test(static_cast<std::size_t>(n) * p);
  for (std::size_t e = 0; e < xs_test.size(); ++e) xs_test[e] = ternary(rng, spec.sparsity);
  std::vector<double> ys_test(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < p; ++j) acc += xs_test[static_cast<std::size_t>(i) * p + j] * beta_star[j];
    ys_test[static_cast<std::size_t>(i)] = std::max(0.0, acc) + noise_std * rng.normal();
  }

  Instance inst;
  inst.train = assemble(xs, ys, p);
  inst.test = assemble(xs_test, ys_test, p);
  inst.truth = {beta_star, 0.0};
  inst.sigma = sigma;
  inst.rho = rho;
  // Design covariance of the ternary distribution is sparsity * I.
  inst.delta_sq = spec.sparsity * beta_star.squaredNorm();
  return inst;
}

double delta_squared(const Eigen::VectorXd& beta_star, const Eigen::MatrixXd& Sigma) {
  if (Sigma.rows() != Sigma.cols() || Sigma.rows() != beta_star.size())
    throw std::invalid_argument("delta_squared: dimension mismatch");
  if (!Sigma.isApprox(Sigma.transpose(), 1e-12))
    throw std::invalid_argument("delta_squared: Sigma is not symmetric");
  return beta_star.dot(Sigma * beta_star);
}

AsymptoticBracket asymptotic_bracket(double gamma, double delta_sq) {
  if (gamma < 0.0 || delta_sq < 0.0)
    throw std::invalid_argument("asymptotic_bracket: gamma and delta_sq must be nonnegative");
  AsymptoticBracket b;
  b.gamma = gamma;
  b.delta_sq = delta_sq;
  b.lower = gamma * gamma;
  b.upper = 1.5 * gamma * gamma + (2.0 + 2.0 * delta_sq) / std::sqrt(2.0 * M_PI) * gamma;
  return b;
}

MonteCarloResult monte_carlo_check(const GaussianModel& model) {
  if (model.n < 1000) throw std::invalid_argument("monte_carlo_check: need n >= 1000");
  if (model.Sigma.rows() != model.p || model.Sigma.cols() != model.p ||
      model.beta_star.size() != model.p)
    throw std::invalid_argument("monte_carlo_check: dimension mismatch");

  // PSD square root of Sigma for the multivariate normal draws.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.Sigma);
  Eigen::VectorXd lam = eig.eigenvalues();
  for (int j = 0; j < model.p; ++j) lam[j] = std::sqrt(std::max(lam[j], 0.0));
  const Eigen::MatrixXd sqrt_sigma = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();

  Rng rng(model.seed);
  Eigen::VectorXd zvec(model.p), x(model.p);
  CompensatedSum mean_acc, sq_acc;
  for (int i = 0; i < model.n; ++i) {
    for (int j = 0; j < model.p; ++j) zvec[j] = rng.normal();
    x.noalias() = sqrt_sigma * zvec;
    const double u = x.dot(model.beta_star);
    const double eps = model.gamma * rng.normal();
    const double y = std::max(0.0, u) + eps;
    const double v = psi_y(u, y, 0.0);
    mean_acc.add(v);
    sq_acc.add(v * v);
  }
  const double n = static_cast<double>(model.n);
  MonteCarloResult res;
  res.estimate = mean_acc.value() / n;
  const double variance = std::max(0.0, sq_acc.value() / n - res.estimate * res.estimate);
  res.std_error = std::sqrt(variance / n);
  return res;
}

}  // namespace relu
