#include "relu/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "relu/rng.hpp"

namespace relu {
namespace {

constexpr int kMaxHalvings = 60;

std::vector<int> all_indices(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

ActiveSet positive_preactivation_set(const Dataset& d, const Params& theta) {
  std::vector<int> ids;
  for (int i : d.pos_idx()) {
    if (d.preactivation(i, theta) > 0.0) ids.push_back(i);
  }
  return ActiveSet::of(d, std::move(ids));
}

// (1/|idx|) sum over idx of (max{0,w} - y)(1 + sgn(w)) [x; 1], as a joint
// (beta, beta0) vector. Returns the squared norm.
double relu_gradient(const Dataset& d, const Params& theta, const std::vector<int>& idx,
                     Eigen::VectorXd& g) {
  const int p = d.p();
  g.setZero(p + 1);
  for (int i : idx) {
    const double w = d.preactivation(i, theta);
    if (w <= 0.0) continue;  // (1 + sgn(w)) vanishes
    const double f = 2.0 * (w - d.y(i));
    const double* row = d.x_row(i);
    for (int j = 0; j < p; ++j) g[j] += f * row[j];
    g[p] += f;
  }
  g /= static_cast<double>(idx.size());
  return g.squaredNorm();
}

Params step_from(const Params& theta, const Eigen::VectorXd& g, double eta) {
  Params out;
  out.beta = theta.beta - eta * g.head(theta.dim());
  out.beta0 = theta.beta0 - eta * g[theta.dim()];
  return out;
}

// Shared descent loop; `next_batch` supplies the index set for the coming
// iteration (GD always returns the full range, so GD and SGD with batch = n
// run the identical float path).
template <typename NextBatch>
SolveReport descend(const Dataset& d, const GdConfig& cfg, const Params& init, NextBatch&& next_batch,
                    const std::vector<int>& initial_batch, std::vector<double>* objective_trace) {
  Params theta = init;
  double loss_prev = std::numeric_limits<double>::infinity();
  double loss_cur = relu_objective_subset(d, theta, initial_batch);
  if (objective_trace) objective_trace->push_back(loss_cur);

  Eigen::VectorXd g;
  double eta = cfg.eta0;
  double grad_norm = 0.0;
  int t = 0;
  bool stalled = false;
  while (t < cfg.max_iters && loss_prev - loss_cur > cfg.eps) {
    const std::vector<int>& batch = next_batch();
    const double loss_at_theta = relu_objective_subset(d, theta, batch);
    const double gg = relu_gradient(d, theta, batch, g);
    grad_norm = std::sqrt(gg);
    if (gg == 0.0) {
      stalled = true;  // stationary for this update rule
      break;
    }
    Params trial = step_from(theta, g, eta);
    double loss_trial = relu_objective_subset(d, trial, batch);
    bool accepted = loss_trial < loss_at_theta;
    for (int h = 0; h < kMaxHalvings && !accepted; ++h) {
      eta *= cfg.alpha;
      trial = step_from(theta, g, eta);
      loss_trial = relu_objective_subset(d, trial, batch);
      accepted = loss_trial < loss_at_theta;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    theta = std::move(trial);
    loss_prev = loss_cur;
    loss_cur = loss_trial;
    if (objective_trace) objective_trace->push_back(loss_cur);
    eta = cfg.eta0 / (1.0 + cfg.gamma_step * static_cast<double>(t));
    ++t;
  }

  SolveReport rep;
  rep.params = std::move(theta);
  rep.value = relu_objective(d, rep.params);  // full objective, even for SGD
  rep.iterations = t;
  rep.converged = stalled || t < cfg.max_iters;
  rep.certificate = grad_norm;
  return rep;
}

}  // namespace

SolveReport iterative_heuristic(const Dataset& d, const Params& init, int max_outer,
                                const SolverConfig& cfg, std::vector<double>* surrogate_trace) {
  if (max_outer < 1) throw std::invalid_argument("iterative_heuristic: max_outer must be >= 1");
  if (init.dim() != d.p()) throw std::invalid_argument("iterative_heuristic: dimension mismatch");

  ActiveSet current = positive_preactivation_set(d, init);
  SolveReport rep;
  int outer = 0;
  bool fixed = false;
  while (outer < max_outer) {
    rep = minimize_surrogate(d, current, cfg);
    ++outer;
    if (surrogate_trace) surrogate_trace->push_back(rep.value);
    ActiveSet next = positive_preactivation_set(d, rep.params);
    if (next == current) {
      fixed = true;
      break;
    }
    current = std::move(next);
  }
  rep.iterations = outer;
  rep.converged = fixed;
  return rep;
}

SolveReport gradient_descent(const Dataset& d, const GdConfig& cfg, const Params& init,
                             std::vector<double>* objective_trace) {
  if (init.dim() != d.p()) throw std::invalid_argument("gradient_descent: dimension mismatch");
  const std::vector<int> full = all_indices(d.n());
  return descend(
      d, cfg, init, [&]() -> const std::vector<int>& { return full; }, full, objective_trace);
}

SolveReport sgd(const Dataset& d, const GdConfig& cfg, const Params& init, std::uint64_t seed) {
  if (init.dim() != d.p()) throw std::invalid_argument("sgd: dimension mismatch");
  int batch = cfg.batch > 0 ? cfg.batch : d.n() / 10;
  batch = std::max(batch, 1);
  if (batch > d.n()) throw std::invalid_argument("sgd: batch larger than the sample count");

  Rng rng(seed);
  std::vector<int> current = sample_sorted(d.n(), batch, rng);
  const std::vector<int> initial = current;
  return descend(
      d, cfg, init,
      [&]() -> const std::vector<int>& {
        current = sample_sorted(d.n(), batch, rng);
        return current;
      },
      initial, nullptr);
}

}  // namespace relu
