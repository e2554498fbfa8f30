#include "relu/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relu {
namespace {

constexpr double kArmijoConst = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr double kRidge = 1e-12;
constexpr double kCondLimit = 1e12;

enum class Role : unsigned char { active, inactive, negative };

// Flattened view of one surrogate instance: theta = (beta..., beta0) as a
// dense vector of size p + 1.
struct Problem {
  const Dataset* d;
  std::vector<Role> roles;  // per sample
  int p;

  int dim() const { return p + 1; }

  void preactivations(const Eigen::VectorXd& z, std::vector<double>& w) const {
    w.resize(static_cast<std::size_t>(d->n()));
    for (int i = 0; i < d->n(); ++i) {
      const double* row = d->x_row(i);
      double acc = 0.0;
      for (int j = 0; j < p; ++j) acc += row[j] * z[j];
      w[static_cast<std::size_t>(i)] = acc + z[p];
    }
  }

  double value_from_w(const std::vector<double>& w) const {
    CompensatedSum acc;
    for (int i = 0; i < d->n(); ++i) {
      const double wi = w[static_cast<std::size_t>(i)];
      const double yi = d->y(i);
      switch (roles[static_cast<std::size_t>(i)]) {
        case Role::active: {
          const double r = wi - yi;
          acc.add(r * r);
          break;
        }
        case Role::inactive:
          acc.add(sigma(wi, yi));
          break;
        case Role::negative: {
          const double r = std::max(0.0, wi) - yi;
          acc.add(r * r);
          break;
        }
      }
    }
    return acc.value();
  }

  // Left-piece subgradient; returns squared norm.
  double subgradient(const std::vector<double>& w, Eigen::VectorXd& g) const {
    g.setZero(dim());
    for (int i = 0; i < d->n(); ++i) {
      const double wi = w[static_cast<std::size_t>(i)];
      const double yi = d->y(i);
      double f = 0.0;
      switch (roles[static_cast<std::size_t>(i)]) {
        case Role::active:
          f = 2.0 * (wi - yi);
          break;
        case Role::inactive:
          f = sigma_dx(wi, yi);
          break;
        case Role::negative:
          f = wi > 0.0 ? 2.0 * (wi - yi) : 0.0;
          break;
      }
      if (f == 0.0) continue;
      const double* row = d->x_row(i);
      for (int j = 0; j < p; ++j) g[j] += f * row[j];
      g[p] += f;
    }
    return g.squaredNorm();
  }

  // True iff sample i sits on a quadratic piece at preactivation wi.
  bool on_quadratic_piece(int i, double wi) const {
    switch (roles[static_cast<std::size_t>(i)]) {
      case Role::active:
        return true;
      case Role::inactive:
        return wi > 2.0 * d->y(i);
      case Role::negative:
        return wi > 0.0;
    }
    return false;
  }

  // Minimum-norm element of the subdifferential, treating every term whose
  // preactivation lies within a small band of its kink as free to take any
  // convex combination of its two one-sided slopes. This is the working
  // optimality measure at kink points, where the fixed-convention subgradient
  // stays bounded away from zero even at the optimum. Returns the norm and
  // fills g with the minimizing element.
  double min_norm_subgradient(const std::vector<double>& w, Eigen::VectorXd& g) const {
    std::vector<int> kink_rows;
    std::vector<double> kink_slope;  // right-piece slope at the kink
    g.setZero(dim());
    for (int i = 0; i < d->n(); ++i) {
      const double wi = w[static_cast<std::size_t>(i)];
      const double yi = d->y(i);
      const Role role = roles[static_cast<std::size_t>(i)];
      const double band = 1e-7 * (1.0 + std::abs(yi));
      double f = 0.0;
      if (role == Role::active) {
        f = 2.0 * (wi - yi);
      } else if (role == Role::inactive) {
        if (std::abs(wi - 2.0 * yi) <= band) {
          kink_rows.push_back(i);
          kink_slope.push_back(2.0 * yi);  // slope of the quadratic side
          continue;
        }
        f = sigma_dx(wi, yi);
      } else {
        if (std::abs(wi) <= band) {
          kink_rows.push_back(i);
          kink_slope.push_back(-2.0 * yi);
          continue;
        }
        f = wi > 0.0 ? 2.0 * (wi - yi) : 0.0;
      }
      if (f == 0.0) continue;
      const double* row = d->x_row(i);
      for (int j = 0; j < p; ++j) g[j] += f * row[j];
      g[p] += f;
    }
    if (kink_rows.empty()) return g.norm();

    // min over lambda in [0,1]^K of || g + sum_k lambda_k s_k xt_k ||^2 by
    // cyclic coordinate descent (K is tiny in practice).
    const int K = static_cast<int>(kink_rows.size());
    Eigen::MatrixXd cols(dim(), K);
    for (int k = 0; k < K; ++k) {
      const double* row = d->x_row(kink_rows[static_cast<std::size_t>(k)]);
      for (int j = 0; j < p; ++j) cols(j, k) = kink_slope[static_cast<std::size_t>(k)] * row[j];
      cols(p, k) = kink_slope[static_cast<std::size_t>(k)];
    }
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd current = g;
    for (int sweep = 0; sweep < 100; ++sweep) {
      double largest_move = 0.0;
      for (int k = 0; k < K; ++k) {
        const double denom = cols.col(k).squaredNorm();
        if (denom == 0.0) continue;
        const double resid = cols.col(k).dot(current) - denom * lambda[k];
        const double next = std::clamp(-resid / denom, 0.0, 1.0);
        const double move = next - lambda[k];
        if (move != 0.0) {
          current += move * cols.col(k);
          lambda[k] = next;
          largest_move = std::max(largest_move, std::abs(move));
        }
      }
      if (largest_move < 1e-14) break;
    }
    g = current;
    return g.norm();
  }
};

// Re-solves the frozen-piece model on the subspace that holds every
// near-kink row exactly on its kink (equality-constrained least squares via
// the KKT system). Value-driven searches localize a kink only to about
// sqrt(eps); this places the iterate on it exactly, so the subdifferential
// can close over zero and certify the optimum. Returns false when there is
// nothing to snap.
bool snap_to_kinks(const Problem& prob, const std::vector<double>& w, Eigen::VectorXd& z_out) {
  const int dim = prob.dim();
  std::vector<int> pinned;
  std::vector<double> targets;
  for (int i = 0; i < prob.d->n(); ++i) {
    const double wi = w[static_cast<std::size_t>(i)];
    const double yi = prob.d->y(i);
    const Role role = prob.roles[static_cast<std::size_t>(i)];
    const double band = 1e-6 * (1.0 + std::abs(yi));
    if (role == Role::inactive && std::abs(wi - 2.0 * yi) <= band) {
      pinned.push_back(i);
      targets.push_back(2.0 * yi);
    } else if (role == Role::negative && std::abs(wi) <= band) {
      pinned.push_back(i);
      targets.push_back(0.0);
    }
  }
  if (pinned.empty()) return false;

  const int K = static_cast<int>(pinned.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim + K, dim + K);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + K);
  Eigen::VectorXd xi(dim);
  std::size_t next_pin = 0;
  for (int i = 0; i < prob.d->n(); ++i) {
    const bool is_pinned = next_pin < pinned.size() && pinned[next_pin] == i;
    const double* row = prob.d->x_row(i);
    for (int j = 0; j < prob.p; ++j) xi[j] = row[j];
    xi[prob.p] = 1.0;
    if (is_pinned) {
      kkt.block(dim + static_cast<int>(next_pin), 0, 1, dim) = xi.transpose();
      kkt.block(0, dim + static_cast<int>(next_pin), dim, 1) = xi;
      rhs[dim + static_cast<int>(next_pin)] = targets[next_pin];
      ++next_pin;
      continue;
    }
    if (!prob.on_quadratic_piece(i, w[static_cast<std::size_t>(i)])) continue;
    kkt.topLeftCorner(dim, dim).selfadjointView<Eigen::Lower>().rankUpdate(xi);
    rhs.head(dim) += prob.d->y(i) * xi;
  }
  kkt.topLeftCorner(dim, dim) =
      Eigen::MatrixXd(kkt.topLeftCorner(dim, dim).selfadjointView<Eigen::Lower>());

  const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  z_out = sol.head(dim);
  return z_out.allFinite();
}

// Solves the fixed-piece least-squares problem min sum (x_i.z - y_i)^2 over
// rows currently on a quadratic piece, via the eigendecomposition of the
// normal matrix: truncated pseudo-inverse gives the minimum-norm solution
// when singular, and a 1e-12 ridge is applied when ill-conditioned.
Eigen::VectorXd solve_fixed_pieces(const Problem& prob, const std::vector<double>& w) {
  const int dim = prob.dim();
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd xi(dim);
  for (int i = 0; i < prob.d->n(); ++i) {
    if (!prob.on_quadratic_piece(i, w[static_cast<std::size_t>(i)])) continue;
    const double* row = prob.d->x_row(i);
    for (int j = 0; j < prob.p; ++j) xi[j] = row[j];
    xi[prob.p] = 1.0;
    normal.selfadjointView<Eigen::Lower>().rankUpdate(xi);
    rhs += prob.d->y(i) * xi;
  }
  normal = normal.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lam_max = lam[dim - 1];
  if (lam_max <= 0.0) return Eigen::VectorXd::Zero(dim);  // no quadratic rows

  const double rank_tol = lam_max * dim * 1e-15;
  double lam_min_pos = lam_max;
  for (int j = 0; j < dim; ++j) {
    if (lam[j] > rank_tol) lam_min_pos = std::min(lam_min_pos, lam[j]);
  }
  const double ridge = (lam_max / lam_min_pos > kCondLimit) ? kRidge : 0.0;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    if (lam[j] <= rank_tol) continue;
    const Eigen::VectorXd v = eig.eigenvectors().col(j);
    z += (v.dot(rhs) / (lam[j] + ridge)) * v;
  }
  return z;
}

}  // namespace

SolveReport minimize_surrogate(const Dataset& d, const ActiveSet& I, const SolverConfig& cfg) {
  Problem prob;
  prob.d = &d;
  prob.p = d.p();
  prob.roles.assign(static_cast<std::size_t>(d.n()), Role::negative);
  for (int i : d.pos_idx())
    prob.roles[static_cast<std::size_t>(i)] = I.contains(i) ? Role::active : Role::inactive;

  const int dim = prob.dim();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  std::vector<double> w, w_trial;
  prob.preactivations(z, w);
  double f_cur = prob.value_from_w(w);
  if (!std::isfinite(f_cur)) throw std::runtime_error("minimize_surrogate: non-finite objective");
  if (cfg.trace) cfg.trace->push_back(f_cur);

  Eigen::VectorXd g(dim);
  std::vector<double> dw(static_cast<std::size_t>(d.n()));
  int iters = 0;
  int small_steps = 0;
  double grad_norm = std::sqrt(prob.subgradient(w, g));

  // Armijo backtracking along dir from the current point; updates z, w and
  // f_cur on success.
  const auto try_descend = [&](const Eigen::VectorXd& direction, double slope_sq) {
    for (int i = 0; i < d.n(); ++i) {
      const double* row = d.x_row(i);
      double acc = 0.0;
      for (int j = 0; j < prob.p; ++j) acc += row[j] * direction[j];
      dw[static_cast<std::size_t>(i)] = acc + direction[prob.p];
    }
    double step = 1.0;
    w_trial.resize(w.size());
    for (int h = 0; h <= kMaxHalvings; ++h) {
      const double required = kArmijoConst * step * slope_sq;
      if (required < 1e-18 * (1.0 + std::abs(f_cur))) break;  // below ulp scale
      for (std::size_t i = 0; i < w.size(); ++i) w_trial[i] = w[i] + step * dw[i];
      const double f_trial = prob.value_from_w(w_trial);
      if (!std::isfinite(f_trial)) throw std::runtime_error("minimize_surrogate: non-finite objective");
      if (f_trial < f_cur && f_trial <= f_cur - required) {
        z += step * direction;
        prob.preactivations(z, w);  // full recompute avoids incremental drift
        f_cur = prob.value_from_w(w);
        return true;
      }
      step *= 0.5;
    }
    return false;
  };

  // Phase 1: subgradient descent with Armijo backtracking from theta = 0.
  // When the fixed-convention subgradient stalls (typical at kinks, including
  // the all-kink start), fall back to the minimum-norm subdifferential
  // element, which is a descent direction whenever the point is not optimal.
  const auto run_first_order = [&]() {
    small_steps = 0;
    grad_norm = std::sqrt(prob.subgradient(w, g));
    while (iters < cfg.max_iters) {
      if (grad_norm <= cfg.grad_tol) break;
      const double f_before = f_cur;
      bool moved = try_descend(-g, g.squaredNorm());
      if (!moved) {
        const double min_norm = prob.min_norm_subgradient(w, g);
        if (min_norm <= cfg.grad_tol) break;
        moved = try_descend(-g, g.squaredNorm());
        if (!moved) break;  // genuinely stuck; polish takes over
      }
      ++iters;
      if (cfg.trace) cfg.trace->push_back(f_cur);
      grad_norm = std::sqrt(prob.subgradient(w, g));
      if (f_before - f_cur <= cfg.rel_tol * (1.0 + std::abs(f_cur))) {
        if (++small_steps >= 2) break;
      } else {
        small_steps = 0;
      }
    }
  };

  // Phase 2: piece-polish. Freeze quadratic pieces at the current point and
  // solve the fixed-piece least-squares problem exactly. The solution is
  // taken outright when it does not increase the surrogate; otherwise the
  // exact minimum along the segment towards it is taken instead (the
  // restriction of a convex function to a segment, located by golden-section
  // search). Stops at a fixed point or after polish_rounds.
  bool fixed_point = false;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto run_polish = [&]() {
    for (int round = 0; round < cfg.polish_rounds; ++round) {
      const Eigen::VectorXd z_new = solve_fixed_pieces(prob, w);
      prob.preactivations(z_new, w_trial);
      const double f_new = prob.value_from_w(w_trial);
      if (!std::isfinite(f_new)) throw std::runtime_error("minimize_surrogate: non-finite objective");

      const double move_full = (z_new - z).lpNorm<Eigen::Infinity>();
      if (f_new <= f_cur) {
        ++iters;
        z = z_new;
        w.swap(w_trial);
        f_cur = f_new;
        if (cfg.trace) cfg.trace->push_back(f_cur);
        if (move_full <= 1e-13 * (1.0 + z.lpNorm<Eigen::Infinity>())) {
          fixed_point = true;
          break;
        }
        continue;
      }

      // Full jump overshoots its piece region; minimize on the segment.
      for (std::size_t i = 0; i < w.size(); ++i) dw[i] = w_trial[i] - w[i];
      const auto value_at = [&](double t) {
        std::vector<double>& buf = w_trial;
        for (std::size_t i = 0; i < w.size(); ++i) buf[i] = w[i] + t * dw[i];
        return prob.value_from_w(buf);
      };
      double lo = 0.0, hi = 1.0;
      double t1 = hi - inv_phi * (hi - lo), t2 = lo + inv_phi * (hi - lo);
      double f1 = value_at(t1), f2 = value_at(t2);
      while (hi - lo > 1e-13) {
        if (f1 <= f2) {
          hi = t2;
          t2 = t1;
          f2 = f1;
          t1 = hi - inv_phi * (hi - lo);
          f1 = value_at(t1);
        } else {
          lo = t1;
          t1 = t2;
          f1 = f2;
          t2 = lo + inv_phi * (hi - lo);
          f2 = value_at(t2);
        }
      }
      const double t_best = 0.5 * (lo + hi);
      const double f_best = value_at(t_best);
      if (!(f_best < f_cur)) break;  // no progress along the model direction
      ++iters;
      z += t_best * (z_new - z);
      prob.preactivations(z, w);
      f_cur = prob.value_from_w(w);
      if (cfg.trace) cfg.trace->push_back(f_cur);
    }
  };

  run_first_order();
  // Kink optima defeat a single pass (the frozen-piece model and the
  // fixed-convention subgradient each stall there), so the two phases
  // alternate until neither makes progress, a fixed point certifies the
  // optimum, or the budgets run out.
  for (int cycle = 0; cycle < 40 && !fixed_point && iters < cfg.max_iters; ++cycle) {
    const double f_cycle = f_cur;
    if (cycle > 0) run_first_order();
    run_polish();
    if (f_cycle - f_cur <= 1e-15 * (1.0 + std::abs(f_cur))) break;
  }

  if (!fixed_point) {
    Eigen::VectorXd z_snap;
    if (snap_to_kinks(prob, w, z_snap)) {
      prob.preactivations(z_snap, w_trial);
      const double f_snap = prob.value_from_w(w_trial);
      if (std::isfinite(f_snap) && f_snap <= f_cur) {
        z = z_snap;
        w.swap(w_trial);
        f_cur = f_snap;
        if (cfg.trace) cfg.trace->push_back(f_cur);
      }
    }
  }

  SolveReport rep;
  rep.params.beta = z.head(prob.p);
  rep.params.beta0 = z[prob.p];
  rep.value = surrogate_objective(d, I, rep.params);
  rep.iterations = iters;
  if (fixed_point) {
    rep.certificate = 0.0;
    rep.converged = true;
  } else {
    rep.certificate = prob.min_norm_subgradient(w, g);
    rep.converged = rep.certificate <= cfg.grad_tol;
  }
  return rep;
}

}  // namespace relu
