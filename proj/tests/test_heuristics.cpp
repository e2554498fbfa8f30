#include <doctest.h>

#include "relu/approx.hpp"
#include "relu/heuristics.hpp"
#include "relu/statgen.hpp"

using namespace relu;

namespace {

Sample make(std::initializer_list<double> x, double y) {
  Sample s;
  s.x.resize(static_cast<Eigen::Index>(x.size()));
  int j = 0;
  for (double v : x) s.x[j++] = v;
  s.y = y;
  return s;
}

Dataset noisy_instance(std::uint64_t seed, int p = 2, int n = 14, double db = 10) {
  StatModelSpec spec;
  spec.p = p;
  spec.n = n;
  spec.sparsity = 0.7;
  spec.beta_star_mean = 0.5;
  spec.beta_star_var = 2.0;
  spec.db = db;
  spec.seed = seed;
  return generate_instance(spec).train;
}

}  // namespace

TEST_SUITE("heuristics") {
  TEST_CASE("iterative heuristic stops immediately at a fixed point") {
    const Dataset d = noisy_instance(3);
    // Reach a fixed point first, then restart from it.
    const SolveReport first = iterative_heuristic(d, Params::zero(d.p()), 50);
    REQUIRE(first.converged);
    const SolveReport again = iterative_heuristic(d, first.params, 50);
    CHECK(again.iterations == 1);
    CHECK(again.value == doctest::Approx(first.value).epsilon(1e-12));
  }

  TEST_CASE("iterative heuristic surrogate sequence is nonincreasing") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Dataset d = noisy_instance(seed);
      std::vector<double> trace;
      const SolveReport rep = iterative_heuristic(d, Params::zero(d.p()), 20, {}, &trace);
      REQUIRE(!trace.empty());
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);
      CHECK(rep.iterations <= 20);
      CHECK(std::isfinite(rep.value));
    }
  }

  TEST_CASE("iterative heuristic improves on the sorting start") {
    StatModelSpec spec;
    spec.p = 3;
    spec.n = 20;
    spec.sparsity = 0.6;
    spec.beta_star_mean = 0.5;
    spec.beta_star_var = 3.0;
    spec.realizable_rows = true;
    spec.seed = 9;
    const Instance inst = generate_instance(spec);
    const Params init = sorting_method(inst.train, 3).best.params;
    const double before = surrogate_objective(
        inst.train,
        ActiveSet::of(inst.train,
                      [&] {
                        std::vector<int> ids;
                        for (int i : inst.train.pos_idx())
                          if (inst.train.preactivation(i, init) > 0) ids.push_back(i);
                        return ids;
                      }()),
        init);
    const SolveReport rep = iterative_heuristic(inst.train, init, 20);
    CHECK(rep.value <= before + 1e-9);
  }

  TEST_CASE("iterative heuristic with no positive labels solves phi once") {
    const Dataset d = build_dataset({make({1}, -1), make({2}, 0)});
    const SolveReport rep = iterative_heuristic(d, Params::zero(1), 10);
    CHECK(rep.iterations == 1);
    CHECK(rep.converged);
  }

  TEST_CASE("gradient descent is stationary when all preactivations are clamped") {
    // Single sample, beta = 0: the (1 + sgn) factor kills the gradient, so
    // the method stops where it stands with objective 1.
    const Dataset d = build_dataset({make({1}, 1)});
    std::vector<double> trace;
    const SolveReport rep = gradient_descent(d, {}, Params::zero(1), &trace);
    CHECK(rep.iterations == 0);
    CHECK(rep.value == 1.0);
    CHECK(rep.params.beta[0] == 0.0);
  }

  TEST_CASE("gradient descent strictly decreases across accepted iterations") {
    // Nonzero start: at the exact origin every preactivation is clamped and
    // the (1 + sgn) factor makes the update stationary.
    for (std::uint64_t seed = 31; seed <= 40; ++seed) {
      const Dataset d = noisy_instance(seed, 3, 25);
      Params init{Eigen::VectorXd::Constant(d.p(), 0.5), 0.1};
      std::vector<double> trace;
      GdConfig cfg;
      cfg.eps = 1e-6;
      const SolveReport rep = gradient_descent(d, cfg, init, &trace);
      REQUIRE(trace.size() >= 2);  // the run actually moved
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
      CHECK(rep.value == trace.back());
      CHECK(std::isfinite(rep.value));
    }
  }

  TEST_CASE("gradient descent from zero never ends above the start") {
    StatModelSpec spec;
    spec.p = 2;
    spec.n = 16;
    spec.sparsity = 0.8;
    spec.beta_star_mean = 1.0;
    spec.beta_star_var = 1.0;
    spec.realizable_rows = true;
    spec.seed = 77;
    const Dataset d = generate_instance(spec).train;
    const double start = relu_objective(d, Params::zero(d.p()));
    const SolveReport rep = gradient_descent(d, {}, Params::zero(d.p()));
    CHECK(rep.value <= start);
  }

  TEST_CASE("sgd with batch = n reproduces gradient descent bit for bit") {
    for (std::uint64_t seed = 50; seed < 56; ++seed) {
      const Dataset d = noisy_instance(seed, 2, 18);
      GdConfig cfg;
      cfg.batch = d.n();
      const Params init{Eigen::VectorXd::Constant(d.p(), 0.4), 0.2};
      const SolveReport g = gradient_descent(d, cfg, init);
      const SolveReport s = sgd(d, cfg, init, seed);
      CHECK(g.iterations >= 1);
      CHECK(g.params.beta == s.params.beta);
      CHECK(g.params.beta0 == s.params.beta0);
      CHECK(g.value == s.value);
      CHECK(g.iterations == s.iterations);
    }
  }

  TEST_CASE("sgd is deterministic under a fixed seed") {
    const Dataset d = noisy_instance(60, 2, 30);
    GdConfig cfg;  // default batch: floor(0.1 n) = 3
    const Params init{Eigen::VectorXd::Constant(d.p(), 0.4), 0.2};
    const SolveReport a = sgd(d, cfg, init, 999);
    const SolveReport b = sgd(d, cfg, init, 999);
    CHECK(a.params.beta == b.params.beta);
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
  }

  TEST_CASE("sgd smoke run reports the full objective") {
    const Dataset d = noisy_instance(61, 3, 40);
    GdConfig cfg;
    const Params init{Eigen::VectorXd::Constant(d.p(), 0.4), 0.2};
    const SolveReport rep = sgd(d, cfg, init, 4);
    CHECK(rep.iterations <= cfg.max_iters);
    CHECK(std::isfinite(rep.value));
    CHECK(rep.value == doctest::Approx(relu_objective(d, rep.params)).epsilon(1e-12));
    CHECK_THROWS_AS(sgd(d, GdConfig{.batch = d.n() + 1}, Params::zero(d.p()), 1),
                    std::invalid_argument);
  }
}
