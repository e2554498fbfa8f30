#include <doctest.h>

#include "relu/hardness.hpp"
#include "relu/oracle.hpp"

using namespace relu;

TEST_SUITE("hardness") {
  TEST_CASE("pm1 extension") {
    CHECK(to_pm1({{1, 2, 3}}).a == std::vector<std::int64_t>{1, 2, 3, 6});
    CHECK(to_pm1({{}}).a == std::vector<std::int64_t>{0});
    CHECK(to_pm1({{5}}).a == std::vector<std::int64_t>{5, 5});
  }

  TEST_CASE("feasibility decision") {
    CHECK(check_feasibility_small({{2, 1, 1}}));   // x = (1, 1, -1)
    CHECK_FALSE(check_feasibility_small({{1, 1}}));  // parity
    CHECK(check_feasibility_small({{}}));          // empty target 0
    CHECK_FALSE(check_feasibility_small({{5, 5}}));
    CHECK_THROWS_AS(check_feasibility_small({std::vector<std::int64_t>(25, 1)}),
                    std::invalid_argument);
  }

  TEST_CASE("pm1 extension preserves feasibility") {
    // Subset-sum (1,2,3): S = {1,2} hits 3 = half of 6 -> feasible both ways.
    CHECK(check_feasibility_small(to_pm1({{1, 2, 3}})));
    // Subset-sum (5): infeasible, and so is the extension.
    CHECK_FALSE(check_feasibility_small(to_pm1({{5}})));
  }

  TEST_CASE("threshold formula") {
    CHECK(threshold(3) == 903.0);
    CHECK(threshold(1) == 101.0);
    CHECK(threshold(4) == 1604.0);
  }

  TEST_CASE("reduction structure") {
    const SubsetSumInstance inst{{2, 1, 1}};
    const Dataset d = reduce_to_relu(inst, 3);
    REQUIRE(d.n() == 9);  // 2p + 3
    REQUIRE(d.p() == 3);
    CHECK(d.x_row(0)[0] == 2.0);
    CHECK(d.y(0) == 2.0);  // half of 4
    CHECK(d.x_row(1)[0] == 4.0);
    CHECK(d.y(1) == 4.0);
    CHECK(d.x_row(2)[0] == 1.0);   // e_1
    CHECK(d.y(2) == 1.0);
    CHECK(d.x_row(3)[0] == -1.0);  // -e_1
    CHECK(d.y(8) == -30.0);        // zero row: intercept penalty label -10p
    CHECK(d.x_row(8)[0] == 0.0);

    CHECK_THROWS_AS(reduce_to_relu(inst, 4), std::invalid_argument);
  }

  TEST_CASE("feasible witness evaluates exactly to the threshold") {
    const SubsetSumInstance inst{{2, 1, 1}};
    const Dataset d = reduce_to_relu(inst, 3);
    Params witness{Eigen::VectorXd::Zero(3), 0.0};
    witness.beta << 1, 1, -1;
    CHECK(relu_objective(d, witness) == threshold(3));
  }

  TEST_CASE("all-zero weights are trivially feasible") {
    const SubsetSumInstance inst{{0, 0}};
    CHECK(check_feasibility_small(inst));
    const Dataset d = reduce_to_relu(inst, 2);
    Params pm{Eigen::VectorXd::Zero(2), 0.0};
    pm.beta << 1, -1;
    CHECK(relu_objective(d, pm) == threshold(2));
  }

  TEST_CASE("round trip against the optimization oracle on tiny instances") {
    SolverConfig cfg;
    const std::vector<std::vector<std::int64_t>> cases = {
        {2, 1, 1}, {1, 1}, {5, 5}, {1, 2, 3}, {0, 4}, {2, 2}, {3, 1},
        {2, 1, 1, 0},   // feasible at p = 4
        {3, 1, 1, 1},   // infeasible at p = 4 (all-odd weights, odd target)
    };
    for (const auto& a : cases) {
      const SubsetSumInstance inst{a};
      const int p = inst.p();
      const Dataset d = reduce_to_relu(inst, p);
      const ApproxResult opt = brute_force_opt(d, cfg);
      const bool feasible = check_feasibility_small(inst);
      if (feasible) {
        CHECK(std::abs(opt.best.value - threshold(p)) <= 1e-6);
      } else {
        CHECK(opt.best.value > threshold(p) + 1e-3);
      }
    }
  }
}
