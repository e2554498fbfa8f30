#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "relu/approx.hpp"
#include "relu/experiments.hpp"

using namespace relu;

namespace {

StatModelSpec small_setting(std::uint64_t seed) {
  StatModelSpec spec;
  spec.p = 3;
  spec.n = 24;
  spec.sparsity = 0.5;
  spec.beta_star_mean = 0.5;
  spec.beta_star_var = 4.0;
  spec.db = 20;
  spec.realizable_rows = true;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("metric definitions") {
    const Instance inst = generate_instance(small_setting(1));
    CHECK(prediction_error(inst.train, inst.truth, inst.truth) == 0.0);
    CHECK(recovery_error(inst.truth, inst.truth) == 0.0);

    Params off = inst.truth;
    off.beta[0] += 3.0;
    off.beta[1] += 4.0;
    CHECK(recovery_error(off, inst.truth) == doctest::Approx(5.0));

    // GE is the relu objective on the test set, by definition.
    CHECK(generalization_error(inst.test, off) == relu_objective(inst.test, off));
  }

  TEST_CASE("prediction error single point") {
    Sample s;
    s.x.resize(1);
    s.x << 1.0;
    s.y = 1.0;
    const Dataset d = build_dataset({s});
    Params est{Eigen::VectorXd::Constant(1, 2.0), 0.0};
    Params truth{Eigen::VectorXd::Constant(1, 1.0), 0.0};
    CHECK(prediction_error(d, est, truth) == 1.0);
  }

  TEST_CASE("method name round trip") {
    for (Method m : all_methods()) CHECK(method_from_name(method_name(m)) == m);
    CHECK_THROWS_AS(method_from_name("nope"), std::invalid_argument);
  }

  TEST_CASE("benchmark cardinality, determinism and obj cross-check") {
    BenchConfig cfg;
    cfg.settings = {small_setting(100)};
    cfg.repetitions = 2;
    const std::vector<MetricRow> rows = run_benchmark(cfg);
    CHECK(rows.size() == 2 * all_methods().size());

    const std::vector<MetricRow> again = run_benchmark(cfg);
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].obj == again[i].obj);
      CHECK(rows[i].pe == again[i].pe);
      CHECK(rows[i].seed == again[i].seed);
      CHECK(rows[i].method == again[i].method);
    }

    // Recompute the sorting row's Obj independently of the harness.
    const Instance inst = generate_instance(small_setting(100));
    const Params refit = sorting_method(inst.train, cfg.sorting_splits, cfg.solver).best.params;
    const double obj_direct = relu_objective(inst.train, refit);
    bool found = false;
    for (const MetricRow& r : rows) {
      CHECK(r.obj >= 0.0);
      CHECK(r.ge >= 0.0);
      CHECK(r.pe >= 0.0);
      CHECK(r.re >= 0.0);
      if (r.seed == 100 && r.method == Method::sorting) {
        found = true;
        CHECK(r.obj == doctest::Approx(obj_direct).epsilon(1e-9));
      }
    }
    CHECK(found);
  }

  TEST_CASE("serial and parallel benchmark agree") {
    BenchConfig cfg;
    cfg.settings = {small_setting(7)};
    cfg.repetitions = 2;
    cfg.exec = Execution::serial;
    const auto serial_rows = run_benchmark(cfg);
    cfg.exec = Execution::openmp;
    const auto parallel_rows = run_benchmark(cfg);
    REQUIRE(serial_rows.size() == parallel_rows.size());
    for (std::size_t i = 0; i < serial_rows.size(); ++i) {
      CHECK(serial_rows[i].obj == parallel_rows[i].obj);
      CHECK(serial_rows[i].re == parallel_rows[i].re);
    }
  }

  TEST_CASE("noiseless settings give zero PE and RE for sorting-based methods") {
    StatModelSpec setting = small_setting(300);
    setting.db = std::numeric_limits<double>::infinity();
    BenchConfig cfg;
    cfg.settings = {setting};
    cfg.repetitions = 3;
    cfg.methods = {Method::sorting, Method::sorting_iter, Method::sorting_gd};
    for (const MetricRow& r : run_benchmark(cfg)) {
      CAPTURE(method_name(r.method));
      CHECK(r.pe <= 1e-6);
      CHECK(r.re <= 1e-6);
    }
  }

  TEST_CASE("aggregates and win rates") {
    BenchConfig cfg;
    cfg.settings = {small_setting(40)};
    cfg.repetitions = 4;
    const auto rows = run_benchmark(cfg);
    const auto aggs = aggregate_rows(rows);
    CHECK(aggs.size() == all_methods().size());
    for (const AggregateRow& a : aggs) {
      CHECK(a.count == 4);
      CHECK(a.mean_obj >= 0.0);
      CHECK(a.std_obj >= 0.0);
    }
    const double wr = objective_win_rate(rows, Method::sorting_iter, Method::sorting);
    CHECK(wr >= 0.0);
    CHECK(wr <= 1.0);
  }

  TEST_CASE("csv emission") {
    namespace fs = std::filesystem;
    BenchConfig cfg;
    cfg.settings = {small_setting(8)};
    const auto rows = run_benchmark(cfg);
    const fs::path rows_path = fs::temp_directory_path() / "relufit_rows.csv";
    const fs::path agg_path = fs::temp_directory_path() / "relufit_agg.csv";
    write_rows_csv(rows_path.string(), rows);
    write_aggregate_csv(agg_path.string(), aggregate_rows(rows));

    // Re-emission is byte-identical apart from the wall-clock column.
    const fs::path rows_path2 = fs::temp_directory_path() / "relufit_rows2.csv";
    write_rows_csv(rows_path2.string(), run_benchmark(cfg));
    {
      const auto strip_runtime = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::string out, line;
        while (std::getline(f, line)) out += line.substr(0, line.rfind(',')) + "\n";
        return out;
      };
      const std::string c1 = strip_runtime(rows_path);
      const std::string c2 = strip_runtime(rows_path2);
      CHECK(c1 == c2);
      CHECK(!c1.empty());
    }
    fs::remove(rows_path2);

    std::ifstream in(rows_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "p,n,sparsity,db,rho,seed,method,pe,obj,re,ge,runtime_ms");
    int lines = 0;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) ++lines;
    }
    CHECK(lines == static_cast<int>(rows.size()));
    fs::remove(rows_path);
    fs::remove(agg_path);
  }
}
