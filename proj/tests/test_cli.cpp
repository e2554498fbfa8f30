#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "relu/csv.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "relufit_cli_out.txt";
  const std::string cmd = std::string(RELUFIT_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  res.stdout_text.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  fs::remove(out);
  return res;
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bounds prints the closed-form bracket") {
    const RunResult res = run_cli("bounds --gamma 1 --delta-sq 1");
    REQUIRE(res.exit_code == 0);
    const json out = json::parse(res.stdout_text);
    CHECK(out.at("schema") == 1);
    CHECK(out.at("lower").get<double>() == doctest::Approx(1.0));
    CHECK(out.at("upper").get<double>() == doctest::Approx(3.09577).epsilon(1e-5));
  }

  TEST_CASE("unknown flags exit 2") {
    CHECK(run_cli("bounds --gamma 1 --delta-sq 1 --nonsense").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
  }

  TEST_CASE("generate then solve and oracle round trip") {
    const fs::path train = tmp("cli_train.csv"), test = tmp("cli_test.csv"),
                   truth = tmp("cli_truth.json");
    const std::string gen_args = "generate --p 2 --n 12 --sparsity 0.7 --db inf "
                                 "--beta-mean 0.5 --beta-var 2 --realizable-rows --seed 5 -o " +
                                 train.string() + "," + test.string() + "," + truth.string();
    REQUIRE(run_cli(gen_args).exit_code == 0);

    // Deterministic regeneration is byte-identical.
    const fs::path train2 = tmp("cli_train2.csv");
    REQUIRE(run_cli("generate --p 2 --n 12 --sparsity 0.7 --db inf --beta-mean 0.5 "
                    "--beta-var 2 --realizable-rows --seed 5 -o " +
                    train2.string() + "," + tmp("cli_test2.csv").string() + "," +
                    tmp("cli_truth2.json").string())
                .exit_code == 0);
    std::ifstream fa(train, std::ios::binary), fb(train2, std::ios::binary);
    const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ca == cb);

    json truth_json;
    std::ifstream(truth) >> truth_json;
    CHECK(truth_json.at("schema") == 1);
    CHECK(truth_json.at("rho").get<double>() == 0.0);
    CHECK(truth_json.at("beta_star").size() == 2);

    // Realizable file: the approximation reaches (near) zero objective.
    const RunResult solved = run_cli("solve --method approx --k 1 --input " + train.string());
    REQUIRE(solved.exit_code == 0);
    const json sj = json::parse(solved.stdout_text);
    CHECK(sj.at("obj").get<double>() <= 1e-9);
    CHECK(sj.at("schema") == 1);

    const RunResult oracled = run_cli("oracle --input " + train.string());
    REQUIRE(oracled.exit_code == 0);
    const json oj = json::parse(oracled.stdout_text);
    CHECK(oj.at("z_opt").get<double>() <= 1e-9);
    CHECK(oj.contains("active_set"));

    for (const fs::path& p :
         {train, test, truth, train2, tmp("cli_test2.csv"), tmp("cli_truth2.json")})
      fs::remove(p);
  }

  TEST_CASE("solve methods run on a noisy file") {
    const fs::path train = tmp("cli_noisy.csv");
    REQUIRE(run_cli("generate --p 2 --n 14 --sparsity 0.7 --db 10 --beta-mean 0.5 "
                    "--beta-var 2 --seed 9 -o " +
                    train.string() + "," + tmp("cli_noisy_test.csv").string() + "," +
                    tmp("cli_noisy_truth.json").string())
                .exit_code == 0);
    for (const std::string method : {"sorting", "iter", "gd", "sorting+iter", "sorting+gd"}) {
      const RunResult res = run_cli("solve --method " + method + " --input " + train.string());
      REQUIRE(res.exit_code == 0);
      const json j = json::parse(res.stdout_text);
      CHECK(j.at("obj").get<double>() >= 0.0);
      CHECK(j.at("method") == method);
    }
    // sgd without a seed is rejected; with a seed it runs.
    CHECK(run_cli("solve --method sgd --input " + train.string()).exit_code == 2);
    CHECK(run_cli("solve --method sgd --seed 3 --input " + train.string()).exit_code == 0);

    // --strict surfaces budget-capped non-convergence as exit 4.
    CHECK(run_cli("solve --method sorting+gd --splits 1 --T 1 --strict --input " +
                  train.string()).exit_code == 4);

    fs::remove(train);
    fs::remove(tmp("cli_noisy_test.csv"));
    fs::remove(tmp("cli_noisy_truth.json"));
  }

  TEST_CASE("oracle refuses oversized instances with exit 3") {
    const fs::path big = tmp("cli_big.csv");
    {
      std::ofstream out(big, std::ios::binary);
      out << "x0,y\n";
      for (int i = 0; i < 25; ++i) out << (i + 1) << ",1\n";
    }
    CHECK(run_cli("oracle --input " + big.string()).exit_code == 3);
    fs::remove(big);
  }

  TEST_CASE("reduce emits the instance and decides feasibility") {
    const fs::path inst = tmp("cli_reduce.csv");
    const RunResult res = run_cli("reduce --a 2,1,1 --decide -o " + inst.string());
    REQUIRE(res.exit_code == 0);
    CHECK(res.stdout_text.find("FEASIBLE") != std::string::npos);
    CHECK(res.stdout_text.find("903") != std::string::npos);

    const relu::Dataset d = relu::load_dataset_csv(inst.string());
    CHECK(d.n() == 9);
    CHECK(d.p() == 3);

    const RunResult infeasible = run_cli("reduce --a 1,1 --decide");
    REQUIRE(infeasible.exit_code == 0);
    CHECK(infeasible.stdout_text.find("INFEASIBLE") != std::string::npos);
    fs::remove(inst);
  }

  TEST_CASE("bench writes the documented CSV schema") {
    const fs::path cfg = tmp("cli_bench.json");
    const fs::path out = tmp("cli_bench.csv");
    const fs::path agg = tmp("cli_bench_agg.csv");
    {
      std::ofstream f(cfg, std::ios::binary);
      f << R"({"schema":1,"settings":[{"p":2,"n":16,"sparsity":0.6,"db":20,)"
        << R"("beta_star_mean":0.5,"beta_star_var":2,"realizable_rows":true,"seed":11}],)"
        << R"("repetitions":2,"methods":["sorting","gd"]})";
    }
    const RunResult res =
        run_cli("bench --config " + cfg.string() + " -o " + out.string() + " --aggregate " + agg.string());
    REQUIRE(res.exit_code == 0);
    std::ifstream rows(out);
    std::string header;
    std::getline(rows, header);
    CHECK(header == "p,n,sparsity,db,rho,seed,method,pe,obj,re,ge,runtime_ms");
    int count = 0;
    for (std::string line; std::getline(rows, line);)
      if (!line.empty()) ++count;
    CHECK(count == 4);  // 2 methods x 2 repetitions

    std::ifstream aggs(agg);
    std::getline(aggs, header);
    CHECK(header.rfind("p,n,sparsity,db,method,count,mean_pe", 0) == 0);
    for (const fs::path& p : {cfg, out, agg}) fs::remove(p);
  }
}
