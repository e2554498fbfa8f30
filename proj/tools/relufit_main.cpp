#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "relu/approx.hpp"
#include "relu/csv.hpp"
#include "relu/experiments.hpp"
#include "relu/hardness.hpp"
#include "relu/heuristics.hpp"
#include "relu/oracle.hpp"
#include "relu/statgen.hpp"

using json = nlohmann::json;
using namespace relu;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitRefused = 3;
constexpr int kExitNotConverged = 4;

json params_json(const Params& params) {
  json j;
  j["beta"] = std::vector<double>(params.beta.data(), params.beta.data() + params.beta.size());
  j["beta0"] = params.beta0;
  return j;
}

double parse_db(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF")
    return std::numeric_limits<double>::infinity();
  return std::stod(text);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct SplitPaths {
  std::string train, test, truth;
};

SplitPaths split_output_paths(const std::string& joined) {
  SplitPaths out;
  const auto first = joined.find(',');
  const auto second = joined.find(',', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw std::invalid_argument("expected -o train.csv,test.csv,truth.json");
  out.train = joined.substr(0, first);
  out.test = joined.substr(first + 1, second - first - 1);
  out.truth = joined.substr(second + 1);
  return out;
}

int cmd_generate(const StatModelSpec& spec, const std::string& out_joined) {
  const SplitPaths paths = split_output_paths(out_joined);
  const Instance inst = generate_instance(spec);
  save_dataset_csv(paths.train, inst.train);
  save_dataset_csv(paths.test, inst.test);
  json truth;
  truth["schema"] = 1;
  truth["beta_star"] = std::vector<double>(inst.truth.beta.data(),
                                           inst.truth.beta.data() + inst.truth.beta.size());
  truth["beta0_star"] = inst.truth.beta0;
  truth["sigma"] = inst.sigma;
  truth["rho"] = inst.rho;
  truth["delta_sq"] = inst.delta_sq;
  write_text(paths.truth, truth.dump(2) + "\n");
  return kExitOk;
}

struct SolveOptions {
  std::string method;
  std::string input;
  int k = 1;
  int splits = 10;
  GdConfig gd;
  SolverConfig solver;
  int iter_max_outer = 20;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool strict = false;
};

int cmd_solve(const SolveOptions& opt) {
  const Dataset data = load_dataset_csv(opt.input);
  const auto start = std::chrono::steady_clock::now();

  SolveReport rep;
  std::int64_t candidates = 0;
  if (opt.method == "approx") {
    const ApproxResult res = generalized_approx(data, opt.k, opt.solver);
    rep = res.best;
    candidates = res.candidates_evaluated;
  } else if (opt.method == "sorting") {
    const ApproxResult res = sorting_method(data, opt.splits, opt.solver);
    rep = res.best;
    candidates = res.candidates_evaluated;
  } else if (opt.method == "iter") {
    rep = iterative_heuristic(data, Params::zero(data.p()), opt.iter_max_outer, opt.solver);
  } else if (opt.method == "gd") {
    rep = gradient_descent(data, opt.gd, Params::zero(data.p()));
  } else if (opt.method == "sgd") {
    if (!opt.seed_set) throw std::invalid_argument("sgd requires --seed");
    rep = sgd(data, opt.gd, Params::zero(data.p()), opt.seed);
  } else if (opt.method == "sorting+iter") {
    const Params init = sorting_method(data, opt.splits, opt.solver).best.params;
    rep = iterative_heuristic(data, init, opt.iter_max_outer, opt.solver);
  } else if (opt.method == "sorting+gd") {
    const Params init = sorting_method(data, opt.splits, opt.solver).best.params;
    rep = gradient_descent(data, opt.gd, init);
  } else {
    throw std::invalid_argument("unknown method '" + opt.method + "'");
  }

  const double runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  json out;
  out["schema"] = 1;
  out["method"] = opt.method;
  out["obj"] = relu_objective(data, rep.params);
  out["params"] = params_json(rep.params);
  out["iterations"] = rep.iterations;
  out["converged"] = rep.converged;
  out["runtime_ms"] = runtime_ms;
  if (candidates > 0) out["candidates_evaluated"] = candidates;
  std::cout << out.dump(2) << "\n";
  if (opt.strict && !rep.converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_oracle(const std::string& input) {
  const Dataset data = load_dataset_csv(input);
  if (data.m() > kOracleMaxPositives) {
    std::cerr << "oracle: refusing " << data.m() << " positive labels (limit "
              << kOracleMaxPositives << ", 2^m solves)\n";
    return kExitRefused;
  }
  const ApproxResult res = brute_force_opt(data);
  json out;
  out["schema"] = 1;
  out["z_opt"] = res.best.value;
  out["params"] = params_json(res.best.params);
  out["active_set"] = res.best_active.members();
  out["relu_value"] = res.relu_value;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_reduce(const std::string& list, const std::string& out_path, bool decide,
               bool from_subset_sum) {
  SubsetSumInstance inst;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string tok = list.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (tok.empty()) throw std::invalid_argument("reduce: empty entry in --a");
    inst.a.push_back(std::stoll(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (from_subset_sum) inst = to_pm1(inst);
  const Dataset d = reduce_to_relu(inst, inst.p());
  if (!out_path.empty()) save_dataset_csv(out_path, d);
  std::cout << "samples: " << d.n() << ", threshold: " << format_double(threshold(inst.p()))
            << "\n";
  if (decide) {
    if (d.m() > kOracleMaxPositives) {
      std::cerr << "reduce: instance too large for the decision oracle\n";
      return kExitRefused;
    }
    const ApproxResult opt = brute_force_opt(d);
    const bool feasible = std::abs(opt.best.value - threshold(inst.p())) <= 1e-6;
    std::cout << (feasible ? "FEASIBLE" : "INFEASIBLE") << ", optimum "
              << format_double(opt.best.value) << ", threshold "
              << format_double(threshold(inst.p())) << "\n";
  }
  return kExitOk;
}

int cmd_bench(const std::string& config_path, const std::string& out_path,
              const std::string& aggregate_path, int jobs) {
  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("bench: cannot open " + config_path);
  const json cfg_json = json::parse(in);

  BenchConfig cfg;
  cfg.repetitions = cfg_json.value("repetitions", 1);
  if (cfg_json.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : cfg_json.at("methods"))
      cfg.methods.push_back(method_from_name(name.get<std::string>()));
  }
  cfg.sorting_splits = cfg_json.value("sorting_splits", 10);
  cfg.iter_max_outer = cfg_json.value("iter_max_outer", 20);
  if (cfg_json.contains("gd")) {
    const json& g = cfg_json.at("gd");
    cfg.gd.max_iters = g.value("T", cfg.gd.max_iters);
    cfg.gd.eps = g.value("eps", cfg.gd.eps);
    cfg.gd.eta0 = g.value("eta0", cfg.gd.eta0);
    cfg.gd.gamma_step = g.value("gamma_step", cfg.gd.gamma_step);
    cfg.gd.alpha = g.value("alpha", cfg.gd.alpha);
    cfg.gd.batch = g.value("batch", cfg.gd.batch);
  }
  for (const auto& s : cfg_json.at("settings")) {
    StatModelSpec spec;
    spec.p = s.at("p").get<int>();
    spec.n = s.at("n").get<int>();
    spec.sparsity = s.value("sparsity", 0.5);
    spec.beta_star_mean = s.value("beta_star_mean", 0.5);
    spec.beta_star_var = s.value("beta_star_var", 10.0);
    if (s.contains("db")) {
      if (s.at("db").is_string())
        spec.db = parse_db(s.at("db").get<std::string>());
      else
        spec.db = s.at("db").get<double>();
    }
    spec.realizable_rows = s.value("realizable_rows", false);
    spec.seed = s.at("seed").get<std::uint64_t>();
    cfg.settings.push_back(spec);
  }
  cfg.exec = jobs == 1 ? Execution::serial : default_execution();

  const std::vector<MetricRow> rows = run_benchmark(cfg);
  write_rows_csv(out_path, rows);
  if (!aggregate_path.empty()) write_aggregate_csv(aggregate_path, aggregate_rows(rows));
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

int cmd_bounds(double gamma, double delta_sq) {
  const AsymptoticBracket b = asymptotic_bracket(gamma, delta_sq);
  json out;
  out["schema"] = 1;
  out["lower"] = b.lower;
  out["upper"] = b.upper;
  out["gamma"] = b.gamma;
  out["delta_sq"] = b.delta_sq;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-node ReLU regression: approximation algorithm, heuristics, exact oracle,\n"
               "synthetic instances and the subset-sum reduction"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic train/test/truth triple");
  StatModelSpec gen_spec;
  std::string gen_db = "inf", gen_out;
  gen->add_option("--p", gen_spec.p, "Feature dimension")->required();
  gen->add_option("--n", gen_spec.n, "Samples per split")->required();
  gen->add_option("--sparsity", gen_spec.sparsity, "P(feature is nonzero)")->required();
  gen->add_option("--db", gen_db, "Signal-to-noise in dB, or 'inf'");
  gen->add_option("--beta-mean", gen_spec.beta_star_mean, "Mean of beta* entries");
  gen->add_option("--beta-var", gen_spec.beta_star_var, "Variance of beta* entries");
  gen->add_flag("--realizable-rows", gen_spec.realizable_rows,
                "Prepend the p deterministic uniqueness rows");
  gen->add_option("--seed", gen_spec.seed, "RNG seed")->required();
  gen->add_option("-o,--output", gen_out, "train.csv,test.csv,truth.json")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Fit one method to a dataset CSV");
  SolveOptions sopt;
  solve->add_option("--method", sopt.method,
                    "approx|sorting|iter|gd|sgd|sorting+iter|sorting+gd")->required();
  solve->add_option("--input", sopt.input, "Dataset CSV")->required();
  solve->add_option("--k", sopt.k, "Inactive-set budget for approx");
  solve->add_option("--splits", sopt.splits, "Splits for the sorting method");
  solve->add_option("--T", sopt.gd.max_iters, "Max iterations (gd/sgd)");
  solve->add_option("--eps", sopt.gd.eps, "Termination threshold (gd/sgd)");
  solve->add_option("--eta0", sopt.gd.eta0, "Initial step (gd/sgd)");
  solve->add_option("--gamma-step", sopt.gd.gamma_step, "Step decay (gd/sgd)");
  solve->add_option("--alpha", sopt.gd.alpha, "Backtrack factor (gd/sgd)");
  solve->add_option("--batch", sopt.gd.batch, "Mini-batch size (sgd)");
  solve->add_option("--iter-T", sopt.iter_max_outer, "Outer iterations (iter)");
  auto* seed_opt = solve->add_option("--seed", sopt.seed, "RNG seed (sgd)");
  solve->add_flag("--strict", sopt.strict, "Exit 4 when the method did not converge");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by exhausting active sets");
  std::string oracle_input;
  oracle_cmd->add_option("--input", oracle_input, "Dataset CSV")->required();

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Subset-sum to One-Node-ReLU reduction");
  std::string reduce_list, reduce_out;
  bool reduce_decide = false, reduce_from_subset = false;
  reduce->add_option("--a", reduce_list, "Comma-separated nonnegative weights")->required();
  reduce->add_option("-o,--output", reduce_out, "Instance CSV path");
  reduce->add_flag("--decide", reduce_decide, "Run the oracle and print FEASIBLE/INFEASIBLE");
  reduce->add_flag("--from-subset-sum", reduce_from_subset,
                   "Treat --a as a plain subset-sum instance and extend it first");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the method-comparison harness");
  std::string bench_cfg, bench_out, bench_agg;
  int bench_jobs = 0;
  bench->add_option("--config", bench_cfg, "bench.json")->required();
  bench->add_option("-o,--output", bench_out, "Per-run CSV")->required();
  bench->add_option("--aggregate", bench_agg, "Aggregate CSV (means and stds)");
  bench->add_option("--jobs", bench_jobs, "1 forces the serial path");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Asymptotic bracket for given gamma, delta^2");
  double bounds_gamma = 0, bounds_delta_sq = 0;
  bounds->add_option("--gamma", bounds_gamma, "Noise standard deviation")->required();
  bounds->add_option("--delta-sq", bounds_delta_sq, "Variance of the true preactivation")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (gen->parsed()) {
      gen_spec.db = parse_db(gen_db);
      return cmd_generate(gen_spec, gen_out);
    }
    if (solve->parsed()) {
      sopt.seed_set = seed_opt->count() > 0;
      return cmd_solve(sopt);
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_input);
    if (reduce->parsed()) return cmd_reduce(reduce_list, reduce_out, reduce_decide, reduce_from_subset);
    if (bench->parsed()) return cmd_bench(bench_cfg, bench_out, bench_agg, bench_jobs);
    if (bounds->parsed()) return cmd_bounds(bounds_gamma, bounds_delta_sq);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
