#pragma once

#include <string>
#include <vector>

#include "relu/heuristics.hpp"
#include "relu/parallel.hpp"
#include "relu/statgen.hpp"

namespace relu {

enum class Method { sorting, sorting_iter, sorting_gd, gd, sgd };

const std::vector<Method>& all_methods();
std::string method_name(Method m);
Method method_from_name(const std::string& name);  // throws on unknown names

// Unnormalized sum over the training design of
// (max{0, x.beta_hat + b0_hat} - max{0, x.beta* + b0*})^2.
double prediction_error(const Dataset& train, const Params& estimate, const Params& truth);

// ||beta_hat - beta*||_2; the intercept difference is included only when the
// truth carries a nonzero intercept.
double recovery_error(const Params& estimate, const Params& truth);

// Alias for relu_objective on the test set.
double generalization_error(const Dataset& test, const Params& estimate);

struct MetricRow {
  int p = 0;
  int n = 0;
  double sparsity = 0;
  double db = 0;
  double rho = 0;
  std::uint64_t seed = 0;
  Method method = Method::sorting;
  double pe = 0, obj = 0, re = 0, ge = 0;
  double runtime_ms = 0;
};

struct BenchConfig {
  std::vector<StatModelSpec> settings;
  std::vector<Method> methods = all_methods();
  int repetitions = 1;      // instance seeds are setting.seed + 0 .. reps-1
  int sorting_splits = 10;  // N
  int iter_max_outer = 20;  // T for the iterative refinement
  GdConfig gd;              // shared by gd / sorting+gd / sgd
  SolverConfig solver;
  Execution exec = default_execution();
};

// One row per setting x repetition x method, deterministic per seed, sorted
// by (p, n, sparsity, db, seed, method).
std::vector<MetricRow> run_benchmark(const BenchConfig& cfg);

struct AggregateRow {
  int p = 0;
  int n = 0;
  double sparsity = 0;
  double db = 0;
  Method method = Method::sorting;
  int count = 0;
  double mean_pe = 0, std_pe = 0;
  double mean_obj = 0, std_obj = 0;
  double mean_re = 0, std_re = 0;
  double mean_ge = 0, std_ge = 0;
  double mean_runtime_ms = 0, std_runtime_ms = 0;
};

std::vector<AggregateRow> aggregate_rows(const std::vector<MetricRow>& rows);

// Fraction of seeds (within matching settings) where method a's objective is
// no worse than method b's, ties counting for a.
double objective_win_rate(const std::vector<MetricRow>& rows, Method a, Method b);

// CSV schema: p,n,sparsity,db,rho,seed,method,pe,obj,re,ge,runtime_ms.
void write_rows_csv(const std::string& path, const std::vector<MetricRow>& rows);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);

}  // namespace relu
