#include "relu/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include "relu/approx.hpp"
#include "relu/csv.hpp"

#ifdef RELUFIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace relu {
namespace {

// Offset mixed into the instance seed for the SGD batch stream, so batches
// do not replay the data-generation draws.
constexpr std::uint64_t kSgdSeedSalt = 0x9e3779b97f4a7c15ull;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

Params fit_method(const Dataset& train, Method method, const BenchConfig& cfg, std::uint64_t seed) {
  switch (method) {
    case Method::sorting:
      return sorting_method(train, cfg.sorting_splits, cfg.solver, Execution::serial).best.params;
    case Method::sorting_iter: {
      const Params init = sorting_method(train, cfg.sorting_splits, cfg.solver, Execution::serial).best.params;
      return iterative_heuristic(train, init, cfg.iter_max_outer, cfg.solver).params;
    }
    case Method::sorting_gd: {
      const Params init = sorting_method(train, cfg.sorting_splits, cfg.solver, Execution::serial).best.params;
      return gradient_descent(train, cfg.gd, init).params;
    }
    case Method::gd:
      return gradient_descent(train, cfg.gd, Params::zero(train.p())).params;
    case Method::sgd:
      return sgd(train, cfg.gd, Params::zero(train.p()), seed + kSgdSeedSalt).params;
  }
  throw std::logic_error("fit_method: unknown method");
}

int method_order(Method m) { return static_cast<int>(m); }

}  // namespace

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {Method::sorting, Method::sorting_iter,
                                              Method::sorting_gd, Method::gd, Method::sgd};
  return methods;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::sorting:
      return "sorting";
    case Method::sorting_iter:
      return "sorting+iter";
    case Method::sorting_gd:
      return "sorting+gd";
    case Method::gd:
      return "gd";
    case Method::sgd:
      return "sgd";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

double prediction_error(const Dataset& train, const Params& estimate, const Params& truth) {
  if (estimate.dim() != train.p() || truth.dim() != train.p())
    throw std::invalid_argument("prediction_error: dimension mismatch");
  CompensatedSum acc;
  for (int i = 0; i < train.n(); ++i) {
    const double a = std::max(0.0, train.preactivation(i, estimate));
    const double b = std::max(0.0, train.preactivation(i, truth));
    acc.add((a - b) * (a - b));
  }
  return acc.value();
}

double recovery_error(const Params& estimate, const Params& truth) {
  if (estimate.dim() != truth.dim()) throw std::invalid_argument("recovery_error: dimension mismatch");
  double sq = (estimate.beta - truth.beta).squaredNorm();
  if (truth.beta0 != 0.0) {
    const double db0 = estimate.beta0 - truth.beta0;
    sq += db0 * db0;
  }
  return std::sqrt(sq);
}

double generalization_error(const Dataset& test, const Params& estimate) {
  return relu_objective(test, estimate);
}

std::vector<MetricRow> run_benchmark(const BenchConfig& cfg) {
  if (cfg.repetitions < 1) throw std::invalid_argument("run_benchmark: repetitions must be >= 1");

  struct Task {
    StatModelSpec spec;
  };
  std::vector<Task> tasks;
  for (const StatModelSpec& setting : cfg.settings) {
    for (int r = 0; r < cfg.repetitions; ++r) {
      StatModelSpec s = setting;
      s.seed = setting.seed + static_cast<std::uint64_t>(r);
      tasks.push_back({s});
    }
  }

  std::vector<std::vector<MetricRow>> per_task(tasks.size());
  const auto run_task = [&](std::size_t t) {
    const StatModelSpec& spec = tasks[t].spec;
    const Instance inst = generate_instance(spec);
    std::vector<MetricRow> rows;
    rows.reserve(cfg.methods.size());
    for (Method method : cfg.methods) {
      const auto start = std::chrono::steady_clock::now();
      const Params estimate = fit_method(inst.train, method, cfg, spec.seed);
      MetricRow row;
      row.runtime_ms = elapsed_ms(start);
      row.p = spec.p;
      row.n = spec.n;
      row.sparsity = spec.sparsity;
      row.db = spec.db;
      row.rho = inst.rho;
      row.seed = spec.seed;
      row.method = method;
      row.pe = prediction_error(inst.train, estimate, inst.truth);
      row.obj = relu_objective(inst.train, estimate);
      row.re = recovery_error(estimate, inst.truth);
      row.ge = generalization_error(inst.test, estimate);
      rows.push_back(row);
    }
    per_task[t] = std::move(rows);
  };

#ifdef RELUFIT_HAVE_OPENMP
  if (cfg.exec == Execution::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks.size()); ++t)
      run_task(static_cast<std::size_t>(t));
  } else
#endif
  {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  }

  std::vector<MetricRow> rows;
  for (auto& chunk : per_task) rows.insert(rows.end(), chunk.begin(), chunk.end());
  std::sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
    return std::tuple(a.p, a.n, a.sparsity, a.db, a.seed, method_order(a.method)) <
           std::tuple(b.p, b.n, b.sparsity, b.db, b.seed, method_order(b.method));
  });
  return rows;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<MetricRow>& rows) {
  using Key = std::tuple<int, int, double, double, int>;
  std::map<Key, std::vector<const MetricRow*>> groups;
  for (const MetricRow& r : rows)
    groups[Key(r.p, r.n, r.sparsity, r.db, method_order(r.method))].push_back(&r);

  const auto mean_std = [](const std::vector<const MetricRow*>& g, double MetricRow::*field,
                           double& mean, double& stddev) {
    CompensatedSum s;
    for (const MetricRow* r : g) s.add(r->*field);
    mean = s.value() / static_cast<double>(g.size());
    CompensatedSum sq;
    for (const MetricRow* r : g) sq.add((r->*field - mean) * (r->*field - mean));
    stddev = std::sqrt(sq.value() / static_cast<double>(g.size()));
  };

  std::vector<AggregateRow> out;
  for (const auto& [key, group] : groups) {
    AggregateRow a;
    a.p = std::get<0>(key);
    a.n = std::get<1>(key);
    a.sparsity = std::get<2>(key);
    a.db = std::get<3>(key);
    a.method = static_cast<Method>(std::get<4>(key));
    a.count = static_cast<int>(group.size());
    mean_std(group, &MetricRow::pe, a.mean_pe, a.std_pe);
    mean_std(group, &MetricRow::obj, a.mean_obj, a.std_obj);
    mean_std(group, &MetricRow::re, a.mean_re, a.std_re);
    mean_std(group, &MetricRow::ge, a.mean_ge, a.std_ge);
    mean_std(group, &MetricRow::runtime_ms, a.mean_runtime_ms, a.std_runtime_ms);
    out.push_back(a);
  }
  return out;
}

double objective_win_rate(const std::vector<MetricRow>& rows, Method a, Method b) {
  using Key = std::tuple<int, int, double, double, std::uint64_t>;
  std::map<Key, std::pair<const MetricRow*, const MetricRow*>> pairs;
  for (const MetricRow& r : rows) {
    const Key key(r.p, r.n, r.sparsity, r.db, r.seed);
    if (r.method == a) pairs[key].first = &r;
    if (r.method == b) pairs[key].second = &r;
  }
  int wins = 0, total = 0;
  for (const auto& [key, pr] : pairs) {
    (void)key;
    if (!pr.first || !pr.second) continue;
    ++total;
    if (pr.first->obj <= pr.second->obj + 1e-12) ++wins;
  }
  if (total == 0) throw std::invalid_argument("objective_win_rate: no paired rows");
  return static_cast<double>(wins) / static_cast<double>(total);
}

void write_rows_csv(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "p,n,sparsity,db,rho,seed,method,pe,obj,re,ge,runtime_ms\n";
  for (const MetricRow& r : rows) {
    out << r.p << "," << r.n << "," << format_double(r.sparsity) << "," << format_double(r.db)
        << "," << format_double(r.rho) << "," << r.seed << "," << method_name(r.method) << ","
        << format_double(r.pe) << "," << format_double(r.obj) << "," << format_double(r.re) << ","
        << format_double(r.ge) << "," << format_double(r.runtime_ms) << "\n";
  }
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "p,n,sparsity,db,method,count,mean_pe,std_pe,mean_obj,std_obj,mean_re,std_re,"
         "mean_ge,std_ge,mean_runtime_ms,std_runtime_ms\n";
  for (const AggregateRow& a : rows) {
    out << a.p << "," << a.n << "," << format_double(a.sparsity) << "," << format_double(a.db)
        << "," << method_name(a.method) << "," << a.count << "," << format_double(a.mean_pe) << ","
        << format_double(a.std_pe) << "," << format_double(a.mean_obj) << ","
        << format_double(a.std_obj) << "," << format_double(a.mean_re) << ","
        << format_double(a.std_re) << "," << format_double(a.mean_ge) << ","
        << format_double(a.std_ge) << "," << format_double(a.mean_runtime_ms) << ","
        << format_double(a.std_runtime_ms) << "\n";
  }
}

}  // namespace relu
