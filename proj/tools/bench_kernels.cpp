// Times the serial reference path against the OpenMP path for the two
// candidate-evaluation kernels (approximation candidates, oracle subsets)
// and checks that both produce the same minimizer.

#include <chrono>
#include <cstdio>
#include <functional>

#include "relu/approx.hpp"
#include "relu/oracle.hpp"
#include "relu/statgen.hpp"

#ifdef RELUFIT_HAVE_OPENMP
#include <omp.h>
#endif

using namespace relu;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

Dataset instance(int p, int n, std::uint64_t seed) {
  StatModelSpec spec;
  spec.p = p;
  spec.n = n;
  spec.sparsity = 0.6;
  spec.beta_star_mean = 0.5;
  spec.beta_star_var = 4.0;
  spec.db = 10;
  spec.seed = seed;
  return generate_instance(spec).train;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   identical: %s\n",
              kernel, serial_ms, parallel_ms, serial_ms / parallel_ms, identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef RELUFIT_HAVE_OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP; both columns run the serial path)\n");
#endif

  {
    const Dataset d = instance(4, 40, 1);
    ApproxResult s, p;
    const double ts = time_ms([&] { s = generalized_approx(d, 2, {}, Execution::serial); });
    const double tp = time_ms([&] { p = generalized_approx(d, 2, {}, Execution::openmp); });
    report("approx candidates", ts, tp,
           s.best.value == p.best.value && s.best_active.members() == p.best_active.members());
  }
  {
    const Dataset d = instance(3, 18, 2);
    ApproxResult s, p;
    const double ts = time_ms([&] { s = brute_force_opt(d, {}, Execution::serial); });
    const double tp = time_ms([&] { p = brute_force_opt(d, {}, Execution::openmp); });
    report("oracle subsets", ts, tp,
           s.best.value == p.best.value && s.best_active.members() == p.best_active.members());
  }
  return 0;
}
