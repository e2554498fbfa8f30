#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace relu {

// Seeded generator with hand-rolled uniform/normal mappings. The mt19937_64
// engine is fully specified by the standard, but the <random> distributions
// are not; doing the mappings ourselves keeps seeded streams stable across
// compilers, which the reproducibility contracts rely on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform double in [0, 1), 53 bits of randomness.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. No caching of the second variate, so
  // every call consumes exactly two engine draws.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % bound;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Selection sampling: k indices from {0..n-1} without replacement, returned
// in increasing order. Consumes one engine draw per scanned element, so the
// k == n case walks every index in order (full-batch degeneracy).
inline std::vector<int> sample_sorted(int n, int k, Rng& rng) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  int needed = k;
  for (int i = 0; i < n && needed > 0; ++i) {
    const std::uint64_t remaining = static_cast<std::uint64_t>(n - i);
    if (rng.below(remaining) < static_cast<std::uint64_t>(needed)) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

}  // namespace relu
