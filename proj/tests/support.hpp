#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hpd::testing {

// Seeded generators for the property tests. Every test builds its own
// engine so failures reproduce in isolation.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  // log-uniform on [lo, hi], lo > 0
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  double signature() { return uniform(0.02, 0.5); }
  double modulus() { return uniform(0.01, 0.99); }
  double distortion() { return log_uniform(0.05, 20.0); }

 private:
  std::mt19937_64 eng_;
};

inline double rel_diff(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

}  // namespace hpd::testing
