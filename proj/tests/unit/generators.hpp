#pragma once

// Seeded random generators for property tests. Every property draws from its
// own fixed seed so a failure reproduces from the test name alone.

#include <cmath>
#include <cstdint>
#include <random>

#include "ffmfg/core.hpp"

namespace ffmfg::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  double alpha() { return uniform(0.05, 1.95); }
  Vec2 point(double lo = 0.1, double hi = 10.0) { return {log_uniform(lo, hi), log_uniform(lo, hi)}; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double vec_rel_err(Vec2 got, Vec2 want) {
  return norm(got - want) / std::max(norm(want), 1e-300);
}

inline double mat_rel_err(const Matrix2& got, const Matrix2& want) {
  const Matrix2 d{got.a00 - want.a00, got.a01 - want.a01, got.a10 - want.a10, got.a11 - want.a11};
  return d.max_abs() / std::max(want.max_abs(), 1e-300);
}

}  // namespace ffmfg::testing
