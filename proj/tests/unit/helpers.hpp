// SPDX-License-Identifier: Apache-2.0
//
// Small generators and reference implementations shared by the tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lse/grid.hpp"

namespace lse::test {

/// Hand-rolled generator for property tests; fixed seeds keep failures
/// reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::vector<double> reals(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

/// Direct tensor-product formula: sum over vertices of value times the
/// product of (t_k or 1 - t_k).
inline double brute_multilinear(int dim, const std::vector<double>& values, const std::vector<double>& t) {
  double sum = 0.0;
  for (int v = 0; v < (1 << dim); ++v) {
    double w = 1.0;
    for (int k = 0; k < dim; ++k) w *= ((v >> k) & 1) ? t[k] : 1.0 - t[k];
    sum += values[v] * w;
  }
  return sum;
}

/// Fresh empty directory under the system temp dir.
inline std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("lse_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace lse::test
