// SPDX-License-Identifier: Apache-2.0
#include "lse/qmc.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <vector>

#include "lse/error.hpp"

namespace lse {

namespace {

// Joe-Kuo primitive polynomials for dimensions 2..6: degree s, coefficient
// bits a and initial direction integers m.
struct Primitive {
  int s;
  unsigned a;
  unsigned m[4];
};

constexpr Primitive kPrimitives[kMaxDim - 1] = {
    {1, 0, {1, 0, 0, 0}}, {2, 1, {1, 3, 0, 0}}, {3, 1, {1, 3, 1, 0}},
    {3, 2, {1, 1, 1, 0}}, {4, 1, {1, 1, 3, 3}},
};

constexpr double kTwoPow32Inv = 0x1.0p-32;

}  // namespace

std::string_view point_family_name(PointFamily family) {
  return family == PointFamily::kScrambledSobol ? "sobol" : "stratified";
}

PointFamily parse_point_family(std::string_view name) {
  if (name == "sobol") return PointFamily::kScrambledSobol;
  if (name == "stratified") return PointFamily::kStratified;
  throw ConfigError("point_family: unknown family '" + std::string(name) + "' (expected sobol or stratified)");
}

SobolSequence::SobolSequence(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw UnsupportedError("sobol: dimension " + std::to_string(dim) + " not in [1, 6]");
  for (int b = 0; b < 32; ++b) v_[0][b] = std::uint32_t{1} << (31 - b);
  for (int k = 1; k < dim; ++k) {
    const Primitive& pr = kPrimitives[k - 1];
    std::uint32_t* v = v_[k];
    for (int b = 0; b < pr.s; ++b) v[b] = pr.m[b] << (31 - b);
    for (int b = pr.s; b < 32; ++b) {
      std::uint32_t x = v[b - pr.s] ^ (v[b - pr.s] >> pr.s);
      for (int j = 1; j < pr.s; ++j) {
        if ((pr.a >> (pr.s - 1 - j)) & 1u) x ^= v[b - j];
      }
      v[b] = x;
    }
  }
}

void SobolSequence::generate(std::size_t n, double* const* out) const {
  if (n > (std::size_t{1} << 32)) throw RangeError("sobol: at most 2^32 points");
  std::uint32_t x[kMaxDim] = {};
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const int c = std::countr_zero(static_cast<std::uint64_t>(i));
      for (int k = 0; k < dim_; ++k) x[k] ^= v_[k][c];
    }
    for (int k = 0; k < dim_; ++k) out[k][i] = x[k] * kTwoPow32Inv;
  }
}

namespace {

// Left matrix scramble of the direction numbers (random lower-triangular
// binary matrix with unit diagonal, MSB first) followed by a digital shift.
void scrambled_sobol(int dim, std::size_t n, const StreamKey& key, double* const* out) {
  static const SobolSequence base(kMaxDim);
  const int bits = n <= 1 ? 0 : std::bit_width(n - 1);
  RandomStream rng(key);
  std::uint32_t v[kMaxDim][32];
  std::uint32_t shift[kMaxDim];
  for (int k = 0; k < dim; ++k) {
    std::uint32_t rows[32];
    for (int r = 0; r < 32; ++r) {
      // row r may mix output bit r with more significant input bits only
      const std::uint32_t below = r == 0 ? 0u : static_cast<std::uint32_t>(rng.next_u64()) & ~(~0u >> r);
      rows[r] = below | (std::uint32_t{1} << (31 - r));
    }
    for (int b = 0; b < bits; ++b) {
      const std::uint32_t d = base.direction(k, b);
      std::uint32_t s = 0;
      for (int r = 0; r < 32; ++r) {
        if (std::popcount(d & rows[r]) & 1) s |= std::uint32_t{1} << (31 - r);
      }
      v[k][b] = s;
    }
    shift[k] = static_cast<std::uint32_t>(rng.next_u64());
  }
  std::uint32_t x[kMaxDim];
  std::copy(shift, shift + dim, x);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const int c = std::countr_zero(static_cast<std::uint64_t>(i));
      for (int k = 0; k < dim; ++k) x[k] ^= v[k][c];
    }
    for (int k = 0; k < dim; ++k) out[k][i] = x[k] * kTwoPow32Inv;
  }
}

void stratified(int dim, std::size_t n, const StreamKey& key, double* const* out) {
  RandomStream rng(key);
  std::vector<std::size_t> perm(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (int k = 0; k < dim; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
      std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
    }
    for (std::size_t i = 0; i < n; ++i) out[k][i] = (static_cast<double>(perm[i]) + rng.uniform()) * inv;
  }
}

}  // namespace

void unit_points(PointFamily family, int dim, std::size_t n, const StreamKey& key, double* const* out) {
  if (dim < 1 || dim > kMaxDim) throw UnsupportedError("unit_points: dimension " + std::to_string(dim));
  if (family == PointFamily::kScrambledSobol) {
    scrambled_sobol(dim, n, key, out);
  } else {
    stratified(dim, n, key, out);
  }
}

}  // namespace lse
