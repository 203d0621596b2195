// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "lse/grid.hpp"
#include "lse/random.hpp"

namespace lse {

enum class PointFamily {
  kScrambledSobol,  ///< Sobol (Joe-Kuo directions) with a random linear scramble and digital shift
  kStratified,      ///< Latin hypercube: one point per stratum along every axis
};

std::string_view point_family_name(PointFamily family);
/// "sobol" or "stratified"; ConfigError otherwise.
PointFamily parse_point_family(std::string_view name);

/// Sobol points in Gray-code order, without scrambling. Supports dim <= kMaxDim
/// and n <= 2^32; coordinates carry 32 bits.
class SobolSequence {
 public:
  explicit SobolSequence(int dim);

  int dim() const { return dim_; }
  std::uint32_t direction(int axis, int bit) const { return v_[axis][bit]; }

  /// Writes points 0..n-1 as structure of arrays: out[k][i] is coordinate k
  /// of point i.
  void generate(std::size_t n, double* const* out) const;

 private:
  int dim_;
  std::uint32_t v_[kMaxDim][32];
};

/// n points in [0,1)^dim, a deterministic function of (family, key). Each
/// key yields an independent randomization.
void unit_points(PointFamily family, int dim, std::size_t n, const StreamKey& key, double* const* out);

}  // namespace lse
