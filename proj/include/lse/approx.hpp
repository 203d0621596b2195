// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "lse/grid.hpp"

namespace lse {

/// Multilinear interpolant of 2^d vertex samples on one cell. Approximants
/// of different cells are independent, so the global estimate may be
/// discontinuous across faces.
class LocalApproximant {
 public:
  LocalApproximant() = default;
  LocalApproximant(Cell cell, CellBox box, std::vector<double> vertex_values);

  const Cell& cell() const { return cell_; }
  const CellBox& box() const { return box_; }
  int dim() const { return box_.dim; }
  std::span<const double> vertex_values() const { return values_; }

  /// Value at a point of the closed cell; DomainError outside it.
  double eval(std::span<const double> x) const;
  /// Value at local coordinates t in [0,1]^d.
  double eval_unit(std::span<const double> t) const;

 private:
  Cell cell_{};
  CellBox box_{};
  std::vector<double> values_;
};

/// Interpolation operator T applied to the vertex samples (in
/// `cell_vertices` order). Linear in the samples.
LocalApproximant fit_local(const Grid& grid, const Cell& cell, std::span<const double> samples);

double eval_local(const LocalApproximant& approx, std::span<const double> x);

/// Infimum of |f^| over the closed cell. A multilinear function attains its
/// extrema at vertices, so this is 0 when vertex values change sign (or
/// touch zero) and min |value| otherwise.
double cell_abs_min(std::span<const double> vertex_values);
double cell_abs_min(const LocalApproximant& approx);

/// delta^ = inf |f^| / h^alpha.
struct DecisionVariable {
  double value = 0.0;
  double cell_min_abs = 0.0;
  double h_pow_alpha = 1.0;
};

DecisionVariable decision_variable(std::span<const double> vertex_values, double h, double alpha);
DecisionVariable decision_variable(const LocalApproximant& approx, double alpha);

}  // namespace lse
