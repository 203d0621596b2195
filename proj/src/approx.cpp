// SPDX-License-Identifier: Apache-2.0
#include "lse/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lse/error.hpp"
#include "lse/kernels/kernels.hpp"

namespace lse {

LocalApproximant::LocalApproximant(Cell cell, CellBox box, std::vector<double> vertex_values)
    : cell_(cell), box_(box), values_(std::move(vertex_values)) {
  if (values_.size() != (std::size_t{1} << box_.dim)) {
    throw ArityError("local approximant: expected " + std::to_string(1 << box_.dim) + " vertex values, got " +
                     std::to_string(values_.size()));
  }
}

double LocalApproximant::eval(std::span<const double> x) const {
  if (!box_.contains(x, 1e-12)) throw DomainError("local approximant: point outside cell " + format_cell(cell_, dim()));
  std::array<double, kMaxDim> t{};
  box_.to_unit(x, t);
  for (int k = 0; k < dim(); ++k) t[k] = std::clamp(t[k], 0.0, 1.0);
  return kernels::scalar::multilinear_point(dim(), values_.data(), t.data());
}

double LocalApproximant::eval_unit(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != dim()) throw ArityError("local approximant: coordinate count mismatch");
  return kernels::scalar::multilinear_point(dim(), values_.data(), t.data());
}

LocalApproximant fit_local(const Grid& grid, const Cell& cell, std::span<const double> samples) {
  if (samples.size() != static_cast<std::size_t>(grid.vertices_per_cell())) {
    throw ArityError("fit_local: expected " + std::to_string(grid.vertices_per_cell()) + " samples, got " +
                     std::to_string(samples.size()));
  }
  return LocalApproximant(cell, grid.box(cell), std::vector<double>(samples.begin(), samples.end()));
}

double eval_local(const LocalApproximant& approx, std::span<const double> x) { return approx.eval(x); }

double cell_abs_min(std::span<const double> v) {
  bool inside = false;
  bool outside = false;
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) {
    // 0 counts as inside.
    (x <= 0.0 ? inside : outside) = true;
    m = std::min(m, std::abs(x));
  }
  return (inside && outside) ? 0.0 : m;
}

double cell_abs_min(const LocalApproximant& approx) { return cell_abs_min(approx.vertex_values()); }

DecisionVariable decision_variable(std::span<const double> vertex_values, double h, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("decision variable: alpha must be positive");
  DecisionVariable dv;
  dv.cell_min_abs = cell_abs_min(vertex_values);
  dv.h_pow_alpha = std::pow(h, alpha);
  dv.value = dv.cell_min_abs / dv.h_pow_alpha;
  return dv;
}

DecisionVariable decision_variable(const LocalApproximant& approx, double alpha) {
  return decision_variable(approx.vertex_values(), approx.box().size, alpha);
}

}  // namespace lse
