// SPDX-License-Identifier: Apache-2.0
#include "lse/functions.hpp"

#include <array>
#include <cmath>

#include "lse/error.hpp"
#include "lse/grid.hpp"
#include "lse/kernels/kernels.hpp"

namespace lse {

void ScalarField::values(int dim, const double* const* x, std::size_t n, double* out) const {
  std::array<double, kMaxDim> p{};
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) p[k] = x[k][i];
    out[i] = value({p.data(), static_cast<std::size_t>(dim)});
  }
}

double drop_wave(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double r = std::sqrt(r2);
  return 0.2 - (1.0 + std::cos(12.0 * r)) / (r2 / 2.0 + 2.0);
}

double styblinski_tang(std::span<const double> x) {
  std::array<const double*, kMaxDim> cols{};
  for (std::size_t k = 0; k < x.size(); ++k) cols[k] = &x[k];
  double out;
  kernels::scalar::styblinski_tang(static_cast<int>(x.size()), cols.data(), 1, &out);
  return out;
}

void StyblinskiTang::values(int dim, const double* const* x, std::size_t n, double* out) const {
  kernels::active().styblinski_tang(dim, x, n, out);
}

AffineFunction::AffineFunction(std::vector<double> coefficients, double offset)
    : coefficients_(std::move(coefficients)), offset_(offset) {
  if (coefficients_.empty()) throw ConfigError("affine function: needs at least one coefficient");
}

double AffineFunction::value(std::span<const double> x) const {
  if (x.size() != coefficients_.size()) throw ArityError("affine function: dimension mismatch");
  double v = offset_;
  for (std::size_t k = 0; k < x.size(); ++k) v += coefficients_[k] * x[k];
  return v;
}

SphereDistance::SphereDistance(std::vector<double> center, double radius) : center_(std::move(center)), radius_(radius) {
  if (center_.empty()) throw ConfigError("sphere: needs a center");
}

double SphereDistance::value(std::span<const double> x) const {
  if (x.size() != center_.size()) throw ArityError("sphere: dimension mismatch");
  double r2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) r2 += (x[k] - center_[k]) * (x[k] - center_[k]);
  return std::sqrt(r2) - radius_;
}

}  // namespace lse
