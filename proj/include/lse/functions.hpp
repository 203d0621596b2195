// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lse {

/// A deterministic real function on R^d, evaluable point-wise or in batches
/// of coordinate arrays (structure of arrays).
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  /// Required dimension, or 0 when any dimension is accepted.
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual double value(std::span<const double> x) const = 0;

  /// out[i] = value((x[0][i], ..., x[dim-1][i])). Overridden where a SIMD
  /// kernel exists; the default loops over `value`.
  virtual void values(int dim, const double* const* x, std::size_t n, double* out) const;
};

/// 1/5 - (1 + cos(12 |x|)) / (|x|^2 / 2 + 2); zero set is a family of rings.
double drop_wave(std::span<const double> x);

/// (1/122) sum_i (x_i^4 - 16 x_i^2 + 5 x_i) + 1.
double styblinski_tang(std::span<const double> x);

class DropWave final : public ScalarField {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "drop_wave"; }
  double value(std::span<const double> x) const override { return drop_wave(x); }
};

class StyblinskiTang final : public ScalarField {
 public:
  explicit StyblinskiTang(int dim = 3) : dim_(dim) {}
  int dim() const override { return dim_; }
  std::string name() const override { return "styblinski_tang"; }
  double value(std::span<const double> x) const override { return styblinski_tang(x); }
  void values(int dim, const double* const* x, std::size_t n, double* out) const override;

 private:
  int dim_;
};

/// offset + <coefficients, x>.
class AffineFunction final : public ScalarField {
 public:
  AffineFunction(std::vector<double> coefficients, double offset);
  int dim() const override { return static_cast<int>(coefficients_.size()); }
  std::string name() const override { return "affine"; }
  double value(std::span<const double> x) const override;
  std::span<const double> coefficients() const { return coefficients_; }
  double offset() const { return offset_; }

 private:
  std::vector<double> coefficients_;
  double offset_;
};

/// |x - center| - radius (signed distance to a sphere).
class SphereDistance final : public ScalarField {
 public:
  SphereDistance(std::vector<double> center, double radius);
  int dim() const override { return static_cast<int>(center_.size()); }
  std::string name() const override { return "sphere"; }
  double value(std::span<const double> x) const override;

 private:
  std::vector<double> center_;
  double radius_;
};

class ConstantFunction final : public ScalarField {
 public:
  explicit ConstantFunction(double c) : c_(c) {}
  int dim() const override { return 0; }
  std::string name() const override { return "constant"; }
  double value(std::span<const double>) const override { return c_; }

 private:
  double c_;
};

}  // namespace lse
