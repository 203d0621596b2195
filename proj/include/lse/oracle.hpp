// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>

#include "lse/functions.hpp"
#include "lse/grid.hpp"
#include "lse/random.hpp"

namespace lse {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Cost of one point evaluation as a function of the cell size,
/// M(h) = M0 * h^(-alpha/beta). beta = +inf is the deterministic case with
/// constant cost M0.
struct CostSchedule {
  double M0 = 1.0;
  double alpha = 2.0;
  double beta = kInfinity;

  void validate() const;
  double cost_per_eval(double h) const;

  friend bool operator==(const CostSchedule&, const CostSchedule&) = default;
};

struct Evaluation {
  double value = 0.0;
  double cost = 0.0;
};

/// Noisy point evaluator f~_l of the target function. Samples are a pure
/// function of (x, level, stream key), so evaluation is freely concurrent.
class EvaluationOracle {
 public:
  EvaluationOracle(Domain domain, CostSchedule schedule, double sigma);
  virtual ~EvaluationOracle() = default;

  /// One sample at `x` for level `level` on cells of size `h`, and the
  /// charged cost M(h). Throws DomainError when x is outside the closed domain.
  Evaluation evaluate(std::span<const double> x, int level, double h, const StreamKey& key) const;

  const Domain& domain() const { return domain_; }
  const CostSchedule& cost_schedule() const { return schedule_; }
  double beta() const { return schedule_.beta; }
  /// Noise scale; reported only, never used by the algorithm.
  double sigma() const { return sigma_; }

 protected:
  virtual double sample(std::span<const double> x, int level, double h, const StreamKey& key) const = 0;

 private:
  Domain domain_;
  CostSchedule schedule_;
  double sigma_;
};

/// Exact evaluation, sigma = 0.
class DeterministicOracle final : public EvaluationOracle {
 public:
  DeterministicOracle(Domain domain, std::shared_ptr<const ScalarField> f, CostSchedule schedule = {});

 protected:
  double sample(std::span<const double> x, int level, double h, const StreamKey& key) const override;

 private:
  std::shared_ptr<const ScalarField> f_;
};

/// Per-level noise variance v0 * 2^(-rate * level).
struct GeometricVariance {
  double v0 = 0.0;
  double rate = 2.0;

  double operator()(int level) const;
};

/// f(x) + z with z ~ N(0, variance(level)). Charges M(h) while drawing a
/// single Gaussian, modelling the averaged Monte Carlo estimator.
class GaussianNoiseOracle final : public EvaluationOracle {
 public:
  GaussianNoiseOracle(Domain domain, std::shared_ptr<const ScalarField> f, std::function<double(int)> variance_at,
                      CostSchedule schedule);

  double variance_at(int level) const { return variance_at_(level); }

 protected:
  double sample(std::span<const double> x, int level, double h, const StreamKey& key) const override;

 private:
  std::shared_ptr<const ScalarField> f_;
  std::function<double(int)> variance_at_;
};

/// Mean of round(M(h)) i.i.d. draws g(x, stream). The cost schedule must keep
/// M(h) below `max_draws`.
class MonteCarloOracle final : public EvaluationOracle {
 public:
  using Sampler = std::function<double(std::span<const double>, RandomStream&)>;

  MonteCarloOracle(Domain domain, Sampler sampler, CostSchedule schedule, double sigma = 1.0,
                   double max_draws = 1e9);

  std::uint64_t draws_at(double h) const;

 protected:
  double sample(std::span<const double> x, int level, double h, const StreamKey& key) const override;

 private:
  Sampler sampler_;
  double max_draws_;
};

}  // namespace lse
