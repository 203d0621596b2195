// SPDX-License-Identifier: Apache-2.0
#include "lse/oracle.hpp"

#include <cmath>
#include <sstream>

#include "lse/error.hpp"

namespace lse {

void CostSchedule::validate() const {
  if (!(M0 > 0.0) || !std::isfinite(M0)) throw ConfigError("cost schedule: M0 must be positive and finite");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("cost schedule: alpha must be positive and finite");
  if (!(beta > 0.0)) throw ConfigError("cost schedule: beta must be positive (or infinite)");
}

double CostSchedule::cost_per_eval(double h) const {
  if (!(h > 0.0)) throw DomainError("cost_per_eval: cell size must be positive");
  if (std::isinf(beta)) return M0;
  return M0 * std::pow(h, -alpha / beta);
}

EvaluationOracle::EvaluationOracle(Domain domain, CostSchedule schedule, double sigma)
    : domain_(std::move(domain)), schedule_(schedule), sigma_(sigma) {
  schedule_.validate();
}

Evaluation EvaluationOracle::evaluate(std::span<const double> x, int level, double h, const StreamKey& key) const {
  if (!domain_.contains(x, 1e-12)) {
    std::ostringstream os;
    os << "oracle: point (";
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << ") lies outside the domain";
    throw DomainError(os.str());
  }
  return {sample(x, level, h, key), schedule_.cost_per_eval(h)};
}

DeterministicOracle::DeterministicOracle(Domain domain, std::shared_ptr<const ScalarField> f, CostSchedule schedule)
    : EvaluationOracle(std::move(domain), schedule, 0.0), f_(std::move(f)) {}

double DeterministicOracle::sample(std::span<const double> x, int, double, const StreamKey&) const {
  return f_->value(x);
}

double GeometricVariance::operator()(int level) const { return v0 * std::exp2(-rate * level); }

GaussianNoiseOracle::GaussianNoiseOracle(Domain domain, std::shared_ptr<const ScalarField> f,
                                         std::function<double(int)> variance_at, CostSchedule schedule)
    : EvaluationOracle(std::move(domain), schedule, std::sqrt(std::max(0.0, variance_at(0)))),
      f_(std::move(f)),
      variance_at_(std::move(variance_at)) {}

double GaussianNoiseOracle::sample(std::span<const double> x, int level, double, const StreamKey& key) const {
  const double var = variance_at_(level);
  if (!(var >= 0.0)) throw ConfigError("gaussian oracle: negative variance at level " + std::to_string(level));
  RandomStream stream(key);
  return f_->value(x) + std::sqrt(var) * stream.normal();
}

MonteCarloOracle::MonteCarloOracle(Domain domain, Sampler sampler, CostSchedule schedule, double sigma,
                                   double max_draws)
    : EvaluationOracle(std::move(domain), schedule, sigma), sampler_(std::move(sampler)), max_draws_(max_draws) {}

std::uint64_t MonteCarloOracle::draws_at(double h) const {
  const double m = std::round(cost_schedule().cost_per_eval(h));
  if (!(m >= 1.0) || m > max_draws_) {
    std::ostringstream os;
    os << "monte carlo oracle: M = " << m << " draws per evaluation is outside [1, " << max_draws_ << "]";
    throw ConfigError(os.str());
  }
  return static_cast<std::uint64_t>(m);
}

double MonteCarloOracle::sample(std::span<const double> x, int, double h, const StreamKey& key) const {
  const std::uint64_t m = draws_at(h);
  RandomStream stream(key);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < m; ++i) sum += sampler_(x, stream);
  return sum / static_cast<double>(m);
}

}  // namespace lse
