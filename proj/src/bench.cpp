// SPDX-License-Identifier: Apache-2.0
#include "lse/bench.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "lse/error.hpp"

namespace lse {

int level_for_tolerance(double eps, const RunConfig& cfg) {
  if (!(eps > 0.0)) throw RangeError("level_for_tolerance: eps must be positive");
  const double target = std::pow(eps, 1.0 / cfg.alpha_p());
  int L = 0;
  while (std::ldexp(cfg.h0, -L) > target) {
    if (++L > 60) throw RangeError("level_for_tolerance: eps too small");
  }
  return L;
}

namespace {

Experiment make_experiment(std::string name, std::shared_ptr<const ScalarField> f, Domain domain, double h0,
                           double v0, bool noisy, int n_runs) {
  Experiment e;
  e.name = std::move(name);
  e.truth = std::move(f);
  e.cfg.domain = std::move(domain);
  e.cfg.h0 = h0;
  e.cfg.L = 1;
  e.cfg.alpha = 2.0;
  e.cfg.p = kInfinity;
  if (noisy) {
    // M_l = (h_l / 10)^-4 with h in domain units, i.e. 2^(4(l+k)).
    e.cfg.beta = 0.5;
    e.cfg.M0 = 1e4;
    e.noise = {v0, 2.0};
    e.oracle = std::make_shared<GaussianNoiseOracle>(e.cfg.domain, e.truth, e.noise, e.cfg.cost_schedule());
    e.n_runs = n_runs;
  } else {
    e.cfg.beta = kInfinity;
    e.cfg.M0 = 1.0;
    e.oracle = std::make_shared<DeterministicOracle>(e.cfg.domain, e.truth, e.cfg.cost_schedule());
    e.n_runs = 1;
  }
  return e;
}

}  // namespace

Experiment drop_wave_experiment(bool noisy) {
  return make_experiment("drop_wave", std::make_shared<DropWave>(), Domain({-5.0, -5.0}, {5.0, 5.0}), 10.0 / 64.0,
                         std::ldexp(1.0, -12), noisy, 10);
}

Experiment styblinski_tang_experiment(bool noisy) {
  return make_experiment("styblinski_tang", std::make_shared<StyblinskiTang>(3),
                         Domain({-5.0, -5.0, -5.0}, {5.0, 5.0, 5.0}), 2.5, std::ldexp(1.0, -4) / 3.0, noisy, 32);
}

double target_complexity_slope(const RunConfig& cfg) {
  const double d = cfg.domain.dim();
  const double inv_beta = std::isinf(cfg.beta) ? 0.0 : 1.0 / cfg.beta;
  const double cells = cfg.mode == RefinementMode::kUniform ? d : d - 1.0;
  return -(inv_beta + cells / cfg.alpha_p());
}

SweepResult convergence_sweep(const RunConfig& base, const EvaluationOracle& oracle, const ScalarField& truth,
                              std::span<const int> L_values, int n_runs, const ErrorOptions& opts, int workers) {
  if (L_values.empty()) throw RangeError("sweep: L_range is empty");
  for (std::size_t i = 1; i < L_values.size(); ++i) {
    if (L_values[i] <= L_values[i - 1]) throw RangeError("sweep: L_range must be strictly ascending");
  }
  SweepResult out;
  out.point_family = opts.family;
  out.n_runs = n_runs;
  out.n_points = opts.n_points;
  out.target_slope = target_complexity_slope(base);
  std::vector<std::pair<double, double>> work_vs_error, error_vs_h;
  for (int L : L_values) {
    RunConfig cfg = base;
    cfg.L = L;
    const ExpectedError ee = expected_error(cfg, oracle, truth, n_runs, opts, workers);
    SweepRow row;
    row.L = L;
    row.ell0 = ee.ell0;
    row.h_L = std::ldexp(cfg.h0, -L);
    row.error_mean = ee.estimate.mean;
    row.error_std_error = ee.estimate.std_error;
    row.work_total = ee.mean_work;
    row.leaf_cells = ee.mean_leaf_cells;
    out.rows.push_back(row);
    if (row.error_mean > 0.0) {
      work_vs_error.emplace_back(row.error_mean, row.work_total);
      error_vs_h.emplace_back(row.h_L, row.error_mean);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.fitted_slope = out.fitted_intercept = out.error_vs_h_slope = nan;
  if (work_vs_error.size() >= 2) {
    const LogLogFit fit = fit_loglog_slope(work_vs_error);
    out.fitted_slope = fit.slope;
    out.fitted_intercept = fit.intercept;
    out.error_vs_h_slope = fit_loglog_slope(error_vs_h).slope;
  }
  return out;
}

}  // namespace lse
