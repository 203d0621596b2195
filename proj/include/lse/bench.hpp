// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lse/functions.hpp"
#include "lse/metrics.hpp"
#include "lse/oracle.hpp"
#include "lse/refine.hpp"

namespace lse {

/// Smallest L with h0 2^-L <= eps^(1/alpha_p). RangeError unless eps > 0.
int level_for_tolerance(double eps, const RunConfig& cfg);

/// A ready-made test problem: configuration (L left at 1), truth and oracle.
struct Experiment {
  std::string name;
  RunConfig cfg;
  std::shared_ptr<const ScalarField> truth;
  std::shared_ptr<const EvaluationOracle> oracle;
  /// Gaussian noise variance per level; v0 = 0 for the deterministic case.
  GeometricVariance noise;
  int n_runs = 1;
  std::size_t n_points = 512;
};

/// Drop-wave on [-5,5]^2 with 64 base cells per axis (h0 = 10/64). The noisy
/// variant adds Gaussian noise of variance 2^(-2(l+6)) and charges
/// M_l = 2^(4(l+6)) (alpha = 2, beta = 1/2, p = inf); the deterministic
/// variant has beta = inf and M0 = 1.
Experiment drop_wave_experiment(bool noisy = true);

/// Styblinski-Tang on [-5,5]^3 with 4 base cells per axis (h0 = 2.5),
/// noise variance 2^(-2(l+2))/3 and M_l = 2^(4(l+2)) when noisy.
Experiment styblinski_tang_experiment(bool noisy = true);

struct SweepRow {
  int L = 0;
  int ell0 = 0;
  double h_L = 0.0;
  double error_mean = 0.0;
  double error_std_error = 0.0;
  double work_total = 0.0;
  double leaf_cells = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Slope of log(work) against log(mean error) over rows with positive
  /// error; NaN when fewer than two such rows.
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  double target_slope = 0.0;
  /// Slope of log(mean error) against log(h_L).
  double error_vs_h_slope = 0.0;
  PointFamily point_family = PointFamily::kScrambledSobol;
  int n_runs = 0;
  std::size_t n_points = 0;
};

/// -(1/beta + (d-1)/alpha_p) for adaptive refinement, -(1/beta + d/alpha_p)
/// for the uniform baseline.
double target_complexity_slope(const RunConfig& cfg);

/// Runs `expected_error` for every L (ascending) and fits the complexity
/// slope. RangeError for an empty or non-ascending list.
SweepResult convergence_sweep(const RunConfig& base, const EvaluationOracle& oracle, const ScalarField& truth,
                              std::span<const int> L_values, int n_runs, const ErrorOptions& opts = {},
                              int workers = 1);

}  // namespace lse
