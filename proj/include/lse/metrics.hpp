// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lse/functions.hpp"
#include "lse/grid.hpp"
#include "lse/qmc.hpp"
#include "lse/refine.hpp"

namespace lse {

/// n points in the closed cell, a deterministic function of (family, key).
PointSet generate_cell_points(const Grid& grid, const Cell& cell, std::size_t n, const StreamKey& key,
                              PointFamily family = PointFamily::kScrambledSobol);

struct ErrorOptions {
  std::size_t n_points = 512;
  PointFamily family = PointFamily::kScrambledSobol;
  /// Seed and replicate of the error points; each cell uses its own stream.
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  int workers = 1;
};

/// Per-leaf estimates of vol(cell) * P(sign f != sign f^) over the cell, in
/// mesh order. f <= 0 counts as inside for both functions.
std::vector<double> cell_mismatch_errors(const AdaptiveMesh& mesh, const ScalarField& truth,
                                         const ErrorOptions& opts = {});

/// Estimated volume of the region where truth and approximant disagree in
/// sign: the per-cell estimates summed in mesh order. StateError when the
/// mesh carries no approximants.
double sign_mismatch_error(const AdaptiveMesh& mesh, const ScalarField& truth, const ErrorOptions& opts = {});

struct ErrorEstimate {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(n_runs); NaN when n_runs < 2.
  double std_error = 0.0;
  int n_runs = 0;
  std::size_t points_per_cell = 0;
};

ErrorEstimate summarize_errors(std::span<const double> errors, std::size_t points_per_cell);

struct ReplicateOutcome {
  double error = 0.0;
  double total_work = 0.0;
  std::size_t leaf_cells = 0;
};

struct ExpectedError {
  ErrorEstimate estimate;
  double mean_work = 0.0;
  double mean_leaf_cells = 0.0;
  int ell0 = 0;
  std::vector<ReplicateOutcome> runs;
};

/// Mean and standard error of the sign-mismatch error over `n_runs`
/// independent runs of the algorithm: replicate r uses stream replicate r for
/// both the oracle samples and the error points.
ExpectedError expected_error(const RunConfig& cfg, const EvaluationOracle& oracle, const ScalarField& truth,
                             int n_runs, const ErrorOptions& opts = {}, int workers = 1);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (log x, log y). DomainError for nonpositive
/// entries, RangeError for fewer than two pairs or constant x.
LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> pairs);

}  // namespace lse
