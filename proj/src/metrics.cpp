// SPDX-License-Identifier: Apache-2.0
#include "lse/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "lse/error.hpp"
#include "lse/kernels/kernels.hpp"
#include "lse/parallel.hpp"

namespace lse {

namespace {

StreamKey error_key(const ErrorOptions& opts, const Cell& cell) {
  return {opts.seed, opts.replicate, StreamPurpose::kErrorPoints, cell, 0};
}

// Scratch buffers of one worker, laid out as structure of arrays.
struct Scratch {
  explicit Scratch(int dim, std::size_t n) : t(dim * n), x(dim * n), approx(n), truth(n) {
    for (int k = 0; k < dim; ++k) {
      tp[k] = t.data() + k * n;
      xp[k] = x.data() + k * n;
    }
  }
  std::vector<double> t, x, approx, truth;
  std::array<double*, kMaxDim> tp{}, xp{};
};

}  // namespace

PointSet generate_cell_points(const Grid& grid, const Cell& cell, std::size_t n, const StreamKey& key,
                              PointFamily family) {
  if (n < 1) throw RangeError("generate_cell_points: n must be at least 1");
  const int d = grid.dim();
  Scratch s(d, n);
  unit_points(family, d, n, key, s.tp.data());
  const CellBox box = grid.box(cell);
  PointSet points(d, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = points[i];
    for (int k = 0; k < d; ++k) p[k] = box.lower[k] + box.size * s.tp[k][i];
  }
  return points;
}

std::vector<double> cell_mismatch_errors(const AdaptiveMesh& mesh, const ScalarField& truth,
                                         const ErrorOptions& opts) {
  if (!mesh.has_approximants()) throw StateError("sign_mismatch_error: mesh carries no approximants");
  if (opts.n_points < 1) throw RangeError("sign_mismatch_error: n_points must be at least 1");
  const Grid& grid = mesh.grid();
  const int d = grid.dim();
  if (truth.dim() != 0 && truth.dim() != d) {
    throw ArityError("sign_mismatch_error: truth has dimension " + std::to_string(truth.dim()) + ", mesh has " +
                     std::to_string(d));
  }
  const std::size_t n = opts.n_points;
  const auto& k = kernels::active();
  std::vector<double> errors(mesh.size());
  parallel_for(mesh.size(), opts.workers, [&](std::size_t begin, std::size_t end) {
    Scratch s(d, n);
    for (std::size_t i = begin; i < end; ++i) {
      const Cell& cell = mesh.cells()[i];
      unit_points(opts.family, d, n, error_key(opts, cell), s.tp.data());
      const CellBox box = grid.box(cell);
      for (int a = 0; a < d; ++a) k.affine_map(s.tp[a], n, box.lower[a], box.size, s.xp[a]);
      k.multilinear_eval(d, mesh.vertex_values(i).data(), s.tp.data(), n, s.approx.data());
      truth.values(d, s.xp.data(), n, s.truth.data());
      const std::size_t miss = k.count_sign_mismatch(s.truth.data(), s.approx.data(), n);
      errors[i] = box.volume() * static_cast<double>(miss) / static_cast<double>(n);
    }
  });
  return errors;
}

double sign_mismatch_error(const AdaptiveMesh& mesh, const ScalarField& truth, const ErrorOptions& opts) {
  double total = 0.0;
  for (double e : cell_mismatch_errors(mesh, truth, opts)) total += e;
  return total;
}

ErrorEstimate summarize_errors(std::span<const double> errors, std::size_t points_per_cell) {
  ErrorEstimate est;
  est.n_runs = static_cast<int>(errors.size());
  est.points_per_cell = points_per_cell;
  if (errors.empty()) throw RangeError("summarize_errors: no runs");
  double sum = 0.0;
  for (double e : errors) sum += e;
  est.mean = sum / static_cast<double>(errors.size());
  if (errors.size() < 2) {
    est.std_error = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  double ss = 0.0;
  for (double e : errors) ss += (e - est.mean) * (e - est.mean);
  const double n = static_cast<double>(errors.size());
  est.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return est;
}

ExpectedError expected_error(const RunConfig& cfg, const EvaluationOracle& oracle, const ScalarField& truth,
                             int n_runs, const ErrorOptions& opts, int workers) {
  if (n_runs < 1) throw RangeError("expected_error: n_runs must be at least 1");
  ExpectedError out;
  std::vector<double> errors;
  for (int r = 0; r < n_runs; ++r) {
    RunOptions ro;
    ro.workers = workers;
    ro.replicate = static_cast<std::uint64_t>(r);
    ro.keep_history = false;
    const RunResult run = run_adaptive(cfg, oracle, ro);
    ErrorOptions eo = opts;
    eo.seed = cfg.seed;
    eo.replicate = ro.replicate;
    eo.workers = workers;
    const ReplicateOutcome o{sign_mismatch_error(run.mesh, truth, eo), run.ledger.total_cost(), run.mesh.size()};
    out.runs.push_back(o);
    errors.push_back(o.error);
    out.mean_work += o.total_work;
    out.mean_leaf_cells += static_cast<double>(o.leaf_cells);
    out.ell0 = run.ell0;
  }
  out.mean_work /= n_runs;
  out.mean_leaf_cells /= n_runs;
  out.estimate = summarize_errors(errors, opts.n_points);
  return out;
}

LogLogFit fit_loglog_slope(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw RangeError("fit_loglog_slope: need at least two pairs");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pairs) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("fit_loglog_slope: entries must be positive");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pairs) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw RangeError("fit_loglog_slope: all x values are equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace lse
