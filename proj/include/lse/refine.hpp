// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lse/grid.hpp"
#include "lse/oracle.hpp"

namespace lse {

enum class RefinementMode {
  kAdaptive,  ///< refine iff delta^ <= a_l
  kUniform,   ///< refine every visited cell (non-adaptive baseline)
};

/// Parameters of one adaptive run. Infinite beta is the deterministic case,
/// infinite p the limit alpha_p = alpha.
struct RunConfig {
  Domain domain;
  double h0 = 1.0;
  int L = 1;
  double alpha = 2.0;
  double beta = kInfinity;
  double p = kInfinity;
  /// Strictness of refinement; defaults to (1 + alpha_p) / 2.
  std::optional<double> R;
  double c = 1.0;
  double M0 = 1.0;
  std::uint64_t seed = 0;
  /// Optional base cell size overriding the default choice of l0.
  std::optional<double> h_ell0;
  RefinementMode mode = RefinementMode::kAdaptive;

  double alpha_p() const;
  double strictness() const;
  CostSchedule cost_schedule() const { return {M0, alpha, beta}; }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  /// Name of the first field that differs, ignoring L; empty when none.
  std::string first_difference_ignoring_level(const RunConfig& other) const;
};

/// alpha * p / (p + 1), or alpha for p = inf.
double moment_adjusted_rate(double alpha, double p);

/// ceil(L (1 - p / (R (p + 1)))). Values within 1e-9 of an integer are
/// snapped before taking the ceiling. ConfigError unless 1 < R < alpha_p.
int base_level(int L, double p, double R, double alpha_p);

/// The level l0 used by a run: `base_level`, or the first level whose cell
/// size is at most `cfg.h_ell0` when that override is set.
int initial_level(const RunConfig& cfg);

/// a_l = c h_l^(alpha_p/R) h_L^(alpha_p (R-1)/R) h_l0^(-alpha_p/R) h_l^(-alpha)
/// with h_l = h0 2^-l. RangeError unless l0 <= level < L.
double refinement_threshold(int level, const RunConfig& cfg, int ell0);

struct LevelTally {
  int level = 0;
  std::uint64_t cells_visited = 0;
  std::uint64_t cells_refined = 0;
  std::uint64_t evaluations = 0;
  double cost_per_eval = 0.0;
  /// False for levels below l0, which are charged but never sampled.
  bool sampled = true;

  double cost() const { return static_cast<double>(evaluations) * cost_per_eval; }

  friend bool operator==(const LevelTally&, const LevelTally&) = default;
};

/// Exact tally of the work recursion: every visited cell contributes
/// N * M_l. Counts are integers, so merging partial tallies is
/// order-independent.
class WorkLedger {
 public:
  /// Adds counts into the slot of `t.level`; the cost per evaluation of an
  /// existing slot must match.
  void add(const LevelTally& t);
  void merge(const WorkLedger& other);

  std::span<const LevelTally> levels() const { return levels_; }
  const LevelTally* level(int l) const;
  /// Sum of per-level costs in ascending level order.
  double total_cost() const;
  std::uint64_t total_evaluations() const;

  friend bool operator==(const WorkLedger&, const WorkLedger&) = default;

 private:
  std::vector<LevelTally> levels_;  // sorted by level
};

struct RunOptions {
  int workers = 1;
  /// Independent replicate of the run; part of every stream key.
  std::uint64_t replicate = 0;
  /// Keep refined cells and their approximants (needed to resume).
  bool keep_history = true;
};

struct RunResult {
  RunConfig config;
  std::uint64_t replicate = 0;
  int ell0 = 0;
  /// Leaf cells with the approximant from the level they were visited at.
  AdaptiveMesh mesh;
  /// Cells that were visited and refined, with their approximants.
  AdaptiveMesh history;
  bool has_history = false;
  WorkLedger ledger;
  /// Work newly paid by this call; equals `ledger` for a fresh run and
  /// excludes evaluations reused from the previous segment on resume.
  WorkLedger segment_ledger;
};

/// Adaptive refinement sweep: uniform refinement to l0, then for
/// l = l0..L-1 every cell of size h_l is sampled at its 2^d vertices, fitted
/// and refined iff delta^ <= a_l; cells reaching L are sampled at level L.
RunResult run_adaptive(const RunConfig& cfg, const EvaluationOracle& oracle, const RunOptions& opts = {});

/// Extends a finished run to `new_L`. Thresholds depend on L, so the sweep is
/// replayed with the new thresholds; every (cell, level) sample already paid
/// for is reused instead of re-evaluated. The result equals a fresh run at
/// `new_L` with the same seed and replicate.
RunResult resume(const RunResult& previous, int new_L, const RunConfig& cfg, const EvaluationOracle& oracle,
                 const RunOptions& opts = {});

}  // namespace lse
