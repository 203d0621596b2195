// SPDX-License-Identifier: Apache-2.0
#include "lse/refine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "lse/approx.hpp"
#include "lse/error.hpp"
#include "lse/parallel.hpp"

namespace lse {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Snaps values within 1e-9 of an integer before rounding up, so that
// e.g. 6 * (1 - 1/1.5) = 2.0000000000000004 gives 2.
int snapped_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

}  // namespace

double moment_adjusted_rate(double alpha, double p) {
  if (std::isinf(p)) return alpha;
  return alpha * p / (p + 1.0);
}

double RunConfig::alpha_p() const { return moment_adjusted_rate(alpha, p); }

double RunConfig::strictness() const { return R ? *R : (1.0 + alpha_p()) / 2.0; }

void RunConfig::validate() const {
  if (domain.dim() < 1) throw ConfigError("config: domain is missing");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("config: alpha must be positive and finite");
  if (!(beta > 0.0)) throw ConfigError("config: beta must be positive (or inf)");
  if (!(p >= 1.0)) throw ConfigError("config: p must satisfy p >= 1 (or inf)");
  const double bound = std::isinf(p) ? 1.0 : (p + 1.0) / p;
  if (!(alpha > bound)) {
    throw ConfigError("config: alpha = " + fmt(alpha) + " must exceed (p+1)/p = " + fmt(bound));
  }
  const double r = strictness();
  if (!(r > 1.0 && r < alpha_p())) {
    throw ConfigError("config: R = " + fmt(r) + " must satisfy 1 < R < alpha_p = " + fmt(alpha_p()));
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("config: c must be positive and finite");
  if (!(M0 > 0.0) || !std::isfinite(M0)) throw ConfigError("config: M0 must be positive and finite");
  if (L < 0) throw ConfigError("config: L must be nonnegative");
  if (h_ell0 && !(*h_ell0 > 0.0)) throw ConfigError("config: h_ell0 must be positive");
  const Grid grid(domain, h0);
  for (int k = 0; k < grid.dim(); ++k) {
    if (L > 24 || (grid.base_count(k) << L) > std::numeric_limits<std::int32_t>::max()) {
      throw ConfigError("config: L = " + std::to_string(L) + " overflows the cell index range on axis " +
                        std::to_string(k));
    }
  }
}

std::string RunConfig::first_difference_ignoring_level(const RunConfig& o) const {
  if (!(domain == o.domain)) return "domain";
  if (h0 != o.h0) return "h0";
  if (alpha != o.alpha) return "alpha";
  if (beta != o.beta) return "beta";
  if (p != o.p) return "p";
  if (strictness() != o.strictness()) return "R";
  if (c != o.c) return "c";
  if (M0 != o.M0) return "M0";
  if (seed != o.seed) return "seed";
  if (h_ell0 != o.h_ell0) return "h_ell0";
  if (mode != o.mode) return "refinement";
  return {};
}

int base_level(int L, double p, double R, double alpha_p) {
  if (!(R > 1.0 && R < alpha_p)) {
    throw ConfigError("base_level: R = " + fmt(R) + " must satisfy 1 < R < alpha_p = " + fmt(alpha_p));
  }
  if (L < 1) throw RangeError("base_level: L must be at least 1");
  const double q = std::isinf(p) ? 1.0 : p / (p + 1.0);
  return std::max(0, snapped_ceil(L * (1.0 - q / R)));
}

int initial_level(const RunConfig& cfg) {
  if (cfg.L == 0) return 0;
  if (cfg.h_ell0) {
    int l = 0;
    while (l < cfg.L && std::ldexp(cfg.h0, -l) > *cfg.h_ell0 * (1.0 + 1e-12)) ++l;
    return l;
  }
  return std::min(cfg.L, base_level(cfg.L, cfg.p, cfg.strictness(), cfg.alpha_p()));
}

double refinement_threshold(int level, const RunConfig& cfg, int ell0) {
  if (level < ell0 || level >= cfg.L) {
    throw RangeError("refinement_threshold: level " + std::to_string(level) + " outside [" + std::to_string(ell0) +
                     ", " + std::to_string(cfg.L) + ")");
  }
  const double ap = cfg.alpha_p();
  const double r = cfg.strictness();
  const double h = std::ldexp(cfg.h0, -level);
  const double hL = std::ldexp(cfg.h0, -cfg.L);
  const double h0l = std::ldexp(cfg.h0, -ell0);
  return cfg.c * std::pow(h, ap / r) * std::pow(hL, ap * (r - 1.0) / r) * std::pow(h0l, -ap / r) *
         std::pow(h, -cfg.alpha);
}

void WorkLedger::add(const LevelTally& t) {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), t.level,
                             [](const LevelTally& a, int l) { return a.level < l; });
  if (it == levels_.end() || it->level != t.level) {
    levels_.insert(it, t);
    return;
  }
  if (it->cost_per_eval != t.cost_per_eval || it->sampled != t.sampled) {
    throw StateError("work ledger: inconsistent tallies for level " + std::to_string(t.level));
  }
  it->cells_visited += t.cells_visited;
  it->cells_refined += t.cells_refined;
  it->evaluations += t.evaluations;
}

void WorkLedger::merge(const WorkLedger& other) {
  for (const auto& t : other.levels_) add(t);
}

const LevelTally* WorkLedger::level(int l) const {
  for (const auto& t : levels_) {
    if (t.level == l) return &t;
  }
  return nullptr;
}

double WorkLedger::total_cost() const {
  double total = 0.0;
  for (const auto& t : levels_) total += t.cost();
  return total;
}

std::uint64_t WorkLedger::total_evaluations() const {
  std::uint64_t n = 0;
  for (const auto& t : levels_) n += t.evaluations;
  return n;
}

namespace {

// Samples already paid for by an earlier segment, keyed by cell.
class PriorSamples {
 public:
  void add_mesh(const AdaptiveMesh& mesh) {
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const Cell& c = mesh.cells()[i];
      values_.emplace(c, mesh.vertex_values(i));
      bump(c.level, 1);
    }
  }
  void add_charged(int level, std::uint64_t n) { bump(level, n); }

  const std::span<const double>* find(const Cell& c) const {
    auto it = values_.find(c);
    return it == values_.end() ? nullptr : &it->second;
  }
  std::uint64_t paid_at(int level) const {
    return level < static_cast<int>(paid_.size()) ? paid_[static_cast<std::size_t>(level)] : 0;
  }

 private:
  void bump(int level, std::uint64_t n) {
    if (paid_.size() <= static_cast<std::size_t>(level)) paid_.resize(static_cast<std::size_t>(level) + 1, 0);
    paid_[static_cast<std::size_t>(level)] += n;
  }

  std::unordered_map<Cell, std::span<const double>, CellHash> values_;
  std::vector<std::uint64_t> paid_;
};

void append_values(std::vector<double>& dst, const double* src, std::size_t n) { dst.insert(dst.end(), src, src + n); }

RunResult sweep(const RunConfig& cfg, const EvaluationOracle& oracle, const RunOptions& opts,
                const PriorSamples* prior) {
  cfg.validate();
  if (!(oracle.domain() == cfg.domain)) throw ConfigError("run: oracle domain differs from the configured domain");
  if (!(oracle.cost_schedule() == cfg.cost_schedule())) {
    throw ConfigError("run: oracle cost schedule (M0, alpha, beta) differs from the configuration");
  }

  const Grid grid(cfg.domain, cfg.h0);
  const int d = grid.dim();
  const std::size_t nv = static_cast<std::size_t>(grid.vertices_per_cell());
  const int ell0 = initial_level(cfg);
  const CostSchedule schedule = cfg.cost_schedule();
  const auto lower = cfg.domain.lower();

  RunResult result;
  result.config = cfg;
  result.replicate = opts.replicate;
  result.ell0 = ell0;
  result.has_history = opts.keep_history;

  // Uniform phase: charged, never sampled.
  for (int k = 0; k < ell0; ++k) {
    const std::uint64_t n = grid.cell_count(k);
    const LevelTally t{k, n, n, n * nv, schedule.cost_per_eval(grid.cell_size(k)), false};
    result.ledger.add(t);
    if (prior) {
      const std::uint64_t fresh = n - std::min(n, prior->paid_at(k));
      result.segment_ledger.add({k, fresh, fresh, fresh * nv, t.cost_per_eval, false});
    }
  }

  std::vector<Cell> active;
  {
    const AdaptiveMesh base = uniform_tessellation(cfg.domain, ell0, cfg.h0);
    active.assign(base.cells().begin(), base.cells().end());
  }
  std::vector<Cell> leaves, inner;
  std::vector<double> leaf_values, inner_values;

  for (int level = ell0; level <= cfg.L; ++level) {
    const bool last = level == cfg.L;
    const double h = grid.cell_size(level);
    const double threshold =
        (last || cfg.mode == RefinementMode::kUniform) ? kInfinity : refinement_threshold(level, cfg, ell0);

    std::vector<double> values(active.size() * nv);
    std::vector<std::uint8_t> refine(active.size(), 0);
    std::vector<std::uint8_t> reused(active.size(), 0);

    parallel_for(active.size(), opts.workers, [&](std::size_t begin, std::size_t end) {
      std::array<double, kMaxDim> x{};
      for (std::size_t i = begin; i < end; ++i) {
        const Cell& cell = active[i];
        double* v = values.data() + i * nv;
        if (prior) {
          if (const auto* known = prior->find(cell)) {
            std::copy(known->begin(), known->end(), v);
            reused[i] = 1;
          }
        }
        if (!reused[i]) {
          StreamKey key{cfg.seed, opts.replicate, StreamPurpose::kVertexSample, cell, 0};
          for (std::size_t vtx = 0; vtx < nv; ++vtx) {
            for (int k = 0; k < d; ++k) {
              x[k] = lower[k] + static_cast<double>(cell.index[k] + static_cast<std::int32_t>((vtx >> k) & 1)) * h;
            }
            key.vertex = static_cast<std::uint32_t>(vtx);
            v[vtx] = oracle.evaluate({x.data(), static_cast<std::size_t>(d)}, level, h, key).value;
          }
        }
        if (!last) refine[i] = decision_variable({v, nv}, h, cfg.alpha).value <= threshold;
      }
    });

    const std::uint64_t visited = active.size();
    std::uint64_t refined = 0, n_reused = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      refined += refine[i];
      n_reused += reused[i];
    }
    const double cost = schedule.cost_per_eval(h);
    result.ledger.add({level, visited, refined, visited * nv, cost, true});
    if (prior) result.segment_ledger.add({level, visited - n_reused, 0, (visited - n_reused) * nv, cost, true});

    if (refined == 0 && leaves.empty()) {
      leaves = std::move(active);
      leaf_values = std::move(values);
      active.clear();
      break;
    }
    std::vector<Cell> next;
    next.reserve(refined << d);
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Cell& cell = active[i];
      const double* v = values.data() + i * nv;
      if (!refine[i]) {
        leaves.push_back(cell);
        append_values(leaf_values, v, nv);
        continue;
      }
      if (opts.keep_history) {
        inner.push_back(cell);
        append_values(inner_values, v, nv);
      }
      for (std::size_t ch = 0; ch < (std::size_t{1} << d); ++ch) {
        Cell child;
        child.level = cell.level + 1;
        for (int k = 0; k < d; ++k) child.index[k] = 2 * cell.index[k] + static_cast<std::int32_t>((ch >> k) & 1);
        next.push_back(child);
      }
    }
    active = std::move(next);
  }

  result.mesh = AdaptiveMesh(grid, std::move(leaves), std::move(leaf_values));
  result.mesh.sort_canonical();
  if (opts.keep_history) {
    result.history = AdaptiveMesh(grid, std::move(inner), std::move(inner_values));
    result.history.sort_canonical();
  } else {
    result.history = AdaptiveMesh(grid, {});
  }
  if (!prior) result.segment_ledger = result.ledger;
  return result;
}

}  // namespace

RunResult run_adaptive(const RunConfig& cfg, const EvaluationOracle& oracle, const RunOptions& opts) {
  return sweep(cfg, oracle, opts, nullptr);
}

RunResult resume(const RunResult& previous, int new_L, const RunConfig& cfg, const EvaluationOracle& oracle,
                 const RunOptions& opts) {
  if (const std::string diff = cfg.first_difference_ignoring_level(previous.config); !diff.empty()) {
    throw ConfigError("resume: configuration differs from the previous run in '" + diff + "'");
  }
  if (new_L < previous.config.L) {
    throw ConfigError("resume: new L = " + std::to_string(new_L) + " is below the previous L = " +
                      std::to_string(previous.config.L));
  }
  if (new_L == previous.config.L) {
    RunResult same = previous;
    same.segment_ledger = WorkLedger{};
    return same;
  }
  if (!previous.has_history) throw StateError("resume: previous run was made without history");

  PriorSamples prior;
  prior.add_mesh(previous.mesh);
  prior.add_mesh(previous.history);
  for (const auto& t : previous.ledger.levels()) {
    if (!t.sampled) prior.add_charged(t.level, t.cells_visited);
  }
  RunConfig next = previous.config;
  next.L = new_L;
  RunOptions o = opts;
  o.replicate = previous.replicate;
  return sweep(next, oracle, o, &prior);
}

}  // namespace lse
