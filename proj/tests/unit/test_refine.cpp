// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>

#include "lse/approx.hpp"
#include "lse/bench.hpp"
#include "lse/error.hpp"
#include "lse/metrics.hpp"
#include "lse/refine.hpp"

using namespace lse;

namespace {

RunConfig unit_config(int L) {
  RunConfig cfg;
  cfg.domain = Domain({-1, -1}, {1, 1});
  cfg.h0 = 0.5;
  cfg.L = L;
  return cfg;
}

// Recomputes the charged cost from the mesh history: every visited cell at
// level l costs 2^d M_l, and the uniform phase charges every cell of the
// level-l tessellation for l < l0.
double recomputed_cost(const RunResult& r) {
  const Grid grid(r.config.domain, r.config.h0);
  const CostSchedule s = r.config.cost_schedule();
  const std::uint64_t nv = static_cast<std::uint64_t>(grid.vertices_per_cell());
  std::map<int, std::uint64_t> evals;
  for (int l = 0; l < r.ell0; ++l) evals[l] += grid.cell_count(l) * nv;
  for (const Cell& c : r.mesh.cells()) evals[c.level] += nv;
  for (const Cell& c : r.history.cells()) evals[c.level] += nv;
  double total = 0.0;
  for (const auto& [l, n] : evals) total += static_cast<double>(n) * s.cost_per_eval(grid.cell_size(l));
  return total;
}

}  // namespace

TEST_SUITE("refine") {
  TEST_CASE("base level examples") {
    CHECK(base_level(6, kInfinity, 1.5, 2.0) == 2);
    CHECK(base_level(7, 2.0, 7.0 / 6.0, moment_adjusted_rate(2.0, 2.0)) == 3);
    for (int L = 1; L <= 12; ++L) CHECK(base_level(L, kInfinity, 2.0 - 1e-12, 2.0) == (L + 1) / 2);
    CHECK_THROWS_AS(base_level(6, kInfinity, 2.0, 2.0), ConfigError);
    CHECK_THROWS_AS(base_level(6, kInfinity, 1.0, 2.0), ConfigError);
    CHECK(moment_adjusted_rate(2.0, kInfinity) == 2.0);
    CHECK(moment_adjusted_rate(3.0, 2.0) == 2.0);
  }

  TEST_CASE("refinement threshold examples") {
    RunConfig cfg = unit_config(6);
    cfg.h0 = 1.0;
    cfg.domain = Domain({0, 0}, {1, 1});
    CHECK(cfg.strictness() == 1.5);
    const int ell0 = initial_level(cfg);
    REQUIRE(ell0 == 2);
    CHECK(refinement_threshold(2, cfg, ell0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(refinement_threshold(3, cfg, ell0) == doctest::Approx(std::exp2(2.0 / 3.0)).epsilon(1e-13));
    RunConfig c2 = cfg;
    c2.c = 2.0;
    for (int l = 2; l < 6; ++l) CHECK(refinement_threshold(l, c2, 2) == doctest::Approx(2 * refinement_threshold(l, cfg, 2)));
    CHECK_THROWS_AS(refinement_threshold(1, cfg, ell0), RangeError);
    CHECK_THROWS_AS(refinement_threshold(6, cfg, ell0), RangeError);
  }

  TEST_CASE("configuration validation names the violated parameter") {
    RunConfig cfg = unit_config(4);
    cfg.R = 2.5;
    try {
      cfg.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("R = 2.5") != std::string::npos);
    }
    cfg.R.reset();
    cfg.alpha = 1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha"), ConfigError);
    cfg.alpha = 1.4;
    cfg.p = 2.0;  // (p+1)/p = 1.5
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha"), ConfigError);
    cfg = unit_config(4);
    cfg.c = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("c must"), ConfigError);
  }

  TEST_CASE("function without zero set stays at the base level") {
    const RunConfig cfg = unit_config(4);
    const DeterministicOracle o(cfg.domain, std::make_shared<ConstantFunction>(1.0));
    const RunResult r = run_adaptive(cfg, o);
    const int ell0 = initial_level(cfg);
    CHECK(r.ell0 == ell0);
    CHECK(r.mesh == [&] {
      AdaptiveMesh m = uniform_tessellation(cfg.domain, ell0, cfg.h0);
      m.set_vertex_values(std::vector<double>(m.size() * 4, 1.0));
      return m;
    }());
    CHECK(r.history.size() == 0);
    // single-level base case: N M per visited cell plus the uniform phase
    const Grid g(cfg.domain, cfg.h0);
    double expected = 0.0;
    for (int l = 0; l < ell0; ++l) expected += static_cast<double>(g.cell_count(l)) * 4;
    expected += static_cast<double>(g.cell_count(ell0)) * 4;
    CHECK(r.ledger.total_cost() == expected);
  }

  TEST_CASE("hyperplane: refined cells touch the zero set, counts grow like 2^l") {
    RunConfig cfg = unit_config(7);
    auto f = std::make_shared<AffineFunction>(std::vector<double>{1.0, 0.0}, 0.0);
    const DeterministicOracle o(cfg.domain, f);
    const RunResult r = run_adaptive(cfg, o);
    const Grid g(cfg.domain, cfg.h0);
    std::map<int, int> refined_at;
    for (const Cell& c : r.history.cells()) {
      const CellBox b = g.box(c);
      // closed box meets x1 = 0
      CHECK(b.lower[0] <= 0.0);
      CHECK(b.lower[0] + b.size >= 0.0);
      ++refined_at[c.level];
    }
    for (int l = r.ell0 + 1; l < cfg.L; ++l) {
      // two columns of cells touch the line at every level
      CHECK(refined_at[l] == 2 * static_cast<int>(g.count_along(1, l)));
    }
    CHECK(validate_partition(r.mesh).ok);
  }

  TEST_CASE("soundness and level bounds on the drop-wave") {
    Experiment e = drop_wave_experiment(false);
    e.cfg.L = 4;
    const RunResult r = run_adaptive(e.cfg, *e.oracle);
    CHECK(validate_partition(r.mesh).ok);
    for (std::size_t i = 0; i < r.mesh.size(); ++i) {
      const Cell& c = r.mesh.cells()[i];
      CHECK(c.level >= r.ell0);
      CHECK(c.level <= e.cfg.L);
      if (c.level < e.cfg.L) CHECK(cell_abs_min(r.mesh.vertex_values(i)) > 0.0);
    }
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      const Cell& c = r.history.cells()[i];
      const double h = e.cfg.h0 * std::ldexp(1.0, -c.level);
      CHECK(decision_variable(r.history.vertex_values(i), h, e.cfg.alpha).value <=
            refinement_threshold(c.level, e.cfg, r.ell0));
    }
  }

  TEST_CASE("ledger equals the recomputed sum of N M_l") {
    Experiment e = drop_wave_experiment(true);
    e.cfg.L = 3;
    const RunResult r = run_adaptive(e.cfg, *e.oracle);
    CHECK(r.ledger.total_cost() == recomputed_cost(r));
    std::uint64_t visited = 0;
    for (const auto& t : r.ledger.levels()) {
      CHECK(t.evaluations == 4 * t.cells_visited);
      if (t.sampled) visited += t.cells_visited;
    }
    CHECK(visited == r.mesh.size() + r.history.size());
  }

  TEST_CASE("ledger merge is order independent") {
    WorkLedger a, b, ab, ba;
    a.add({0, 3, 1, 12, 2.0, false});
    a.add({2, 5, 2, 20, 8.0, true});
    b.add({2, 7, 0, 28, 8.0, true});
    b.add({1, 1, 1, 4, 4.0, true});
    ab.merge(a);
    ab.merge(b);
    ba.merge(b);
    ba.merge(a);
    CHECK(ab == ba);
    CHECK(ab.level(2)->cells_visited == 12);
    CHECK(ab.total_cost() == 12 * 2.0 + 4 * 4.0 + 48 * 8.0);
    WorkLedger bad;
    bad.add({2, 1, 0, 4, 9.0, true});
    CHECK_THROWS_AS(ab.merge(bad), StateError);
  }

  TEST_CASE("results do not depend on the worker count") {
    Experiment e = drop_wave_experiment(true);
    e.cfg.L = 3;
    RunOptions one, four;
    four.workers = 4;
    const RunResult a = run_adaptive(e.cfg, *e.oracle, one);
    const RunResult b = run_adaptive(e.cfg, *e.oracle, four);
    CHECK(a.mesh == b.mesh);
    CHECK(a.history == b.history);
    CHECK(a.ledger == b.ledger);
    RunOptions rep;
    rep.replicate = 1;
    CHECK_FALSE(run_adaptive(e.cfg, *e.oracle, rep).mesh == a.mesh);
  }

  TEST_CASE("resume reproduces a fresh run and only pays for new work") {
    Experiment e = drop_wave_experiment(true);
    e.cfg.L = 2;
    const RunResult short_run = run_adaptive(e.cfg, *e.oracle);
    RunConfig target = e.cfg;
    target.L = 4;
    const RunResult fresh = run_adaptive(target, *e.oracle);
    const RunResult resumed = resume(short_run, 4, e.cfg, *e.oracle);
    CHECK(resumed.mesh == fresh.mesh);
    CHECK(resumed.history == fresh.history);
    CHECK(resumed.ledger == fresh.ledger);
    CHECK(resumed.ell0 == fresh.ell0);
    // paid work adds up: previous + new segment covers the fresh run
    std::uint64_t prev_evals = short_run.ledger.total_evaluations();
    std::uint64_t seg_evals = resumed.segment_ledger.total_evaluations();
    CHECK(seg_evals < fresh.ledger.total_evaluations());
    CHECK(prev_evals + seg_evals >= fresh.ledger.total_evaluations());

    const RunResult same = resume(fresh, 4, target, *e.oracle);
    CHECK(same.mesh == fresh.mesh);
    CHECK(same.segment_ledger.total_evaluations() == 0);
    CHECK_THROWS_AS(resume(fresh, 3, target, *e.oracle), ConfigError);
    RunConfig other = e.cfg;
    other.c = 2.0;
    CHECK_THROWS_WITH_AS(resume(short_run, 4, other, *e.oracle), doctest::Contains("'c'"), ConfigError);
    RunOptions no_history;
    no_history.keep_history = false;
    const RunResult thin = run_adaptive(e.cfg, *e.oracle, no_history);
    CHECK_THROWS_AS(resume(thin, 4, e.cfg, *e.oracle), StateError);
  }

  TEST_CASE("uniform mode refines every cell") {
    RunConfig cfg = unit_config(3);
    cfg.mode = RefinementMode::kUniform;
    const DeterministicOracle o(cfg.domain, std::make_shared<ConstantFunction>(1.0));
    const RunResult r = run_adaptive(cfg, o);
    CHECK(r.mesh.size() == Grid(cfg.domain, cfg.h0).cell_count(3));
    for (const Cell& c : r.mesh.cells()) CHECK(c.level == 3);
  }

  TEST_CASE("oracle must agree with the configuration") {
    RunConfig cfg = unit_config(2);
    const DeterministicOracle wrong_domain(Domain({0, 0}, {1, 1}), std::make_shared<ConstantFunction>(1.0));
    CHECK_THROWS_AS(run_adaptive(cfg, wrong_domain), ConfigError);
    const DeterministicOracle wrong_cost(cfg.domain, std::make_shared<ConstantFunction>(1.0), CostSchedule{2.0, 2.0, kInfinity});
    CHECK_THROWS_AS(run_adaptive(cfg, wrong_cost), ConfigError);
  }
}
