// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "lse/error.hpp"
#include "lse/grid.hpp"

using namespace lse;

TEST_SUITE("grid") {
  TEST_CASE("level-0 tessellation of the unit square is one cell") {
    const auto mesh = uniform_tessellation(Domain({0, 0}, {1, 1}), 0, 1.0);
    REQUIRE(mesh.size() == 1);
    CHECK(mesh.cells()[0].level == 0);
    CHECK(mesh.grid().cell_size(0) == 1.0);
  }

  TEST_CASE("level-2 tessellation enumerates every index pair once") {
    const auto mesh = uniform_tessellation(Domain({0, 0}, {1, 1}), 2, 1.0);
    CHECK(mesh.size() == 16);
    std::set<std::pair<int, int>> seen;
    for (const Cell& c : mesh.cells()) {
      CHECK(c.level == 2);
      seen.insert({c.index[0], c.index[1]});
    }
    std::set<std::pair<int, int>> expected;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) expected.insert({i, j});
    CHECK(seen == expected);
    CHECK(mesh.grid().cell_size(2) == 0.25);
  }

  TEST_CASE("drop-wave domain has 64 base cells per axis") {
    const Grid g(Domain({-5, -5}, {5, 5}), 10.0 / 64);
    CHECK(g.base_count(0) == 64);
    CHECK(g.base_count(1) == 64);
    CHECK(g.cell_count(0) == 4096);
    CHECK(g.cell_count(2) == 65536);
  }

  TEST_CASE("non-divisible extent names the axis") {
    try {
      Grid(Domain({0, 0}, {1, 1.3}), 0.25);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("axis 1") != std::string::npos);
    }
    CHECK_THROWS_AS(Domain({0, 1}, {1, 1}), ConfigError);
    CHECK_THROWS_AS(Domain({}, {}), ConfigError);
  }

  TEST_CASE("refine_cell splits into 2^d children tiling the parent") {
    for (int d : {1, 2, 3, 4}) {
      std::vector<double> lo(d, 0.0), hi(d, 2.0);
      const Grid g(Domain(lo, hi), 1.0);
      Cell parent;
      parent.level = 1;
      for (int k = 0; k < d; ++k) parent.index[k] = k % 2;
      const auto kids = refine_cell(parent, d);
      REQUIRE(kids.size() == (std::size_t{1} << d));
      double vol = 0.0;
      const CellBox pb = g.box(parent);
      for (const Cell& c : kids) {
        CHECK(c.level == 2);
        CHECK(parent_of(c, d) == parent);
        const CellBox b = g.box(c);
        vol += b.volume();
        for (int k = 0; k < d; ++k) {
          CHECK(b.lower[k] >= pb.lower[k]);
          CHECK(b.lower[k] + b.size <= pb.lower[k] + pb.size);
        }
      }
      CHECK(vol == doctest::Approx(pb.volume()).epsilon(1e-15));
      std::set<Cell> unique(kids.begin(), kids.end());
      CHECK(unique.size() == kids.size());
    }
  }

  TEST_CASE("cell_vertices of the unit cell in fixed order") {
    const Grid g(Domain({0, 0}, {1, 1}), 1.0);
    const PointSet v = cell_vertices(g, Cell{});
    REQUIRE(v.size() == 4);
    const double expected[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (int i = 0; i < 4; ++i) {
      CHECK(v[i][0] == expected[i][0]);
      CHECK(v[i][1] == expected[i][1]);
    }
    const Grid g3(Domain({-1, -1, -1}, {1, 1, 1}), 0.5);
    Cell c;
    c.level = 1;
    c.index = {7, 0, 3};
    const PointSet a = cell_vertices(g3, c), b = cell_vertices(g3, c);
    REQUIRE(a.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(g3.domain().contains(a[i]));
      for (int k = 0; k < 3; ++k) CHECK(a[i][k] == b[i][k]);
    }
  }

  TEST_CASE("validate_partition accepts tessellations and rejects holes and overlaps") {
    const Domain dom({0, 0}, {2, 1});
    const auto mesh = uniform_tessellation(dom, 3, 0.5);
    const auto ok = validate_partition(mesh);
    CHECK(ok.ok);
    CHECK(ok.relative_volume_discrepancy <= 1e-12);

    std::vector<Cell> cells(mesh.cells().begin(), mesh.cells().end());
    const Cell removed = cells[5];
    cells.erase(cells.begin() + 5);
    const auto gap = validate_partition(AdaptiveMesh(mesh.grid(), cells));
    CHECK_FALSE(gap.ok);
    REQUIRE(gap.gaps.size() == 1);
    CHECK(gap.gaps[0] == removed);

    cells.push_back(removed);
    cells.push_back(parent_of(removed, 2));
    const auto overlap = validate_partition(AdaptiveMesh(mesh.grid(), cells));
    CHECK_FALSE(overlap.ok);
    CHECK_FALSE(overlap.overlapping.empty());

    Cell outside;
    outside.level = 0;
    outside.index = {9, 0};
    const auto bad = validate_partition(AdaptiveMesh(mesh.grid(), {outside}));
    CHECK_FALSE(bad.ok);
    CHECK(bad.out_of_range == std::vector<std::size_t>{0});
  }

  TEST_CASE("random refinement sequences keep an exact partition") {
    test::Gen gen(11);
    for (int trial = 0; trial < 40; ++trial) {
      const int d = gen.integer(1, 3);
      std::vector<double> lo(d), hi(d);
      for (int k = 0; k < d; ++k) {
        lo[k] = gen.uniform(-3, 3);
        hi[k] = lo[k] + 0.75 * gen.integer(1, 3);
      }
      const Grid g(Domain(lo, hi), 0.75);
      const AdaptiveMesh base = uniform_tessellation(g.domain(), 0, 0.75);
      std::vector<Cell> cells(base.cells().begin(), base.cells().end());
      for (int step = 0; step < 30; ++step) {
        const std::size_t i = static_cast<std::size_t>(gen.integer(0, static_cast<int>(cells.size()) - 1));
        if (cells[i].level >= 6) continue;
        const Cell c = cells[i];
        cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i));
        for (const Cell& k : refine_cell(c, d)) cells.push_back(k);
      }
      const auto report = validate_partition(AdaptiveMesh(g, cells));
      CHECK(report.ok);
      CHECK(std::abs(report.cell_volume - g.domain().volume()) <= 1e-12 * g.domain().volume());
    }
  }

  TEST_CASE("sort_canonical orders by level then index and carries values") {
    const Grid g(Domain({0, 0}, {1, 1}), 1.0);
    Cell a, b;
    a.level = 1;
    a.index = {1, 0};
    b.level = 0;
    AdaptiveMesh m(g, {a, b}, {1, 2, 3, 4, 5, 6, 7, 8});
    m.sort_canonical();
    CHECK(m.cells()[0] == b);
    CHECK(m.vertex_values(0)[0] == 5);
    CHECK(m.vertex_values(1)[3] == 4);
  }
}
