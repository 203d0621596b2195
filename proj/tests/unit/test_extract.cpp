// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "lse/approx.hpp"
#include "lse/error.hpp"
#include "lse/extract.hpp"

using namespace lse;

namespace {

const Grid kSquare(Domain({0, 0}, {1, 1}), 1.0);
const Grid kCube(Domain({0, 0, 0}, {1, 1, 1}), 1.0);

double residual(const Grid& g, const std::vector<double>& v, const GeometryPiece& piece) {
  const LocalApproximant a(Cell{}, g.box(Cell{}), v);
  double worst = 0.0;
  for (int j = 0; j < piece.n_points; ++j) {
    worst = std::max(worst, std::abs(a.eval({piece.points[j].data(), static_cast<std::size_t>(g.dim())})));
  }
  return worst;
}

}  // namespace

TEST_SUITE("extract") {
  TEST_CASE("a straight line across one square") {
    const AdaptiveMesh m(kSquare, {Cell{}}, {-0.3, 0.7, -0.3, 0.7});
    const LevelSetGeometry g = extract_levelset(m);
    REQUIRE(g.pieces.size() == 1);
    const auto& p = g.pieces[0].points;
    CHECK(p[0][0] == doctest::Approx(0.3));
    CHECK(p[1][0] == doctest::Approx(0.3));
    CHECK(std::set<double>{p[0][1], p[1][1]} == std::set<double>{0.0, 1.0});
  }

  TEST_CASE("no sign change gives no geometry") {
    CHECK(extract_levelset(AdaptiveMesh(kSquare, {Cell{}}, {1, 2, 3, 4})).pieces.empty());
    CHECK(extract_levelset(AdaptiveMesh(kSquare, {Cell{}}, {-1, -2, -3, -4})).pieces.empty());
    // zero counts as inside, so this cell is entirely inside
    CHECK(extract_levelset(AdaptiveMesh(kSquare, {Cell{}}, {0, -1, -1, -1})).pieces.empty());
    CHECK(extract_levelset(AdaptiveMesh(kCube, {Cell{}}, std::vector<double>(8, 2.0))).pieces.empty());
  }

  TEST_CASE("saddle is resolved by the center value") {
    // center value 0 counts as inside: the outside corners (0,0) and (1,1)
    // are cut off, so segment midpoints sit on the anti-diagonal side
    const auto cut_out = extract_cell(kSquare, Cell{}, std::vector<double>{1, -1, -1, 1});
    REQUIRE(cut_out.size() == 2);
    for (const auto& s : cut_out) {
      const double mx = (s.points[0][0] + s.points[1][0]) / 2;
      const double my = (s.points[0][1] + s.points[1][1]) / 2;
      CHECK(std::abs(mx + my - 1.0) == doctest::Approx(0.5));
    }
    // center value positive: the inside corners (1,0) and (0,1) are cut off;
    // crossings sit at 2/3 of each edge from the positive corner
    const auto cut_in = extract_cell(kSquare, Cell{}, std::vector<double>{2, -1, -1, 2});
    REQUIRE(cut_in.size() == 2);
    for (const auto& s : cut_in) {
      const double mx = (s.points[0][0] + s.points[1][0]) / 2;
      const double my = (s.points[0][1] + s.points[1][1]) / 2;
      CHECK(std::abs(mx - my) == doctest::Approx(2.0 / 3.0));
    }
  }

  TEST_CASE("plane through a cube is triangulated on the zero set") {
    std::vector<double> v(8);
    for (int j = 0; j < 8; ++j) v[j] = (j & 1) + ((j >> 1) & 1) + ((j >> 2) & 1) - 1.5;
    const auto pieces = extract_cell(kCube, Cell{}, v);
    // hexagonal cross-section fanned into four triangles
    CHECK(pieces.size() == 4);
    for (const auto& t : pieces) {
      CHECK(t.n_points == 3);
      CHECK(residual(kCube, v, t) <= 1e-12);
    }
  }

  TEST_CASE("random cells: crossing points lie on sign-changing edges with zero residual") {
    test::Gen gen(77);
    for (int trial = 0; trial < 500; ++trial) {
      const int d = trial % 2 ? 3 : 2;
      const Grid& g = d == 2 ? kSquare : kCube;
      const auto v = gen.reals(std::size_t{1} << d, -1, 1);
      std::set<std::pair<int, int>> crossed_edges;
      for (int a = 0; a < (1 << d); ++a)
        for (int k = 0; k < d; ++k)
          if (!((a >> k) & 1) && ((v[a] <= 0) != (v[a | (1 << k)] <= 0))) crossed_edges.insert({a, k});
      const auto pieces = extract_cell(g, Cell{}, v);
      CHECK(pieces.empty() == crossed_edges.empty());
      std::set<std::pair<int, int>> hit;
      for (const auto& p : pieces) {
        CHECK(residual(g, v, p) <= 1e-12);
        for (int j = 0; j < p.n_points; ++j) {
          int a = 0, axis = -1, on_faces = 0;
          for (int k = 0; k < d; ++k) {
            const double c = p.points[j][k];
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            if (c == 0.0 || c == 1.0) {
              ++on_faces;
              a |= (c == 1.0) << k;
            } else {
              axis = k;
            }
          }
          // fan triangles reuse edge crossings, so every corner sits on an edge
          if (on_faces == d - 1 && axis >= 0) hit.insert({a, axis});
        }
      }
      for (const auto& e : hit) CHECK(crossed_edges.count(e) == 1);
      CHECK(hit.size() == crossed_edges.size());
    }
  }

  TEST_CASE("pieces are ordered by cell and unsupported inputs are rejected") {
    const Grid g(Domain({0, 0}, {2, 1}), 1.0);
    Cell right;
    right.index = {1, 0};
    const AdaptiveMesh m(g, {right, Cell{}}, {-1, 1, -1, 1, -1, 1, -1, 1});
    const LevelSetGeometry geom = extract_levelset(m);
    REQUIRE(geom.pieces.size() == 2);
    CHECK(geom.pieces[0].cell < geom.pieces[1].cell);

    const Grid g4(Domain({0, 0, 0, 0}, {1, 1, 1, 1}), 1.0);
    CHECK_THROWS_AS(extract_levelset(AdaptiveMesh(g4, {Cell{}}, std::vector<double>(16, 1.0))), UnsupportedError);
    CHECK_THROWS_AS(extract_levelset(AdaptiveMesh(kSquare, {Cell{}})), StateError);
  }

  TEST_CASE("segments csv round trip") {
    test::Gen gen(5);
    const Grid g(Domain({-1, -1}, {1, 1}), 0.5);
    std::vector<Cell> cells;
    std::vector<double> values;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Cell c;
        c.index = {i, j};
        cells.push_back(c);
        for (double x : gen.reals(4, -1, 1)) values.push_back(x);
      }
    const LevelSetGeometry geom = extract_levelset(AdaptiveMesh(g, cells, values));
    REQUIRE(!geom.pieces.empty());
    std::stringstream ss;
    write_geometry(ss, geom, GeometryFormat::kSegmentsCsv, "abc123");
    const std::string text = ss.str();
    CHECK(text.rfind("# config_hash=abc123\nx1,y1,x2,y2,level,i0,i1\n", 0) == 0);
    std::istringstream in(text);
    CHECK(read_segments_csv(in) == geom);
  }

  TEST_CASE("obj output") {
    std::vector<double> v(8);
    for (int j = 0; j < 8; ++j) v[j] = (j & 1) + ((j >> 1) & 1) + ((j >> 2) & 1) - 1.5;
    const LevelSetGeometry geom = extract_levelset(AdaptiveMesh(kCube, {Cell{}}, v));
    std::ostringstream os;
    write_geometry(os, geom, GeometryFormat::kObj);
    std::istringstream in(os.str());
    std::string line;
    int nv = 0, nf = 0;
    while (std::getline(in, line)) {
      nv += line.rfind("v ", 0) == 0;
      nf += line.rfind("f ", 0) == 0;
    }
    CHECK(nv == 12);
    CHECK(nf == 4);

    const LevelSetGeometry flat = extract_levelset(AdaptiveMesh(kSquare, {Cell{}}, {-1, 1, -1, 1}));
    std::ostringstream sink;
    CHECK_THROWS_AS(write_geometry(sink, flat, GeometryFormat::kObj), UnsupportedError);
    CHECK(parse_geometry_format("obj") == GeometryFormat::kObj);
    CHECK(geometry_format_name(GeometryFormat::kSegmentsCsv) == "segments-csv");
    CHECK_THROWS_AS(parse_geometry_format("ply"), ConfigError);
  }
}
