// SPDX-License-Identifier: Apache-2.0
#include "lse/extract.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lse/error.hpp"
#include "lse/format.hpp"

namespace lse {

namespace {

bool inside(double v) { return v <= 0.0; }

// Square with corners numbered like cell vertices (bit 0 = u, bit 1 = w).
// Edges: 0 = (0,1), 1 = (1,3), 2 = (2,3), 3 = (0,2).
constexpr int kSquareEdge[4][2] = {{0, 1}, {1, 3}, {2, 3}, {0, 2}};
// The two edges meeting at each corner.
constexpr int kCornerEdges[4][2] = {{0, 3}, {0, 1}, {2, 3}, {1, 2}};

// Pairs of crossed edges forming the contour of one square; returns the
// number of pairs (0, 1 or 2).
int square_segments(const double v[4], int pairs[2][2]) {
  int crossed[4];
  int n = 0;
  for (int e = 0; e < 4; ++e) {
    if (inside(v[kSquareEdge[e][0]]) != inside(v[kSquareEdge[e][1]])) crossed[n++] = e;
  }
  if (n == 2) {
    pairs[0][0] = crossed[0];
    pairs[0][1] = crossed[1];
    return 1;
  }
  if (n != 4) return 0;
  // Saddle: the class of the center value connects its diagonal, so the
  // corners of the other class are cut off.
  const double center = (v[0] + v[1] + v[2] + v[3]) / 4.0;
  const bool center_in = inside(center);
  int k = 0;
  for (int c = 0; c < 4; ++c) {
    if (inside(v[c]) != center_in) {
      pairs[k][0] = kCornerEdges[c][0];
      pairs[k][1] = kCornerEdges[c][1];
      ++k;
    }
  }
  return k;
}

// Unit-cube coordinates of the crossing on the edge from vertex a to vertex
// b (b = a with one more bit set).
std::array<double, 3> crossing(const double* v, int a, int b, int dim) {
  std::array<double, 3> t{};
  for (int k = 0; k < dim; ++k) t[k] = (a >> k) & 1;
  const int axis = __builtin_ctz(static_cast<unsigned>(a ^ b));
  t[axis] = v[a] / (v[a] - v[b]);
  return t;
}

std::array<double, 3> to_domain(const CellBox& box, const std::array<double, 3>& t, int dim) {
  std::array<double, 3> x{};
  for (int k = 0; k < dim; ++k) x[k] = box.lower[k] + box.size * t[k];
  return x;
}

void extract_square(const Cell& cell, const CellBox& box, const double* v, std::vector<GeometryPiece>& out) {
  int pairs[2][2];
  const int n = square_segments(v, pairs);
  for (int s = 0; s < n; ++s) {
    GeometryPiece piece;
    piece.cell = cell;
    piece.n_points = 2;
    for (int j = 0; j < 2; ++j) {
      const int e = pairs[s][j];
      piece.points[j] = to_domain(box, crossing(v, kSquareEdge[e][0], kSquareEdge[e][1], 2), 2);
    }
    out.push_back(piece);
  }
}

// Cube edge id of the edge from vertex a along `axis`: axis * 4 + the two
// remaining vertex bits.
int cube_edge(int a, int axis) {
  int rest = 0, r = 0;
  for (int k = 0; k < 3; ++k) {
    if (k == axis) continue;
    rest |= ((a >> k) & 1) << r++;
  }
  return axis * 4 + rest;
}

void extract_cube(const Cell& cell, const CellBox& box, const double* v, std::vector<GeometryPiece>& out) {
  // Lower vertex of each cube edge, and the two face-contour neighbours of
  // every crossed edge.
  int edge_lower[12];
  int edge_axis[12];
  for (int axis = 0; axis < 3; ++axis) {
    for (int a = 0; a < 8; ++a) {
      if ((a >> axis) & 1) continue;
      const int e = cube_edge(a, axis);
      edge_lower[e] = a;
      edge_axis[e] = axis;
    }
  }
  int link[12][2];
  int degree[12] = {};
  for (int axis = 0; axis < 3; ++axis) {
    const int u = axis == 0 ? 1 : 0;
    const int w = axis == 2 ? 1 : 2;
    for (int side = 0; side < 2; ++side) {
      int corner[4];
      double fv[4];
      for (int j = 0; j < 4; ++j) {
        corner[j] = (side << axis) | ((j & 1) << u) | (((j >> 1) & 1) << w);
        fv[j] = v[corner[j]];
      }
      int pairs[2][2];
      const int n = square_segments(fv, pairs);
      for (int s = 0; s < n; ++s) {
        int ids[2];
        for (int j = 0; j < 2; ++j) {
          const int a = corner[kSquareEdge[pairs[s][j]][0]];
          const int b = corner[kSquareEdge[pairs[s][j]][1]];
          ids[j] = cube_edge(a, __builtin_ctz(static_cast<unsigned>(a ^ b)));
        }
        link[ids[0]][degree[ids[0]]++] = ids[1];
        link[ids[1]][degree[ids[1]]++] = ids[0];
      }
    }
  }
  bool used[12] = {};
  for (int start = 0; start < 12; ++start) {
    if (degree[start] != 2 || used[start]) continue;
    std::vector<int> loop{start};
    used[start] = true;
    int prev = start, cur = link[start][0];
    while (cur != start) {
      loop.push_back(cur);
      used[cur] = true;
      const int next = link[cur][0] == prev ? link[cur][1] : link[cur][0];
      prev = cur;
      cur = next;
    }
    std::vector<std::array<double, 3>> pts;
    for (int e : loop) {
      const int a = edge_lower[e];
      pts.push_back(to_domain(box, crossing(v, a, a | (1 << edge_axis[e]), 3), 3));
    }
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
      GeometryPiece piece;
      piece.cell = cell;
      piece.n_points = 3;
      piece.points = {pts[0], pts[k], pts[k + 1]};
      out.push_back(piece);
    }
  }
}

}  // namespace

std::vector<GeometryPiece> extract_cell(const Grid& grid, const Cell& cell, std::span<const double> vertex_values) {
  const int d = grid.dim();
  if (d != 2 && d != 3) {
    throw UnsupportedError("extract_levelset: geometry extraction supports d = 2 or 3, got d = " +
                           std::to_string(d));
  }
  if (vertex_values.size() != (std::size_t{1} << d)) {
    throw ArityError("extract_levelset: expected " + std::to_string(1 << d) + " vertex values");
  }
  std::vector<GeometryPiece> out;
  const CellBox box = grid.box(cell);
  if (d == 2) {
    extract_square(cell, box, vertex_values.data(), out);
  } else {
    extract_cube(cell, box, vertex_values.data(), out);
  }
  return out;
}

LevelSetGeometry extract_levelset(const AdaptiveMesh& mesh) {
  const int d = mesh.dim();
  if (d != 2 && d != 3) {
    throw UnsupportedError("extract_levelset: geometry extraction supports d = 2 or 3, got d = " +
                           std::to_string(d));
  }
  if (!mesh.has_approximants()) throw StateError("extract_levelset: mesh carries no approximants");
  std::vector<std::size_t> order(mesh.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mesh.cells()[a] < mesh.cells()[b]; });
  LevelSetGeometry geom;
  geom.dim = d;
  for (std::size_t i : order) {
    auto pieces = extract_cell(mesh.grid(), mesh.cells()[i], mesh.vertex_values(i));
    geom.pieces.insert(geom.pieces.end(), pieces.begin(), pieces.end());
  }
  return geom;
}

GeometryFormat parse_geometry_format(std::string_view name) {
  if (name == "segments-csv") return GeometryFormat::kSegmentsCsv;
  if (name == "obj") return GeometryFormat::kObj;
  throw ConfigError("format: unknown geometry format '" + std::string(name) + "' (expected segments-csv or obj)");
}

std::string_view geometry_format_name(GeometryFormat format) {
  return format == GeometryFormat::kSegmentsCsv ? "segments-csv" : "obj";
}

void write_geometry(std::ostream& out, const LevelSetGeometry& geom, GeometryFormat format,
                    std::string_view config_hash) {
  const int d = geom.dim;
  if (format == GeometryFormat::kObj) {
    if (d != 3) throw UnsupportedError("export: obj output requires 3D geometry, got d = " + std::to_string(d));
    if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
    for (const auto& p : geom.pieces) {
      for (int j = 0; j < p.n_points; ++j) {
        out << 'v';
        for (int k = 0; k < 3; ++k) out << ' ' << format_double(p.points[j][k]);
        out << '\n';
      }
    }
    for (std::size_t i = 0; i < geom.pieces.size(); ++i) {
      out << "f " << 3 * i + 1 << ' ' << 3 * i + 2 << ' ' << 3 * i + 3 << '\n';
    }
    return;
  }
  if (d != 2 && d != 3) throw UnsupportedError("export: segments-csv requires d = 2 or 3");
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  const int np = d;  // segments in 2D, triangles in 3D
  for (int j = 0; j < np; ++j) {
    for (int k = 0; k < d; ++k) out << (j || k ? "," : "") << kAxis[k] << j + 1;
  }
  out << ",level";
  for (int k = 0; k < d; ++k) out << ",i" << k;
  out << '\n';
  for (const auto& p : geom.pieces) {
    for (int j = 0; j < np; ++j) {
      for (int k = 0; k < d; ++k) out << (j || k ? "," : "") << format_double(p.points[j][k]);
    }
    out << ',' << p.cell.level;
    for (int k = 0; k < d; ++k) out << ',' << p.cell.index[k];
    out << '\n';
  }
}

void export_geometry(const std::string& path, const LevelSetGeometry& geom, GeometryFormat format,
                     std::string_view config_hash) {
  std::ostringstream text;
  write_geometry(text, geom, format, config_hash);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("export: cannot open '" + path + "' for writing");
  f << text.str();
  if (!f) throw IoError("export: write to '" + path + "' failed");
}

LevelSetGeometry read_segments_csv(std::istream& in) {
  std::string line;
  do {
    if (!std::getline(in, line)) throw IoError("segments-csv: missing header");
  } while (!line.empty() && line[0] == '#');
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  int d = 0;
  if (header.size() == 2 * 2 + 1 + 2) d = 2;
  if (header.size() == 3 * 3 + 1 + 3) d = 3;
  if (d == 0 || header[static_cast<std::size_t>(d * d)] != "level") {
    throw IoError("segments-csv: unrecognized header '" + line + "'");
  }
  LevelSetGeometry geom;
  geom.dim = d;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    while (true) {
      const auto pos = rest.find(',');
      cols.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (cols.size() != header.size()) {
      throw IoError("segments-csv: row " + std::to_string(row) + " has " + std::to_string(cols.size()) +
                    " fields, expected " + std::to_string(header.size()));
    }
    GeometryPiece p;
    p.n_points = d;
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) p.points[j][k] = parse_double(cols[static_cast<std::size_t>(j * d + k)], "segments-csv");
    }
    p.cell.level = static_cast<std::int32_t>(parse_double(cols[static_cast<std::size_t>(d * d)], "segments-csv"));
    for (int k = 0; k < d; ++k) {
      p.cell.index[k] = static_cast<std::int32_t>(parse_double(cols[static_cast<std::size_t>(d * d + 1 + k)], "segments-csv"));
    }
    geom.pieces.push_back(p);
  }
  return geom;
}

}  // namespace lse
