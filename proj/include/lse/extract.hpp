// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lse/grid.hpp"

namespace lse {

/// A segment (2D, two points) or triangle (3D, three points) of the zero
/// set of one cell's approximant.
struct GeometryPiece {
  Cell cell{};
  int n_points = 0;
  std::array<std::array<double, 3>, 3> points{};

  friend bool operator==(const GeometryPiece&, const GeometryPiece&) = default;
};

struct LevelSetGeometry {
  int dim = 0;
  /// Sorted by source cell in canonical order.
  std::vector<GeometryPiece> pieces;

  friend bool operator==(const LevelSetGeometry&, const LevelSetGeometry&) = default;
};

/// Contours every leaf approximant. Values <= 0 count as inside; crossing
/// points are interpolated linearly along cell edges; ambiguous faces are
/// resolved by the sign of the face-center value. 3D cells yield closed
/// loops on the cell faces, fan-triangulated. UnsupportedError unless the
/// mesh dimension is 2 or 3.
LevelSetGeometry extract_levelset(const AdaptiveMesh& mesh);

/// Geometry of a single cell given its vertex values.
std::vector<GeometryPiece> extract_cell(const Grid& grid, const Cell& cell, std::span<const double> vertex_values);

enum class GeometryFormat { kSegmentsCsv, kObj };

/// "segments-csv" or "obj"; ConfigError otherwise.
GeometryFormat parse_geometry_format(std::string_view name);
std::string_view geometry_format_name(GeometryFormat format);

/// segments-csv: optional `# key=value` comment lines, a header row, then
/// one row per piece (point coordinates, then level and cell index). OBJ
/// (3D only): one `v` line per triangle corner and one `f` line per
/// triangle. UnsupportedError for OBJ with 2D geometry.
void write_geometry(std::ostream& out, const LevelSetGeometry& geom, GeometryFormat format,
                    std::string_view config_hash = {});
void export_geometry(const std::string& path, const LevelSetGeometry& geom, GeometryFormat format,
                     std::string_view config_hash = {});

/// Parses segments-csv text written by `write_geometry`.
LevelSetGeometry read_segments_csv(std::istream& in);

}  // namespace lse
