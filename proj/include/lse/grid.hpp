// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lse {

/// Largest supported spatial dimension. Cell indices and stream keys are
/// packed assuming this bound.
inline constexpr int kMaxDim = 6;

using IndexVec = std::array<std::int32_t, kMaxDim>;

/// Axis-aligned box [lower, upper] in domain units.
class Domain {
 public:
  Domain() = default;
  Domain(std::vector<double> lower, std::vector<double> upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  double extent(int axis) const { return upper_[axis] - lower_[axis]; }
  double volume() const;

  /// Closed containment with a relative slack of `rel_tol` times the extent.
  bool contains(std::span<const double> x, double rel_tol = 0.0) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Dyadic cell identified by its level and integer multi-index. Index slots
/// beyond the mesh dimension are zero.
struct Cell {
  std::int32_t level = 0;
  IndexVec index{};

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& cell) const noexcept;
};

/// Parent of a cell (level must be positive).
Cell parent_of(const Cell& cell, int dim);

/// Geometric box of a cell: lower corner and edge length.
struct CellBox {
  int dim = 0;
  std::array<double, kMaxDim> lower{};
  double size = 0.0;

  double volume() const;
  bool contains(std::span<const double> x, double rel_tol = 0.0) const;
  /// Maps a point of the box to local coordinates in [0,1]^d.
  void to_unit(std::span<const double> x, std::span<double> t) const;
  void from_unit(std::span<const double> t, std::span<double> x) const;
};

/// Dense row-major collection of d-dimensional points.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int dim, std::size_t n) : dim_(dim), coords_(static_cast<std::size_t>(dim) * n) {}

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  void push_back(std::span<const double> p);

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

/// The hierarchy of uniform dyadic tessellations of a box domain with
/// level-0 cell size h0; level l has cell size h0 * 2^-l.
class Grid {
 public:
  Grid() = default;
  /// Throws ConfigError naming the axis when an extent is not an integer
  /// multiple of h0.
  Grid(Domain domain, double h0);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  double base_size() const { return h0_; }
  std::int64_t base_count(int axis) const { return base_counts_[axis]; }
  int vertices_per_cell() const { return 1 << dim(); }

  double cell_size(int level) const;
  std::int64_t count_along(int axis, int level) const;
  /// Number of cells in the level-`level` uniform tessellation.
  std::uint64_t cell_count(int level) const;

  bool contains(const Cell& cell) const;
  CellBox box(const Cell& cell) const;
  /// The 2^d corners; bit k of the vertex number selects the upper side of
  /// axis k, so axis 0 varies fastest.
  PointSet vertices(const Cell& cell) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Domain domain_;
  double h0_ = 0.0;
  std::array<std::int64_t, kMaxDim> base_counts_{};
};

/// Leaf partition of the domain, optionally carrying one multilinear
/// approximant (2^d vertex values) per cell.
class AdaptiveMesh {
 public:
  AdaptiveMesh() = default;
  AdaptiveMesh(Grid grid, std::vector<Cell> cells);
  AdaptiveMesh(Grid grid, std::vector<Cell> cells, std::vector<double> vertex_values);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  bool has_approximants() const { return !values_.empty() || cells_.empty(); }
  std::span<const double> vertex_values(std::size_t i) const;
  std::span<const double> all_vertex_values() const { return values_; }
  void set_vertex_values(std::vector<double> values);

  /// Sorts cells (and their values) by level, then index.
  void sort_canonical();

  friend bool operator==(const AdaptiveMesh&, const AdaptiveMesh&) = default;

 private:
  Grid grid_;
  std::vector<Cell> cells_;
  std::vector<double> values_;
};

AdaptiveMesh uniform_tessellation(const Domain& domain, int level, double h0);

/// The 2^d children of `cell`, child c taking the upper half of axis k when
/// bit k of c is set.
std::vector<Cell> refine_cell(const Cell& cell, int dim);

PointSet cell_vertices(const Grid& grid, const Cell& cell);

struct PartitionReport {
  bool ok = true;
  double cell_volume = 0.0;
  double domain_volume = 0.0;
  double relative_volume_discrepancy = 0.0;
  /// Positions (in mesh order) of cells outside the grid.
  std::vector<std::size_t> out_of_range;
  /// Positions of cells that duplicate or are nested in another cell.
  std::vector<std::size_t> overlapping;
  /// Uncovered regions, expressed as maximal missing cells.
  std::vector<Cell> gaps;

  std::string summary(int dim) const;
};

/// Exact disjointness and coverage check in index space.
PartitionReport validate_partition(const AdaptiveMesh& mesh);

std::string format_cell(const Cell& cell, int dim);

}  // namespace lse
