// SPDX-License-Identifier: Apache-2.0
#include "lse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "lse/error.hpp"

namespace lse {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw ConfigError("domain: dimension must be at least 1");
  if (lower_.size() != upper_.size()) throw ConfigError("domain: lower and upper bounds differ in dimension");
  if (lower_.size() > static_cast<std::size_t>(kMaxDim)) {
    throw ConfigError("domain: dimension " + std::to_string(lower_.size()) + " exceeds the supported maximum " +
                      std::to_string(kMaxDim));
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(upper_[i] > lower_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw ConfigError("domain: upper bound must exceed lower bound on axis " + std::to_string(i));
    }
  }
}

double Domain::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= extent(i);
  return v;
}

bool Domain::contains(std::span<const double> x, double rel_tol) const {
  if (x.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double slack = rel_tol * (upper_[i] - lower_[i]);
    if (!(x[i] >= lower_[i] - slack && x[i] <= upper_[i] + slack)) return false;
  }
  return true;
}

std::size_t CellHash::operator()(const Cell& cell) const noexcept {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(cell.level) + 0x9e3779b97f4a7c15ULL);
  for (auto i : cell.index) h = mix64(h ^ static_cast<std::uint32_t>(i));
  return static_cast<std::size_t>(h);
}

Cell parent_of(const Cell& cell, int dim) {
  if (cell.level <= 0) throw RangeError("parent_of: level-0 cell has no parent");
  Cell p;
  p.level = cell.level - 1;
  for (int k = 0; k < dim; ++k) p.index[k] = cell.index[k] >> 1;
  return p;
}

double CellBox::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= size;
  return v;
}

bool CellBox::contains(std::span<const double> x, double rel_tol) const {
  if (static_cast<int>(x.size()) != dim) return false;
  const double slack = rel_tol * size;
  for (int k = 0; k < dim; ++k) {
    if (!(x[k] >= lower[k] - slack && x[k] <= lower[k] + size + slack)) return false;
  }
  return true;
}

void CellBox::to_unit(std::span<const double> x, std::span<double> t) const {
  for (int k = 0; k < dim; ++k) t[k] = (x[k] - lower[k]) / size;
}

void CellBox::from_unit(std::span<const double> t, std::span<double> x) const {
  for (int k = 0; k < dim; ++k) x[k] = lower[k] + size * t[k];
}

void PointSet::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != dim_) throw ArityError("PointSet: point dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

Grid::Grid(Domain domain, double h0) : domain_(std::move(domain)), h0_(h0) {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("grid: base cell size h0 must be positive");
  for (int k = 0; k < domain_.dim(); ++k) {
    const double ratio = domain_.extent(k) / h0;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
      std::ostringstream os;
      os << "grid: extent " << domain_.extent(k) << " of axis " << k << " is not an integer multiple of h0 = " << h0;
      throw ConfigError(os.str());
    }
    if (n > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
      throw ConfigError("grid: too many level-0 cells along axis " + std::to_string(k));
    }
    base_counts_[k] = static_cast<std::int64_t>(n);
  }
}

double Grid::cell_size(int level) const { return std::ldexp(h0_, -level); }

std::int64_t Grid::count_along(int axis, int level) const { return base_counts_[axis] << level; }

std::uint64_t Grid::cell_count(int level) const {
  std::uint64_t n = 1;
  for (int k = 0; k < dim(); ++k) n *= static_cast<std::uint64_t>(count_along(k, level));
  return n;
}

bool Grid::contains(const Cell& cell) const {
  if (cell.level < 0 || cell.level > 30) return false;
  for (int k = 0; k < kMaxDim; ++k) {
    if (k < dim()) {
      if (cell.index[k] < 0 || cell.index[k] >= count_along(k, cell.level)) return false;
    } else if (cell.index[k] != 0) {
      return false;
    }
  }
  return true;
}

CellBox Grid::box(const Cell& cell) const {
  CellBox b;
  b.dim = dim();
  b.size = cell_size(cell.level);
  for (int k = 0; k < dim(); ++k) b.lower[k] = domain_.lower()[k] + static_cast<double>(cell.index[k]) * b.size;
  return b;
}

PointSet Grid::vertices(const Cell& cell) const {
  const CellBox b = box(cell);
  const int n = vertices_per_cell();
  PointSet pts(dim(), static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    auto p = pts[v];
    for (int k = 0; k < dim(); ++k) {
      // Upper faces are computed from the neighbouring index so that shared
      // corners of adjacent cells are bitwise identical.
      const bool upper = (v >> k) & 1;
      p[k] = domain_.lower()[k] + static_cast<double>(cell.index[k] + (upper ? 1 : 0)) * b.size;
    }
  }
  return pts;
}

AdaptiveMesh::AdaptiveMesh(Grid grid, std::vector<Cell> cells) : grid_(std::move(grid)), cells_(std::move(cells)) {}

AdaptiveMesh::AdaptiveMesh(Grid grid, std::vector<Cell> cells, std::vector<double> vertex_values)
    : grid_(std::move(grid)), cells_(std::move(cells)) {
  set_vertex_values(std::move(vertex_values));
}

std::span<const double> AdaptiveMesh::vertex_values(std::size_t i) const {
  if (values_.empty()) throw StateError("mesh cell " + std::to_string(i) + " carries no approximant");
  const std::size_t n = static_cast<std::size_t>(grid_.vertices_per_cell());
  return {values_.data() + i * n, n};
}

void AdaptiveMesh::set_vertex_values(std::vector<double> values) {
  if (!values.empty() && values.size() != cells_.size() * static_cast<std::size_t>(grid_.vertices_per_cell())) {
    throw ArityError("mesh: expected " + std::to_string(grid_.vertices_per_cell()) + " vertex values per cell");
  }
  values_ = std::move(values);
}

void AdaptiveMesh::sort_canonical() {
  std::vector<std::size_t> order(cells_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cells_[a] < cells_[b]; });
  std::vector<Cell> cells(cells_.size());
  for (std::size_t i = 0; i < order.size(); ++i) cells[i] = cells_[order[i]];
  if (!values_.empty()) {
    const std::size_t n = static_cast<std::size_t>(grid_.vertices_per_cell());
    std::vector<double> values(values_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(order[i] * n), n,
                  values.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    values_ = std::move(values);
  }
  cells_ = std::move(cells);
}

AdaptiveMesh uniform_tessellation(const Domain& domain, int level, double h0) {
  if (level < 0) throw RangeError("uniform_tessellation: level must be nonnegative");
  Grid grid(domain, h0);
  const int d = grid.dim();
  std::vector<Cell> cells;
  cells.reserve(grid.cell_count(level));
  Cell c;
  c.level = level;
  // Odometer with the last axis fastest, which is canonical (lexicographic)
  // order.
  while (true) {
    cells.push_back(c);
    int k = d - 1;
    for (; k >= 0; --k) {
      if (++c.index[k] < grid.count_along(k, level)) break;
      c.index[k] = 0;
    }
    if (k < 0) break;
  }
  return AdaptiveMesh(std::move(grid), std::move(cells));
}

std::vector<Cell> refine_cell(const Cell& cell, int dim) {
  std::vector<Cell> children(static_cast<std::size_t>(1) << dim);
  for (std::size_t c = 0; c < children.size(); ++c) {
    Cell& ch = children[c];
    ch.level = cell.level + 1;
    for (int k = 0; k < dim; ++k) ch.index[k] = 2 * cell.index[k] + static_cast<std::int32_t>((c >> k) & 1);
  }
  return children;
}

PointSet cell_vertices(const Grid& grid, const Cell& cell) { return grid.vertices(cell); }

std::string format_cell(const Cell& cell, int dim) {
  std::ostringstream os;
  os << "(level " << cell.level << ", index [";
  for (int k = 0; k < dim; ++k) os << (k ? "," : "") << cell.index[k];
  os << "])";
  return os.str();
}

std::string PartitionReport::summary(int dim) const {
  std::ostringstream os;
  os << (ok ? "partition ok" : "partition INVALID") << ": cell volume " << cell_volume << " vs domain volume "
     << domain_volume << " (relative discrepancy " << relative_volume_discrepancy << ")";
  auto list = [&](const char* what, const std::vector<std::size_t>& v) {
    if (v.empty()) return;
    os << "\n  " << what << " (" << v.size() << "):";
    for (std::size_t i = 0; i < std::min<std::size_t>(v.size(), 20); ++i) os << ' ' << v[i];
    if (v.size() > 20) os << " ...";
  };
  list("out-of-range cell positions", out_of_range);
  list("overlapping cell positions", overlapping);
  if (!gaps.empty()) {
    os << "\n  gaps (" << gaps.size() << "):";
    for (std::size_t i = 0; i < std::min<std::size_t>(gaps.size(), 20); ++i) os << ' ' << format_cell(gaps[i], dim);
    if (gaps.size() > 20) os << " ...";
  }
  return os.str();
}

PartitionReport validate_partition(const AdaptiveMesh& mesh) {
  const Grid& grid = mesh.grid();
  const int d = grid.dim();
  PartitionReport rep;
  rep.domain_volume = grid.domain().volume();

  long double volume = 0.0L;
  std::unordered_set<Cell, CellHash> leaves;
  leaves.reserve(mesh.size() * 2);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const Cell& c = mesh.cells()[i];
    if (!grid.contains(c)) {
      rep.out_of_range.push_back(i);
      continue;
    }
    volume += grid.box(c).volume();
    if (!leaves.insert(c).second) rep.overlapping.push_back(i);
  }

  // Strict ancestors of all leaves. A leaf that is also an ancestor of
  // another leaf overlaps it.
  std::unordered_set<Cell, CellHash> interior;
  interior.reserve(mesh.size());
  for (const Cell& c : leaves) {
    Cell a = c;
    while (a.level > 0) {
      a = parent_of(a, d);
      if (!interior.insert(a).second) break;
    }
  }
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const Cell& c = mesh.cells()[i];
    if (grid.contains(c) && interior.count(c)) rep.overlapping.push_back(i);
  }
  std::sort(rep.overlapping.begin(), rep.overlapping.end());
  rep.overlapping.erase(std::unique(rep.overlapping.begin(), rep.overlapping.end()), rep.overlapping.end());

  // A region is covered iff it is a leaf or an ancestor of one; every child
  // of an interior cell must therefore be covered.
  auto covered = [&](const Cell& c) { return leaves.count(c) || interior.count(c); };
  for (const Cell& a : interior) {
    for (const Cell& ch : refine_cell(a, d)) {
      if (!covered(ch)) rep.gaps.push_back(ch);
    }
  }
  const std::uint64_t n_base = grid.cell_count(0);
  if (n_base <= 50'000'000ULL) {
    Cell c;
    for (std::uint64_t lin = 0; lin < n_base; ++lin) {
      std::uint64_t r = lin;
      for (int k = d - 1; k >= 0; --k) {
        const auto n = static_cast<std::uint64_t>(grid.base_count(k));
        c.index[k] = static_cast<std::int32_t>(r % n);
        r /= n;
      }
      if (!covered(c)) rep.gaps.push_back(c);
    }
  }
  std::sort(rep.gaps.begin(), rep.gaps.end());

  rep.cell_volume = static_cast<double>(volume);
  rep.relative_volume_discrepancy = std::abs(rep.cell_volume - rep.domain_volume) / rep.domain_volume;
  rep.ok = rep.out_of_range.empty() && rep.overlapping.empty() && rep.gaps.empty() &&
           rep.relative_volume_discrepancy <= 1e-12;
  return rep;
}

}  // namespace lse
