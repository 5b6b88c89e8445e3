#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardyvar {

using Point = std::array<double, 2>;

inline double norm2(const Point& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1]); }
inline double norm_inf(const Point& p) { return std::max(std::abs(p[0]), std::abs(p[1])); }

/// Uniform lattice over [-L,L]^dim with spacing h.  Functions sampled on it
/// are extended by zero outside the box.
struct Grid {
  int dim = 1;
  double half_width = 1.0;  // L
  double spacing = 1.0;     // h
  int pts_per_axis = 3;

  Grid() = default;
  Grid(int dim_, double L, double h);

  std::size_t size() const {
    std::size_t m = static_cast<std::size_t>(pts_per_axis);
    return dim == 1 ? m : m * m;
  }
  double coord(int i) const { return -half_width + i * spacing; }
  std::size_t index(int i, int j = 0) const {
    return dim == 1 ? static_cast<std::size_t>(i)
                    : static_cast<std::size_t>(i) * pts_per_axis + j;
  }
  Point point(std::size_t flat) const {
    if (dim == 1) return {coord(static_cast<int>(flat)), 0.0};
    int i = static_cast<int>(flat) / pts_per_axis;
    int j = static_cast<int>(flat) % pts_per_axis;
    return {coord(i), coord(j)};
  }
  bool in_range(int i) const { return i >= 0 && i < pts_per_axis; }
  /// Nearest lattice index along one axis, clamped to the grid.
  int nearest_axis_index(double x) const;

  double cell_volume() const { return dim == 1 ? spacing : spacing * spacing; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && half_width == o.half_width && spacing == o.spacing;
  }
};

/// Real values on a Grid, indexed by lattice point; zero outside [-L,L]^dim.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}
  GridFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
  }

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  double at(int i, int j = 0) const { return values[grid.index(i, j)]; }
  double& at(int i, int j = 0) { return values[grid.index(i, j)]; }

  double max_abs() const;
  bool same_grid(const GridFunction& o) const { return grid == o.grid; }
};

/// Dyadic scale sequence {2^(j/r)} intersected with [t_min, t_max].
struct ScaleLadder {
  double t_min = 0.0;
  double t_max = 0.0;
  int per_octave = 1;
  std::vector<double> scales;

  static ScaleLadder dyadic(double t_min, double t_max, int per_octave = 1);
  static ScaleLadder single(double t);
};

/// Half-open lattice index box [lo, hi) per axis.  For dim 1 the second axis
/// is the degenerate [0,1).
struct IndexBox {
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 0};

  bool empty() const { return lo[0] >= hi[0] || lo[1] >= hi[1]; }
  std::size_t count() const {
    if (empty()) return 0;
    return static_cast<std::size_t>(hi[0] - lo[0]) * static_cast<std::size_t>(hi[1] - lo[1]);
  }
  bool contains(int i, int j) const {
    return i >= lo[0] && i < hi[0] && j >= lo[1] && j < hi[1];
  }
  IndexBox intersect(const IndexBox& o) const {
    IndexBox r;
    for (int a = 0; a < 2; ++a) {
      r.lo[a] = std::max(lo[a], o.lo[a]);
      r.hi[a] = std::min(hi[a], o.hi[a]);
    }
    return r;
  }
  static IndexBox hull(const IndexBox& a, const IndexBox& b);
};

/// Dense values on an index window; zero outside.  Used for functions whose
/// support is a small part of the grid (partitions of unity, atoms).
struct WindowedField {
  IndexBox box;
  std::vector<double> v;

  WindowedField() = default;
  explicit WindowedField(const IndexBox& b) : box(b), v(b.count(), 0.0) {}

  double& at(int i, int j) { return v[idx(i, j)]; }
  double at(int i, int j) const { return box.contains(i, j) ? v[idx(i, j)] : 0.0; }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i - box.lo[0]) * (box.hi[1] - box.lo[1]) +
           static_cast<std::size_t>(j - box.lo[1]);
  }

  GridFunction dense(const Grid& g) const;
  void add_to(GridFunction& f, double scale = 1.0) const;
  double max_abs() const;
};

// Quadrature and basic fields.

/// Riemann sum h^dim * sum of values, in fixed lexicographic order.
double integrate(const GridFunction& f);

/// Indicator of the Euclidean ball |x - center| <= radius on the lattice.
/// A ball capturing no lattice point snaps to the nearest one.
GridFunction ball_indicator(const Grid& g, const Point& center, double radius);

/// Lattice index window of points with |x - center|_inf <= half_extent.
IndexBox box_window(const Grid& g, const Point& center, double half_extent);

// Elementwise helpers (same grid required).
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction sub(const GridFunction& a, const GridFunction& b);
GridFunction scaled(const GridFunction& a, double c);
GridFunction abs(const GridFunction& a);
GridFunction pointwise_max(const GridFunction& a, const GridFunction& b);
GridFunction pow_abs(const GridFunction& a, double s);

}  // namespace hardyvar
