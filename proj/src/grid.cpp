#include "hardyvar/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hardyvar {

Grid::Grid(int dim_, double L, double h) : dim(dim_), half_width(L), spacing(h) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
  if (L <= 0 || h <= 0) throw std::invalid_argument("grid needs L > 0 and h > 0");
  double steps = 2.0 * L / h;
  double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("2L/h must be an integer");
  pts_per_axis = static_cast<int>(rounded) + 1;
  double total = std::pow(static_cast<double>(pts_per_axis), dim);
  if (total > static_cast<double>(1 << 24)) throw std::invalid_argument("grid exceeds 2^24 points");
}

int Grid::nearest_axis_index(double x) const {
  int i = static_cast<int>(std::lround((x + half_width) / spacing));
  return std::clamp(i, 0, pts_per_axis - 1);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

ScaleLadder ScaleLadder::dyadic(double t_min, double t_max, int per_octave) {
  if (!(t_min > 0) || !(t_max >= t_min)) throw std::invalid_argument("ladder needs 0 < t_min <= t_max");
  if (per_octave < 1) throw std::invalid_argument("per_octave must be >= 1");
  ScaleLadder lad;
  lad.t_min = t_min;
  lad.t_max = t_max;
  lad.per_octave = per_octave;
  // Smallest k with 2^(k/r) >= t_min.
  int k = static_cast<int>(std::ceil(per_octave * std::log2(t_min) - 1e-12));
  for (;; ++k) {
    double t = std::exp2(static_cast<double>(k) / per_octave);
    if (t > t_max * (1 + 1e-12)) break;
    if (t >= t_min * (1 - 1e-12)) lad.scales.push_back(t);
  }
  if (lad.scales.empty()) lad.scales.push_back(t_min);
  return lad;
}

ScaleLadder ScaleLadder::single(double t) {
  if (!(t > 0)) throw std::invalid_argument("scale must be positive");
  ScaleLadder lad;
  lad.t_min = lad.t_max = t;
  lad.scales = {t};
  return lad;
}

IndexBox IndexBox::hull(const IndexBox& a, const IndexBox& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  IndexBox r;
  for (int ax = 0; ax < 2; ++ax) {
    r.lo[ax] = std::min(a.lo[ax], b.lo[ax]);
    r.hi[ax] = std::max(a.hi[ax], b.hi[ax]);
  }
  return r;
}

GridFunction WindowedField::dense(const Grid& g) const {
  GridFunction f(g);
  add_to(f);
  return f;
}

void WindowedField::add_to(GridFunction& f, double scale) const {
  const Grid& g = f.grid;
  for (int i = std::max(box.lo[0], 0); i < std::min(box.hi[0], g.pts_per_axis); ++i) {
    int jlo = std::max(box.lo[1], 0);
    int jhi = std::min(box.hi[1], g.dim == 1 ? 1 : g.pts_per_axis);
    for (int j = jlo; j < jhi; ++j) f.values[g.index(i, j)] += scale * v[idx(i, j)];
  }
}

double WindowedField::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double integrate(const GridFunction& f) {
  double acc = 0.0;
  for (double x : f.values) acc += x;
  return acc * f.grid.cell_volume();
}

GridFunction ball_indicator(const Grid& g, const Point& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  GridFunction chi(g);
  double r2 = radius * radius * (1 + 1e-12) + 1e-300;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point p = g.point(k);
    double dx = p[0] - center[0];
    double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
    if (dx * dx + dy * dy <= r2) {
      chi.values[k] = 1.0;
      ++hits;
    }
  }
  if (hits == 0) {
    // Degenerate ball: snap to the nearest lattice point.
    int i = g.nearest_axis_index(center[0]);
    int j = g.dim == 2 ? g.nearest_axis_index(center[1]) : 0;
    chi.values[g.index(i, j)] = 1.0;
  }
  return chi;
}

IndexBox box_window(const Grid& g, const Point& center, double half_extent) {
  IndexBox b;
  for (int a = 0; a < (g.dim == 1 ? 1 : 2); ++a) {
    double lo = center[a] - half_extent;
    double hi = center[a] + half_extent;
    b.lo[a] = std::max(0, static_cast<int>(std::ceil((lo + g.half_width) / g.spacing - 1e-9)));
    b.hi[a] = std::min(g.pts_per_axis, static_cast<int>(std::floor((hi + g.half_width) / g.spacing + 1e-9)) + 1);
  }
  if (g.dim == 1) {
    b.lo[1] = 0;
    b.hi[1] = 1;
  }
  return b;
}

namespace {
void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("grid mismatch");
}
}  // namespace

GridFunction add(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = a.values[i] + b.values[i];
  return r;
}

GridFunction sub(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = a.values[i] - b.values[i];
  return r;
}

GridFunction scaled(const GridFunction& a, double c) {
  GridFunction r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = c * a.values[i];
  return r;
}

GridFunction abs(const GridFunction& a) {
  GridFunction r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = std::abs(a.values[i]);
  return r;
}

GridFunction pointwise_max(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = std::max(a.values[i], b.values[i]);
  return r;
}

GridFunction pow_abs(const GridFunction& a, double s) {
  GridFunction r(a.grid);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = std::pow(std::abs(a.values[i]), s);
  return r;
}

}  // namespace hardyvar
