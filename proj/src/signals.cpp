#include "hardyvar/signals.hpp"

#include <cmath>

namespace hardyvar {

GridFunction bump_signal(const Grid& g, const Point& center, double radius, double amp) {
  GridFunction f(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point p = g.point(k);
    double dx = (p[0] - center[0]) / radius;
    double dy = g.dim == 2 ? (p[1] - center[1]) / radius : 0.0;
    double u = 1.0 - (dx * dx + dy * dy);
    if (u > 1e-12) f.values[k] = amp * std::exp(1.0 - 1.0 / u);
  }
  return f;
}

GridFunction box_indicator(const Grid& g, double a, double b) {
  GridFunction f(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point p = g.point(k);
    bool in = p[0] >= a - 1e-12 && p[0] <= b + 1e-12;
    if (g.dim == 2) in = in && p[1] >= a - 1e-12 && p[1] <= b + 1e-12;
    if (in) f.values[k] = 1.0;
  }
  return f;
}

GridFunction spike_signal(const Grid& g, const Point& where, double mass) {
  GridFunction f(g);
  int i = g.nearest_axis_index(where[0]);
  int j = g.dim == 2 ? g.nearest_axis_index(where[1]) : 0;
  f.at(i, j) = mass / g.cell_volume();
  return f;
}

GridFunction random_signal(const Grid& g, Rng& rng) {
  GridFunction f(g);
  for (auto& v : f.values) v = rng.uniform(-1.0, 1.0);
  return f;
}

GridFunction random_smooth_signal(const Grid& g, Rng& rng, int bumps, double max_radius_frac) {
  GridFunction f(g);
  double L = g.half_width;
  for (int b = 0; b < bumps; ++b) {
    Point c{rng.uniform(-0.6 * L, 0.6 * L), g.dim == 2 ? rng.uniform(-0.6 * L, 0.6 * L) : 0.0};
    double r = rng.uniform(0.05 * L, max_radius_frac * L);
    double amp = rng.uniform(0.2, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    GridFunction piece = bump_signal(g, c, r, amp);
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] += piece.values[k];
  }
  return f;
}

GridFunction random_smooth_nonneg(const Grid& g, Rng& rng, int bumps) {
  GridFunction f = random_smooth_signal(g, rng, bumps);
  for (auto& v : f.values) v = std::abs(v);
  return f;
}

std::vector<GridFunction> standard_corpus(const Grid& g, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GridFunction> out;
  out.reserve(count);
  double L = g.half_width;
  for (int i = 0; i < count; ++i) {
    switch (i % 4) {
      case 0:
        out.push_back(bump_signal(g, {rng.uniform(-0.3 * L, 0.3 * L), 0.0},
                                  rng.uniform(0.15 * L, 0.4 * L), rng.uniform(0.5, 2.0)));
        break;
      case 1: {
        double a = rng.uniform(-0.5 * L, 0.0);
        out.push_back(box_indicator(g, a, a + rng.uniform(0.1 * L, 0.5 * L)));
        break;
      }
      case 2:
        out.push_back(random_smooth_signal(g, rng, 3));
        break;
      default: {
        GridFunction two = add(
            bump_signal(g, {-0.3 * L, 0.0}, rng.uniform(0.1 * L, 0.2 * L), rng.uniform(0.5, 1.5)),
            bump_signal(g, {0.35 * L, g.dim == 2 ? 0.2 * L : 0.0}, rng.uniform(0.1 * L, 0.25 * L),
                        -rng.uniform(0.5, 1.5)));
        out.push_back(two);
        break;
      }
    }
  }
  return out;
}

}  // namespace hardyvar
