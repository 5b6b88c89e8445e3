#include "hardyvar/weights.hpp"

#include <cmath>

#include "hardyvar/maximal.hpp"
#include "hardyvar/smoothmax.hpp"

namespace hardyvar {

Weight Weight::from(GridFunction w) {
  for (double v : w.values)
    if (!(v > 0) || !std::isfinite(v))
      throw std::invalid_argument("weight must be strictly positive and finite");
  Weight out;
  out.a1 = a1_constant(w);
  out.values = std::move(w);
  return out;
}

double a1_constant(const GridFunction& w) {
  GridFunction mw = hl_maximal(w);
  double best = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) best = std::max(best, mw.values[k] / w.values[k]);
  return best;
}

namespace {

// Applies fn(flat_index) to every lattice point of the ball, via its window.
template <typename Fn>
void for_each_ball_point(const Grid& g, const Ball& b, Fn&& fn) {
  IndexBox box = box_window(g, b.center, b.radius);
  double r2 = b.radius * b.radius * (1 + 1e-12) + 1e-300;
  for (int i = box.lo[0]; i < box.hi[0]; ++i) {
    double dx = g.coord(i) - b.center[0];
    for (int j = box.lo[1]; j < box.hi[1]; ++j) {
      double dy = g.dim == 2 ? g.coord(j) - b.center[1] : 0.0;
      if (dx * dx + dy * dy <= r2) fn(g.index(i, g.dim == 1 ? 0 : j));
    }
  }
}

}  // namespace

double rh_constant(const Weight& w, double s, const std::vector<Ball>& balls) {
  if (!(s > 1)) throw std::invalid_argument("reverse Holder exponent must exceed 1");
  const Grid& g = w.grid();
  double best = 0.0;
  for (const Ball& b : balls) {
    double cnt = 0.0, sum = 0.0, sums = 0.0;
    for_each_ball_point(g, b, [&](std::size_t k) {
      cnt += 1.0;
      sum += w.values.values[k];
      sums += std::pow(w.values.values[k], s);
    });
    if (cnt == 0.0) continue;
    double lhs = std::pow(sums / cnt, 1.0 / s);
    double rhs = sum / cnt;
    best = std::max(best, lhs / rhs);
  }
  return best;
}

double sharp_rh_exponent(const Weight& w) {
  int n = w.grid().dim;
  return 1.0 + 1.0 / (std::exp2(n + 2) * w.a1);
}

double weighted_norm(const GridFunction& f, const Weight& w, double p) {
  if (!(p > 0)) throw std::invalid_argument("weighted norm needs p > 0");
  if (!f.same_grid(w.values)) throw std::invalid_argument("grid mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double a = std::abs(f.values[k]);
    if (a != 0.0) acc += std::pow(a, p) * w.values.values[k];
  }
  return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

double weighted_hardy_norm(const GridFunction& f, const Weight& w, double p0, const Profile& phi,
                           const ScaleLadder& ladder) {
  if (phi.integral == 0.0) throw std::invalid_argument("profile must have nonzero integral");
  return weighted_norm(radial_max(f, phi, ladder), w, p0);
}

double weighted_finite_atomic_norm(const AtomicDecomposition& dec, const Weight& w, double p0,
                                   const ExponentFunction& p) {
  if (dec.atoms.empty()) return 0.0;
  const Grid& g = w.grid();
  GridFunction field(g);
  for (std::size_t a = 0; a < dec.atoms.size(); ++a) {
    const Atom& atom = dec.atoms[a];
    double chi = atom.chi_norm > 0 ? atom.chi_norm
                                   : luxemburg_norm(ball_indicator(g, atom.center, atom.radius), p);
    GridFunction ind = ball_indicator(g, atom.center, atom.radius);
    double wcoef = std::pow(dec.coeffs[a], p0) / std::pow(chi, p0);
    for (std::size_t k = 0; k < field.size(); ++k) field.values[k] += wcoef * ind.values[k];
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) acc += field.values[k] * w.values.values[k];
  return std::pow(acc * g.cell_volume(), 1.0 / p0);
}

std::vector<Ball> dyadic_ball_family(const Grid& g, int min_level) {
  std::vector<Ball> balls;
  const int m = g.pts_per_axis;
  for (int lev = min_level;; ++lev) {
    double r = std::exp2(lev) * g.spacing;
    if (r > g.half_width) break;
    int stride = std::max(1, (1 << lev) / (g.dim == 1 ? 4 : 2));
    if (g.dim == 1) {
      for (int i = 0; i < m; i += stride) balls.push_back({{g.coord(i), 0.0}, r});
    } else {
      for (int i = 0; i < m; i += stride)
        for (int j = 0; j < m; j += stride) balls.push_back({{g.coord(i), g.coord(j)}, r});
    }
  }
  return balls;
}

double ball_mass(const GridFunction& w, const Ball& b) {
  double acc = 0.0;
  std::size_t cnt = 0;
  for_each_ball_point(w.grid, b, [&](std::size_t k) {
    acc += w.values[k];
    ++cnt;
  });
  if (cnt == 0) {
    // Degenerate ball: same snap convention as ball_indicator.
    GridFunction chi = ball_indicator(w.grid, b.center, b.radius);
    for (std::size_t k = 0; k < w.size(); ++k)
      if (chi.values[k] != 0.0) acc += w.values[k];
  }
  return acc * w.grid.cell_volume();
}

GridFunction power_weight(const Grid& g, double a) {
  if (!(a >= 0) || a >= g.dim) throw std::invalid_argument("power weight needs 0 <= a < n");
  GridFunction w(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point p = g.point(k);
    double r = g.dim == 1 ? std::abs(p[0]) : norm2(p);
    w.values[k] = std::pow(r + g.spacing, -a);
  }
  return w;
}

GridFunction plateau_weight(const Grid& g, double c, const Ball& b) {
  if (!(c >= 0)) throw std::invalid_argument("plateau height must be nonnegative");
  GridFunction chi = ball_indicator(g, b.center, b.radius);
  GridFunction w(g, 1.0);
  for (std::size_t k = 0; k < g.size(); ++k) w.values[k] += c * chi.values[k];
  return w;
}

}  // namespace hardyvar
