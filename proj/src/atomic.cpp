#include "hardyvar/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hardyvar {

namespace {

struct BallMeasure {
  double measure = 0.0;  // h^n * count
  std::size_t count = 0;
};

BallMeasure ball_measure(const Grid& g, const Point& center, double radius) {
  GridFunction chi = ball_indicator(g, center, radius);
  BallMeasure bm;
  for (double v : chi.values)
    if (v != 0.0) ++bm.count;
  bm.measure = bm.count * g.cell_volume();
  return bm;
}

double lq_norm(const Grid& g, const WindowedField& a, double q) {
  if (std::isinf(q)) return a.max_abs();
  double acc = 0.0;
  for (double v : a.v) acc += std::pow(std::abs(v), q);
  return std::pow(acc * g.cell_volume(), 1.0 / q);
}

double l1_norm(const Grid& g, const WindowedField& a) {
  double acc = 0.0;
  for (double v : a.v) acc += std::abs(v);
  return acc * g.cell_volume();
}

std::vector<std::pair<int, int>> moment_exponents(int dim, int d) {
  std::vector<std::pair<int, int>> e;
  if (d < 0) return e;
  if (dim == 1) {
    for (int a = 0; a <= d; ++a) e.emplace_back(a, 0);
  } else {
    for (int tot = 0; tot <= d; ++tot)
      for (int a = tot; a >= 0; --a) e.emplace_back(a, tot - a);
  }
  return e;
}

}  // namespace

AtomReport validate_atom(const Atom& a, const Grid& g, const ExponentFunction& p,
                         const MP0Context& ctx) {
  AtomReport rep;
  const double r2 = a.radius * a.radius * (1 + 1e-12) + 1e-300;
  for (int i = a.values.box.lo[0]; i < a.values.box.hi[0]; ++i)
    for (int j = a.values.box.lo[1]; j < a.values.box.hi[1]; ++j) {
      if (a.values.at(i, j) == 0.0) continue;
      double dx = g.coord(i) - a.center[0];
      double dy = g.dim == 2 ? g.coord(j) - a.center[1] : 0.0;
      if (dx * dx + dy * dy > r2) {
        rep.support_ok = false;
        std::ostringstream ss;
        ss << "value outside ball at (" << g.coord(i);
        if (g.dim == 2) ss << ", " << g.coord(j);
        ss << ")";
        rep.fail_location = ss.str();
        break;
      }
    }

  double chi = a.chi_norm;
  if (chi <= 0.0) chi = luxemburg_norm(ball_indicator(g, a.center, a.radius), p);
  BallMeasure bm = ball_measure(g, a.center, a.radius);
  rep.size_lhs = lq_norm(g, a.values, a.q);
  rep.size_rhs = (std::isinf(a.q) ? 1.0 : std::pow(bm.measure, 1.0 / a.q)) / chi;
  rep.size_ok = rep.size_lhs <= rep.size_rhs * (1 + 1e-9);

  int d = a.d;
  if (d >= 0) {
    double l1 = l1_norm(g, a.values);
    rep.moment_tol = 1e-8 * std::max(l1, 1e-300);
    for (auto [ea, eb] : moment_exponents(g.dim, d)) {
      double mom = 0.0;
      for (int i = a.values.box.lo[0]; i < a.values.box.hi[0]; ++i)
        for (int j = a.values.box.lo[1]; j < a.values.box.hi[1]; ++j) {
          double v = a.values.at(i, j);
          if (v == 0.0) continue;
          double X = (g.coord(i) - a.center[0]) / a.radius;
          double Y = g.dim == 2 ? (g.coord(j) - a.center[1]) / a.radius : 0.0;
          mom += v * std::pow(X, ea) * (g.dim == 2 ? std::pow(Y, eb) : 1.0);
        }
      mom *= g.cell_volume();
      rep.worst_moment = std::max(rep.worst_moment, std::abs(mom));
    }
    rep.moments_ok = rep.worst_moment <= rep.moment_tol;
  }
  (void)ctx;
  return rep;
}

AtomicDecomposition canonical_decompose(const GridFunction& f, const ExponentFunction& p,
                                        const MP0Context& ctx, const TestDictionary& dict,
                                        double residual_tol) {
  const Grid& g = f.grid;
  AtomicDecomposition dec;
  dec.residual = GridFunction(g);
  dec.grand = grand_max(f, dict);
  if (f.max_abs() == 0.0) return dec;

  double gmax = 0.0, gmin_pos = std::numeric_limits<double>::infinity();
  for (double v : dec.grand.values) {
    gmax = std::max(gmax, v);
    if (v > 0) gmin_pos = std::min(gmin_pos, v);
  }
  if (gmax == 0.0) return dec;
  int j_max = static_cast<int>(std::ceil(std::log2(gmax)));
  int j_min_design = static_cast<int>(std::floor(std::log2(gmin_pos))) - 1;
  // The leftover good part at the bottom level is bounded by c 2^{j_min};
  // cut the ladder once that is safely below the declared residual bound.
  int j_min_tol =
      static_cast<int>(std::floor(std::log2(std::max(residual_tol * f.max_abs(), 1e-300)))) - 3;
  int j_min = std::max(j_min_design, j_min_tol);
  // Levels whose super-level set is the whole lattice cannot be decomposed.
  std::size_t total = g.size();
  while (j_min <= j_max) {
    std::size_t cnt = 0;
    double lam = std::exp2(j_min);
    for (double v : dec.grand.values)
      if (v > lam) ++cnt;
    if (cnt < total) break;
    ++j_min;
  }
  if (j_max - j_min > 80)
    throw std::runtime_error("level range too wide; suggested bounds [" + std::to_string(j_max - 80) +
                             ", " + std::to_string(j_max) + "]");
  dec.j_min = j_min;
  dec.j_max = j_max;

  struct LevelData {
    CZResult cz;
    std::vector<double> eta_mass;  // integral of eta_k
  };
  auto build_level = [&](int j) {
    LevelData ld;
    ld.cz = cz_core(f, std::exp2(j), ctx, dec.grand);
    ld.eta_mass.resize(ld.cz.partition.size());
    for (std::size_t k = 0; k < ld.cz.partition.size(); ++k) {
      double mass = 0.0;
      for (double v : ld.cz.partition[k].v) mass += v;
      ld.eta_mass[k] = mass * g.cell_volume();
    }
    return ld;
  };

  struct RawAtom {
    WindowedField A;
    Point center;
    double side;
    int level;
    int cube;
  };
  std::vector<RawAtom> raw;

  std::vector<LevelData> levels;
  levels.reserve(j_max - j_min + 1);
  for (int j = j_max; j >= j_min; --j) levels.push_back(build_level(j));
  auto level_at = [&](int j) -> LevelData& { return levels[j_max - j]; };

  for (int j = j_max; j >= j_min; --j) {
    LevelData& lo = level_at(j);
    const bool has_upper = j < j_max;
    LevelData* hi = has_upper ? &level_at(j + 1) : nullptr;
    GridFunction b_upper(g);
    if (hi)
      for (const auto& b : hi->cz.bs) b.add_to(b_upper);

    for (std::size_t k = 0; k < lo.cz.cubes.size(); ++k) {
      const WindowedField& eta_k = lo.cz.partition[k];
      IndexBox abox = eta_k.box;
      std::vector<std::pair<std::size_t, PolyCoeffs>> cross;  // (ell, c_{k,ell})
      if (hi) {
        for (std::size_t l = 0; l < hi->cz.cubes.size(); ++l) {
          const WindowedField& eta_l = hi->cz.partition[l];
          if (eta_k.box.intersect(eta_l.box).empty()) continue;
          // c_{k,ell} = projection of (f - c_ell) eta_k in the eta_ell geometry
          GridFunction tmp(g);
          bool any = false;
          IndexBox ib = eta_k.box.intersect(eta_l.box);
          for (int i = ib.lo[0]; i < ib.hi[0]; ++i)
            for (int jj = ib.lo[1]; jj < ib.hi[1]; ++jj) {
              double w = eta_k.at(i, jj);
              if (w == 0.0) continue;
              Point pt{g.coord(i), g.dim == 2 ? g.coord(jj) : 0.0};
              double val =
                  (f.values[g.index(i, g.dim == 1 ? 0 : jj)] - hi->cz.projections[l].eval(pt)) * w;
              if (val != 0.0) any = true;
              tmp.values[g.index(i, g.dim == 1 ? 0 : jj)] = val;
            }
          if (!any) continue;
          PolyCoeffs ckl = poly_project(tmp, hi->cz.cubes[l], eta_l, lo.cz.degree);
          cross.emplace_back(l, std::move(ckl));
          abox = IndexBox::hull(abox, eta_l.box);
        }
      }

      RawAtom ra;
      ra.A = WindowedField(abox);
      ra.center = lo.cz.cubes[k].center;
      ra.side = lo.cz.cubes[k].side;
      ra.level = j;
      ra.cube = static_cast<int>(k);
      // term 1 + term 2: b_k - (sum_l b_l^{j+1}) eta_k
      for (int i = eta_k.box.lo[0]; i < eta_k.box.hi[0]; ++i)
        for (int jj = eta_k.box.lo[1]; jj < eta_k.box.hi[1]; ++jj) {
          double bk = lo.cz.bs[k].at(i, jj);
          double corr = b_upper.values[g.index(i, g.dim == 1 ? 0 : jj)] * eta_k.at(i, jj);
          ra.A.at(i, jj) += bk - corr;
        }
      // term 3: + sum_l c_{k,l} eta_l
      for (auto& [l, ckl] : cross) {
        const WindowedField& eta_l = hi->cz.partition[l];
        for (int i = eta_l.box.lo[0]; i < eta_l.box.hi[0]; ++i)
          for (int jj = eta_l.box.lo[1]; jj < eta_l.box.hi[1]; ++jj) {
            double w = eta_l.at(i, jj);
            if (w == 0.0) continue;
            Point pt{g.coord(i), g.dim == 2 ? g.coord(jj) : 0.0};
            ra.A.at(i, jj) += ckl.eval(pt) * w;
          }
      }
      raw.push_back(std::move(ra));
    }
  }

  // Coefficient constant: smallest c making every sup size condition hold.
  double c = 0.0;
  for (const auto& ra : raw) c = std::max(c, ra.A.max_abs() * std::exp2(-ra.level));
  if (c == 0.0) c = 1.0;
  dec.patch_constant = c;

  const double ball_factor = std::sqrt(static_cast<double>(g.dim)) * kStarDilation / 2.0 * (1.0 + 1.0 / 8.0);
  for (auto& ra : raw) {
    if (ra.A.max_abs() == 0.0) continue;
    Atom atom;
    atom.center = ra.center;
    atom.d = ctx.d;
    atom.q = std::numeric_limits<double>::infinity();
    double r = ball_factor * ra.side;
    // Inflate to the computed support when the fixed dilation falls short.
    for (int i = ra.A.box.lo[0]; i < ra.A.box.hi[0]; ++i)
      for (int jj = ra.A.box.lo[1]; jj < ra.A.box.hi[1]; ++jj) {
        if (ra.A.at(i, jj) == 0.0) continue;
        double dx = g.coord(i) - ra.center[0];
        double dy = g.dim == 2 ? g.coord(jj) - ra.center[1] : 0.0;
        r = std::max(r, std::sqrt(dx * dx + dy * dy));
      }
    atom.radius = r;
    atom.chi_norm = luxemburg_norm(ball_indicator(g, atom.center, atom.radius), p);
    double lam = c * std::exp2(ra.level) * atom.chi_norm;
    atom.values = std::move(ra.A);
    double inv = 1.0 / lam;
    for (double& v : atom.values.v) v *= inv;
    dec.atoms.push_back(std::move(atom));
    dec.coeffs.push_back(lam);
    dec.provenance.emplace_back(ra.level, ra.cube);
  }

  dec.residual = f;
  for (std::size_t a = 0; a < dec.atoms.size(); ++a)
    dec.atoms[a].values.add_to(dec.residual, -dec.coeffs[a]);
  dec.truncation_bound = std::max(residual_tol * f.max_abs(),
                                  2.0 * dec.patch_constant * std::exp2(dec.j_min));
  return dec;
}

double atomic_norm(const AtomicDecomposition& dec, const Grid& g, const ExponentFunction& p) {
  if (dec.atoms.empty()) return 0.0;
  GridFunction field(g);
  for (std::size_t a = 0; a < dec.atoms.size(); ++a) {
    const Atom& atom = dec.atoms[a];
    double chi = atom.chi_norm > 0 ? atom.chi_norm
                                   : luxemburg_norm(ball_indicator(g, atom.center, atom.radius), p);
    GridFunction ind = ball_indicator(g, atom.center, atom.radius);
    double w = dec.coeffs[a] / chi;
    for (std::size_t k = 0; k < field.size(); ++k) field.values[k] += w * ind.values[k];
  }
  return luxemburg_norm(field, p);
}

double finite_atom_q_threshold(const ExponentFunction& p, const MP0Context& ctx) {
  int n = p.grid().dim;
  return std::max({1.0, p.p_plus,
                   ctx.p0 * (1.0 + std::exp2(n + 3) * ctx.maximal_norm_bound)});
}

AtomicDecomposition finite_regroup(const GridFunction& f, const ExponentFunction& p,
                                   const MP0Context& ctx, const TestDictionary& dict, double q) {
  const Grid& g = f.grid;
  double qmin = finite_atom_q_threshold(p, ctx);
  if (!(q > qmin))
    throw std::invalid_argument("q must exceed the threshold " + std::to_string(qmin));

  AtomicDecomposition canon = canonical_decompose(f, p, ctx, dict);

  // Support radius of f around the origin.
  double R = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (f.values[k] == 0.0) continue;
    Point pt = g.point(k);
    R = std::max(R, g.dim == 1 ? std::abs(pt[0]) : norm2(pt));
  }
  R = std::max(R + 0.5 * g.spacing, 1.0);

  // j' = largest j with 2^j below the grand-max sup outside B(0,4R), so that
  // higher levels live inside B(0,4R).
  double sup_out = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point pt = g.point(k);
    double r = g.dim == 1 ? std::abs(pt[0]) : norm2(pt);
    if (r > 4.0 * R) sup_out = std::max(sup_out, canon.grand.values[k]);
  }
  int j_prime = sup_out > 0 ? static_cast<int>(std::ceil(std::log2(sup_out))) - 1 : canon.j_min - 1;

  AtomicDecomposition out;
  out.residual = canon.residual;
  out.truncation_bound = canon.truncation_bound;
  out.patch_constant = canon.patch_constant;
  out.grand = canon.grand;
  out.j_min = canon.j_min;
  out.j_max = canon.j_max;

  GridFunction h_field(g);
  std::vector<std::size_t> tail_atoms;
  for (std::size_t a = 0; a < canon.atoms.size(); ++a) {
    if (canon.provenance[a].first <= j_prime)
      canon.atoms[a].values.add_to(h_field, canon.coeffs[a]);
    else
      tail_atoms.push_back(a);
  }

  // Scaled sup-atom on B(0, 4R).
  if (h_field.max_abs() > 0) {
    Atom h;
    h.center = {0.0, 0.0};
    h.radius = 4.0 * R;
    h.q = std::numeric_limits<double>::infinity();
    h.d = ctx.d;
    h.chi_norm = luxemburg_norm(ball_indicator(g, h.center, h.radius), p);
    double c_h = h_field.max_abs() * h.chi_norm;
    IndexBox full;
    full.lo = {0, 0};
    full.hi = {g.pts_per_axis, g.dim == 1 ? 1 : g.pts_per_axis};
    h.values = WindowedField(full);
    for (int i = full.lo[0]; i < full.hi[0]; ++i)
      for (int j = full.lo[1]; j < full.hi[1]; ++j)
        h.values.at(i, j) = h_field.values[g.index(i, g.dim == 1 ? 0 : j)] / c_h;
    out.atoms.push_back(std::move(h));
    out.coeffs.push_back(c_h);
    out.provenance.emplace_back(j_prime, -1);
  }

  // Sort the tail by |j| + k and peel the F_i prefix until the leftover
  // satisfies the (p, q) size condition on its support ball.
  std::sort(tail_atoms.begin(), tail_atoms.end(), [&](std::size_t x, std::size_t y) {
    int ix = std::abs(canon.provenance[x].first) + canon.provenance[x].second;
    int iy = std::abs(canon.provenance[y].first) + canon.provenance[y].second;
    return ix < iy;
  });
  GridFunction tail(g);
  for (std::size_t a : tail_atoms) canon.atoms[a].values.add_to(tail, canon.coeffs[a]);

  auto tail_ball_radius = [&]() {
    double r = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (tail.values[k] == 0.0) continue;
      Point pt = g.point(k);
      r = std::max(r, (g.dim == 1 ? std::abs(pt[0]) : norm2(pt)) + 0.5 * g.spacing);
    }
    return r;
  };
  auto tail_is_atom = [&](double& rad, double& chi, double& lhs, double& rhs) {
    rad = tail_ball_radius();
    if (rad == 0.0) {
      chi = lhs = rhs = 0.0;
      return true;  // empty tail
    }
    chi = luxemburg_norm(ball_indicator(g, {0.0, 0.0}, rad), p);
    BallMeasure bm = ball_measure(g, {0.0, 0.0}, rad);
    double acc = 0.0;
    for (double v : tail.values) acc += std::pow(std::abs(v), q);
    lhs = std::pow(acc * g.cell_volume(), 1.0 / q);
    rhs = std::pow(bm.measure, 1.0 / q) / chi;
    return lhs <= rhs * (1 + 1e-9);
  };

  std::size_t peeled = 0;
  double rad = 0, chi = 0, lhs = 0, rhs = 0;
  bool ok = tail_is_atom(rad, chi, lhs, rhs);
  while (!ok && peeled < tail_atoms.size()) {
    std::size_t a = tail_atoms[peeled++];
    out.atoms.push_back(canon.atoms[a]);
    out.coeffs.push_back(canon.coeffs[a]);
    out.provenance.push_back(canon.provenance[a]);
    canon.atoms[a].values.add_to(tail, -canon.coeffs[a]);
    ok = tail_is_atom(rad, chi, lhs, rhs);
  }
  if (!ok)
    throw std::runtime_error("index range exhausted; achieved tail norm " + std::to_string(lhs) +
                             " vs required " + std::to_string(rhs));

  if (rad > 0.0) {
    Atom t;
    t.center = {0.0, 0.0};
    t.radius = rad;
    t.q = q;
    t.d = ctx.d;
    t.chi_norm = chi;
    IndexBox tb = box_window(g, t.center, rad);
    t.values = WindowedField(tb);
    for (int i = tb.lo[0]; i < tb.hi[0]; ++i)
      for (int j = tb.lo[1]; j < tb.hi[1]; ++j)
        t.values.at(i, j) = tail.values[g.index(i, g.dim == 1 ? 0 : j)];
    out.atoms.push_back(std::move(t));
    out.coeffs.push_back(1.0);
    out.provenance.emplace_back(j_prime, -2);
  }
  return out;
}

}  // namespace hardyvar
