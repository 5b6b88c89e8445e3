#include "hardyvar/czwhitney.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hardyvar {

namespace {

// Smooth cutoff: 1 on [-1/2,1/2], 0 outside [-9/16, 9/16].
double cutoff1d(double u) {
  double au = std::abs(u);
  const double inner = 0.5;
  const double outer = 0.5 * kTildeDilation;  // 9/16
  if (au <= inner) return 1.0;
  if (au >= outer) return 0.0;
  double s = (outer - au) / (outer - inner);
  double b1 = std::exp(-1.0 / s);
  double b2 = std::exp(-1.0 / (1.0 - s));
  return b1 / (b1 + b2);
}

// Counts of omega cells via a summed-area table for O(1) box queries.
struct MaskCounts {
  int m, jdim;
  std::vector<std::int64_t> s;
  MaskCounts(const Grid& g, const std::vector<std::uint8_t>& omega)
      : m(g.pts_per_axis), jdim(g.dim == 1 ? 1 : g.pts_per_axis) {
    s.assign(static_cast<std::size_t>(m + 1) * (jdim + 1), 0);
    auto S = [&](int i, int j) -> std::int64_t& {
      return s[static_cast<std::size_t>(i) * (jdim + 1) + j];
    };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < jdim; ++j)
        S(i + 1, j + 1) = (omega[g.index(i, j)] ? 1 : 0) + S(i, j + 1) + S(i + 1, j) - S(i, j);
  }
  // Count of omega cells in the UNCLIPPED box; off-grid cells contribute 0.
  std::int64_t count(int i0, int j0, int i1, int j1) const {
    i0 = std::max(i0, 0);
    j0 = std::max(j0, 0);
    i1 = std::min(i1, m);
    j1 = std::min(j1, jdim);
    if (i0 >= i1 || j0 >= j1) return 0;
    auto S = [&](int i, int j) { return s[static_cast<std::size_t>(i) * (jdim + 1) + j]; };
    return S(i1, j1) - S(i0, j1) - S(i1, j0) + S(i0, j0);
  }
};

}  // namespace

IndexBox WhitneyCube::core_box(const Grid& g) const {
  IndexBox b;
  b.lo[0] = cell_lo[0];
  b.hi[0] = std::min(cell_lo[0] + side_cells, g.pts_per_axis);
  if (g.dim == 2) {
    b.lo[1] = cell_lo[1];
    b.hi[1] = std::min(cell_lo[1] + side_cells, g.pts_per_axis);
  } else {
    b.lo[1] = 0;
    b.hi[1] = 1;
  }
  return b;
}

IndexBox WhitneyCube::tilde_box(const Grid& g) const {
  return box_window(g, center, 0.5 * kTildeDilation * side);
}

IndexBox WhitneyCube::star_box(const Grid& g) const {
  return box_window(g, center, 0.5 * kStarDilation * side);
}

bool WhitneyCube::point_in_star(const Grid& g, std::size_t flat) const {
  Point p = g.point(flat);
  double half = 0.5 * kStarDilation * side;
  if (std::abs(p[0] - center[0]) > half + 1e-12 * side) return false;
  if (g.dim == 2 && std::abs(p[1] - center[1]) > half + 1e-12 * side) return false;
  return true;
}

std::vector<WhitneyCube> whitney_decompose(const Grid& g, const std::vector<std::uint8_t>& omega) {
  if (omega.size() != g.size()) throw std::invalid_argument("omega mask size mismatch");
  const int m = g.pts_per_axis;
  const int jdim = g.dim == 1 ? 1 : m;
  std::int64_t total_omega = 0;
  for (auto v : omega) total_omega += v ? 1 : 0;
  if (total_omega == 0) return {};
  if (total_omega == static_cast<std::int64_t>(g.size()))
    throw std::invalid_argument("omega is the whole lattice; no complement to measure against");

  MaskCounts counts(g, omega);
  int root = 1;
  while (root < m) root *= 2;

  std::vector<WhitneyCube> cubes;
  struct Node {
    int a1, a2, s;
  };
  std::vector<Node> stack{{0, 0, root}};
  while (!stack.empty()) {
    Node nd = stack.back();
    stack.pop_back();
    int s = nd.s;
    std::int64_t vol = static_cast<std::int64_t>(s) * (g.dim == 1 ? 1 : s);
    std::int64_t inside =
        counts.count(nd.a1, g.dim == 1 ? 0 : nd.a2, nd.a1 + s, g.dim == 1 ? 1 : nd.a2 + s);
    if (inside == 0) continue;
    bool full = inside == vol;  // also requires the cube fully on-grid
    if (full) {
      // Accept iff the box inflated by s-1 cells is still entirely omega,
      // i.e. every complement cell sits at gap >= s-1 (dist >= diam).
      int i0 = nd.a1 - (s - 1), i1 = nd.a1 + 2 * s - 1;
      int j0 = g.dim == 1 ? 0 : nd.a2 - (s - 1);
      int j1 = g.dim == 1 ? 1 : nd.a2 + 2 * s - 1;
      bool in_grid = i0 >= 0 && i1 <= m && j0 >= 0 && j1 <= jdim;
      std::int64_t want = static_cast<std::int64_t>(i1 - i0) * (j1 - j0);
      if (in_grid && counts.count(i0, j0, i1, j1) == want) {
        WhitneyCube cube;
        cube.cell_lo = {nd.a1, g.dim == 1 ? 0 : nd.a2};
        cube.side_cells = s;
        cube.side = s * g.spacing;
        cube.center = {g.coord(nd.a1) + 0.5 * (s - 1) * g.spacing,
                       g.dim == 2 ? g.coord(nd.a2) + 0.5 * (s - 1) * g.spacing : 0.0};
        // Exact max-metric gap: grow the ring until a complement cell shows.
        int gap = s - 1;
        for (;; ++gap) {
          int ri0 = nd.a1 - gap - 1, ri1 = nd.a1 + s + gap + 1;
          int rj0 = g.dim == 1 ? 0 : nd.a2 - gap - 1;
          int rj1 = g.dim == 1 ? 1 : nd.a2 + s + gap + 1;
          bool ring_on_grid = ri0 >= 0 && ri1 <= m && rj0 >= 0 && rj1 <= jdim;
          std::int64_t ring_vol = static_cast<std::int64_t>(ri1 - ri0) * (rj1 - rj0);
          if (!ring_on_grid || counts.count(ri0, rj0, ri1, rj1) != ring_vol) break;
          if (gap > 8 * s + 8) break;  // invariant violation guard
        }
        cube.dist_inf = (gap + 1) * g.spacing;
        cubes.push_back(cube);
        continue;
      }
    }
    if (s == 1) {
      // Single omega cells always satisfy dist >= h = diam under the
      // one-cell-offset metric, so this branch is unreachable; keep the
      // cube rather than lose coverage if it ever trips.
      WhitneyCube cube;
      cube.cell_lo = {nd.a1, g.dim == 1 ? 0 : nd.a2};
      cube.side_cells = 1;
      cube.side = g.spacing;
      cube.center = {g.coord(nd.a1), g.dim == 2 ? g.coord(nd.a2) : 0.0};
      cube.dist_inf = g.spacing;
      cubes.push_back(cube);
      continue;
    }
    int half = s / 2;
    if (g.dim == 1) {
      stack.push_back({nd.a1 + half, 0, half});
      stack.push_back({nd.a1, 0, half});
    } else {
      stack.push_back({nd.a1 + half, nd.a2 + half, half});
      stack.push_back({nd.a1 + half, nd.a2, half});
      stack.push_back({nd.a1, nd.a2 + half, half});
      stack.push_back({nd.a1, nd.a2, half});
    }
  }
  return cubes;
}

std::vector<WindowedField> partition_of_unity(const Grid& g, const std::vector<WhitneyCube>& cubes) {
  std::vector<WindowedField> zetas;
  zetas.reserve(cubes.size());
  GridFunction zsum(g);
  for (const auto& cube : cubes) {
    WindowedField z(cube.tilde_box(g));
    for (int i = z.box.lo[0]; i < z.box.hi[0]; ++i) {
      double zx = cutoff1d((g.coord(i) - cube.center[0]) / cube.side);
      for (int j = z.box.lo[1]; j < z.box.hi[1]; ++j) {
        double val = zx;
        if (g.dim == 2) val *= cutoff1d((g.coord(j) - cube.center[1]) / cube.side);
        z.at(i, j) = val;
        zsum.values[g.index(i, g.dim == 1 ? 0 : j)] += val;
      }
    }
    zetas.push_back(std::move(z));
  }
  for (auto& z : zetas) {
    for (int i = z.box.lo[0]; i < z.box.hi[0]; ++i)
      for (int j = z.box.lo[1]; j < z.box.hi[1]; ++j) {
        double denom = zsum.values[g.index(i, g.dim == 1 ? 0 : j)];
        double& v = z.at(i, j);
        v = denom > 0.0 ? v / denom : 0.0;
      }
  }
  return zetas;
}

namespace {

int basis_size(int dim, int d) { return dim == 1 ? d + 1 : (d + 1) * (d + 2) / 2; }

// Monomial exponents ordered by (total degree, first exponent).
std::vector<std::pair<int, int>> basis_exponents(int dim, int d) {
  std::vector<std::pair<int, int>> e;
  if (dim == 1) {
    for (int a = 0; a <= d; ++a) e.emplace_back(a, 0);
  } else {
    for (int tot = 0; tot <= d; ++tot)
      for (int a = tot; a >= 0; --a) e.emplace_back(a, tot - a);
  }
  return e;
}

}  // namespace

double PolyCoeffs::eval(const Point& p) const {
  double X = (p[0] - center[0]) / scale;
  double Y = dim == 2 ? (p[1] - center[1]) / scale : 0.0;
  auto exps = basis_exponents(dim, degree);
  double v = 0.0;
  for (std::size_t k = 0; k < exps.size(); ++k)
    v += coef[k] * std::pow(X, exps[k].first) * (dim == 2 ? std::pow(Y, exps[k].second) : 1.0);
  return v;
}

PolyCoeffs poly_project(const GridFunction& f, const WhitneyCube& cube, const WindowedField& eta,
                        int d) {
  const Grid& g = f.grid;
  if (d < 0) d = 0;
  double mass = 0.0;
  for (double v : eta.v) mass += v;
  mass *= g.cell_volume();
  if (!(mass > 0)) throw std::invalid_argument("partition weight has zero mass");

  bool degraded = false;
  for (int deg = d;; --deg) {
    int nb = basis_size(g.dim, deg);
    auto exps = basis_exponents(g.dim, deg);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);
    std::vector<double> bv(nb);
    for (int i = eta.box.lo[0]; i < eta.box.hi[0]; ++i) {
      if (i < 0 || i >= g.pts_per_axis) continue;
      for (int j = eta.box.lo[1]; j < eta.box.hi[1]; ++j) {
        if (g.dim == 2 && (j < 0 || j >= g.pts_per_axis)) continue;
        double w = eta.at(i, j);
        if (w == 0.0) continue;
        w *= g.cell_volume() / mass;
        double X = (g.coord(i) - cube.center[0]) / cube.side;
        double Y = g.dim == 2 ? (g.coord(j) - cube.center[1]) / cube.side : 0.0;
        for (int b = 0; b < nb; ++b)
          bv[b] = std::pow(X, exps[b].first) * (g.dim == 2 ? std::pow(Y, exps[b].second) : 1.0);
        double fv = f.values[g.index(i, g.dim == 1 ? 0 : j)];
        for (int r = 0; r < nb; ++r) {
          rhs[r] += w * fv * bv[r];
          for (int c = r; c < nb; ++c) G(r, c) += w * bv[r] * bv[c];
        }
      }
    }
    for (int r = 0; r < nb; ++r)
      for (int c = 0; c < r; ++c) G(r, c) = G(c, r);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    bool ok = ldlt.info() == Eigen::Success;
    Eigen::VectorXd sol;
    if (ok) {
      sol = ldlt.solve(rhs);
      double resid = (G * sol - rhs).norm();
      double scale = rhs.norm() + G.norm() * sol.norm() + 1e-300;
      ok = resid <= 1e-8 * scale && sol.allFinite();
    }
    if (ok || deg == 0) {
      PolyCoeffs out;
      out.center = cube.center;
      out.scale = cube.side;
      out.degree = deg;
      out.dim = g.dim;
      out.degraded = degraded && deg < d;
      if (ok) {
        out.coef.assign(sol.data(), sol.data() + nb);
      } else {
        // Degenerate weight: the degree-0 projection is the weighted mean.
        out.coef = {rhs[0] / std::max(G(0, 0), 1e-300)};
      }
      return out;
    }
    degraded = true;
  }
}

CZResult cz_core(const GridFunction& f, double lambda, const MP0Context& ctx,
                 const GridFunction& grand) {
  if (!(lambda > 0)) throw std::invalid_argument("level lambda must be positive");
  const Grid& g = f.grid;
  CZResult res;
  res.lambda = lambda;
  res.degree = std::max(ctx.d, 0);
  res.omega.assign(g.size(), 0);
  std::size_t count = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (grand.values[k] > lambda) {
      res.omega[k] = 1;
      ++count;
    }
  if (count == g.size())
    throw std::runtime_error("level set is the whole lattice; raise lambda");
  res.g = f;
  if (count == 0) return res;  // trivial split: g = f, no bad part

  res.cubes = whitney_decompose(g, res.omega);
  res.partition = partition_of_unity(g, res.cubes);
  res.projections.reserve(res.cubes.size());
  res.bs.reserve(res.cubes.size());
  for (std::size_t k = 0; k < res.cubes.size(); ++k) {
    PolyCoeffs ck = poly_project(f, res.cubes[k], res.partition[k], res.degree);
    WindowedField bk(res.partition[k].box);
    for (int i = bk.box.lo[0]; i < bk.box.hi[0]; ++i)
      for (int j = bk.box.lo[1]; j < bk.box.hi[1]; ++j) {
        double w = res.partition[k].at(i, j);
        if (w == 0.0) continue;
        Point p{g.coord(i), g.dim == 2 ? g.coord(j) : 0.0};
        bk.at(i, j) = (f.values[g.index(i, g.dim == 1 ? 0 : j)] - ck.eval(p)) * w;
      }
    res.projections.push_back(std::move(ck));
    res.bs.push_back(std::move(bk));
  }
  for (const auto& bk : res.bs) bk.add_to(res.g, -1.0);
  return res;
}

CZResult cz_decompose(const GridFunction& f, double lambda, const MP0Context& ctx,
                      const TestDictionary& dict, bool measure_estimates) {
  GridFunction grand = grand_max(f, dict);
  CZResult res = cz_core(f, lambda, ctx, grand);
  if (!measure_estimates) return res;
  const Grid& g = f.grid;

  CZEstimates& est = res.estimates;
  est.c_g = res.g.max_abs() / lambda;
  est.far_exponent = g.dim + (ctx.d >= 1 ? ctx.d : 0) + 1;

  std::vector<int> overlap(g.size(), 0);
  for (const auto& cube : res.cubes) {
    IndexBox sb = cube.star_box(g);
    for (int i = sb.lo[0]; i < sb.hi[0]; ++i)
      for (int j = sb.lo[1]; j < sb.hi[1]; ++j) ++overlap[g.index(i, g.dim == 1 ? 0 : j)];
  }
  for (int v : overlap) est.overlap = std::max(est.overlap, v);

  est.moment_errors.resize(res.cubes.size(), 0.0);
  for (std::size_t k = 0; k < res.cubes.size(); ++k) {
    const auto& bk = res.bs[k];
    const auto& cube = res.cubes[k];
    double l1 = 0.0;
    for (double v : bk.v) l1 += std::abs(v);
    l1 *= g.cell_volume();
    auto exps = basis_exponents(g.dim, res.degree);
    double worst = 0.0;
    for (auto [a, b] : exps) {
      double mom = 0.0;
      for (int i = bk.box.lo[0]; i < bk.box.hi[0]; ++i)
        for (int j = bk.box.lo[1]; j < bk.box.hi[1]; ++j) {
          double X = (g.coord(i) - cube.center[0]) / cube.side;
          double Y = g.dim == 2 ? (g.coord(j) - cube.center[1]) / cube.side : 0.0;
          mom += bk.at(i, j) * std::pow(X, a) * (g.dim == 2 ? std::pow(Y, b) : 1.0);
        }
      mom *= g.cell_volume();
      worst = std::max(worst, std::abs(mom) / std::max(l1, 1e-300));
    }
    est.moment_errors[k] = worst;

    GridFunction bk_dense = bk.dense(g);
    GridFunction mphi = radial_max(bk_dense, dict.primary(), dict.ladder);
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (cube.point_in_star(g, x)) {
        double denom = std::max(grand.values[x], 1e-300);
        est.bk_near_const = std::max(est.bk_near_const, mphi.values[x] / denom);
      } else {
        Point p = g.point(x);
        double dx = g.dim == 1 ? std::abs(p[0] - cube.center[0])
                               : norm2({p[0] - cube.center[0], p[1] - cube.center[1]});
        double ratio = mphi.values[x] * std::pow(dx, est.far_exponent) /
                       (lambda * std::pow(cube.side, est.far_exponent));
        est.bk_far_const = std::max(est.bk_far_const, ratio);
      }
    }
  }
  return res;
}

}  // namespace hardyvar
