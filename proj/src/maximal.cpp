#include "hardyvar/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "hardyvar/signals.hpp"

namespace hardyvar {

namespace {

// Prefix sums of |f| shared by the oracle and fast paths; the summation
// order is fixed, so every window average is the same double in both.
struct Prefix1D {
  std::vector<double> s;  // s[i+1] = s[i] + |f[i]|
  int m;
  explicit Prefix1D(const GridFunction& f) : m(f.grid.pts_per_axis) {
    s.assign(m + 1, 0.0);
    for (int i = 0; i < m; ++i) s[i + 1] = s[i] + std::abs(f.values[i]);
  }
  double window_avg(int c, int w) const {
    int lo = std::max(c - w, 0);
    int hi = std::min(c + w + 1, m);
    double cnt = static_cast<double>(2 * w + 1);
    return (s[hi] - s[lo]) / cnt;
  }
};

struct Prefix2D {
  std::vector<double> s;  // (m+1)x(m+1) summed-area table of |f|
  int m;
  explicit Prefix2D(const GridFunction& f) : m(f.grid.pts_per_axis) {
    s.assign(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
    auto S = [&](int i, int j) -> double& { return s[static_cast<std::size_t>(i) * (m + 1) + j]; };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        S(i + 1, j + 1) = std::abs(f.at(i, j)) + S(i, j + 1) + S(i + 1, j) - S(i, j);
  }
  double box_sum(int i0, int j0, int i1, int j1) const {  // half-open, clipped
    i0 = std::max(i0, 0); j0 = std::max(j0, 0);
    i1 = std::min(i1, m); j1 = std::min(j1, m);
    if (i0 >= i1 || j0 >= j1) return 0.0;
    auto S = [&](int i, int j) { return s[static_cast<std::size_t>(i) * (m + 1) + j]; };
    return S(i1, j1) - S(i0, j1) - S(i1, j0) + S(i0, j0);
  }
  double window_avg(int ci, int cj, int w) const {
    double cnt = static_cast<double>(2 * w + 1);
    return box_sum(ci - w, cj - w, ci + w + 1, cj + w + 1) / (cnt * cnt);
  }
};

// Sliding maximum with centered window [i-w, i+w], clipped; monotone deque.
void sliding_max(const std::vector<double>& a, int w, std::vector<double>& out) {
  const int n = static_cast<int>(a.size());
  out.assign(n, 0.0);
  std::deque<int> dq;
  int added = 0;
  for (int i = 0; i < n; ++i) {
    for (; added <= std::min(i + w, n - 1); ++added) {
      while (!dq.empty() && a[dq.back()] <= a[added]) dq.pop_back();
      dq.push_back(added);
    }
    while (dq.front() < i - w) dq.pop_front();
    out[i] = a[dq.front()];
  }
}

GridFunction maximal_1d(const GridFunction& f, MaxAlgorithm alg) {
  const int m = f.grid.pts_per_axis;
  const int W = m - 1;  // beyond this every average only shrinks
  Prefix1D pre(f);
  GridFunction out(f.grid);
  if (alg == MaxAlgorithm::oracle) {
    for (int x = 0; x < m; ++x) {
      double best = 0.0;
      for (int w = 0; w <= W; ++w)
        for (int c = std::max(0, x - w); c <= std::min(m - 1, x + w); ++c)
          best = std::max(best, pre.window_avg(c, w));
      out.values[x] = best;
    }
    return out;
  }
  std::vector<double> avg(m), sl;
  for (int w = 0; w <= W; ++w) {
    for (int c = 0; c < m; ++c) avg[c] = pre.window_avg(c, w);
    sliding_max(avg, w, sl);
    for (int x = 0; x < m; ++x) out.values[x] = std::max(out.values[x], sl[x]);
  }
  return out;
}

GridFunction maximal_2d(const GridFunction& f, MaxAlgorithm alg) {
  const int m = f.grid.pts_per_axis;
  const int W = m - 1;
  Prefix2D pre(f);
  GridFunction out(f.grid);
  if (alg == MaxAlgorithm::oracle) {
    for (int xi = 0; xi < m; ++xi) {
      for (int xj = 0; xj < m; ++xj) {
        double best = 0.0;
        for (int w = 0; w <= W; ++w)
          for (int ci = std::max(0, xi - w); ci <= std::min(m - 1, xi + w); ++ci)
            for (int cj = std::max(0, xj - w); cj <= std::min(m - 1, xj + w); ++cj)
              best = std::max(best, pre.window_avg(ci, cj, w));
        out.at(xi, xj) = best;
      }
    }
    return out;
  }
  std::vector<double> avg(static_cast<std::size_t>(m) * m);
  std::vector<double> row(m), rowmax(m);
  std::vector<double> tmp(static_cast<std::size_t>(m) * m);
  std::vector<double> col(m), colmax(m);
  for (int w = 0; w <= W; ++w) {
    for (int ci = 0; ci < m; ++ci)
      for (int cj = 0; cj < m; ++cj)
        avg[static_cast<std::size_t>(ci) * m + cj] = pre.window_avg(ci, cj, w);
    // Separable sliding max: rows then columns.
    for (int ci = 0; ci < m; ++ci) {
      for (int cj = 0; cj < m; ++cj) row[cj] = avg[static_cast<std::size_t>(ci) * m + cj];
      sliding_max(row, w, rowmax);
      for (int cj = 0; cj < m; ++cj) tmp[static_cast<std::size_t>(ci) * m + cj] = rowmax[cj];
    }
    for (int cj = 0; cj < m; ++cj) {
      for (int ci = 0; ci < m; ++ci) col[ci] = tmp[static_cast<std::size_t>(ci) * m + cj];
      sliding_max(col, w, colmax);
      for (int xi = 0; xi < m; ++xi) {
        double& o = out.at(xi, cj);
        o = std::max(o, colmax[xi]);
      }
    }
  }
  return out;
}

}  // namespace

GridFunction hl_maximal(const GridFunction& f, MaxAlgorithm alg) {
  return f.grid.dim == 1 ? maximal_1d(f, alg) : maximal_2d(f, alg);
}

MaximalReport hl_maximal_report(const GridFunction& f, MaxAlgorithm alg) {
  return MaximalReport{hl_maximal(f, alg), alg};
}

double probe_operator_norm(const ExponentFunction& p, std::span<const GridFunction> probes,
                           MaxAlgorithm alg) {
  if (probes.empty()) throw std::invalid_argument("probe list must be nonempty");
  double best = 0.0;
  for (const auto& f : probes) {
    double nf = luxemburg_norm(f, p);
    if (nf == 0.0) throw std::invalid_argument("probe must be nonzero");
    double nm = luxemburg_norm(hl_maximal(f, alg), p);
    best = std::max(best, nm / nf);
  }
  return best;
}

std::vector<GridFunction> standard_probes(const Grid& g) {
  std::vector<GridFunction> probes;
  double L = g.half_width;
  probes.push_back(ball_indicator(g, {0.0, 0.0}, L / 8));
  probes.push_back(ball_indicator(g, {0.0, 0.0}, L / 2));
  probes.push_back(ball_indicator(g, {L / 2, 0.0}, L / 4));
  probes.push_back(spike_signal(g, {0.0, 0.0}, 1.0));
  probes.push_back(bump_signal(g, {0.0, 0.0}, L / 3, 1.0));
  return probes;
}

std::pair<double, double> vector_maximal(std::span<const GridFunction> fs, double r,
                                         const ExponentFunction& p) {
  if (fs.empty()) throw std::invalid_argument("vector maximal needs a nonempty family");
  if (!(r > 1)) throw std::invalid_argument("vector maximal needs r > 1");
  const Grid& g = fs.front().grid;
  GridFunction lhs_s(g), rhs_s(g);
  for (const auto& f : fs) {
    if (!(f.grid == g)) throw std::invalid_argument("vector maximal: grids must agree");
    GridFunction mf = hl_maximal(f);
    for (std::size_t k = 0; k < g.size(); ++k) {
      lhs_s.values[k] += std::pow(mf.values[k], r);
      rhs_s.values[k] += std::pow(std::abs(f.values[k]), r);
    }
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    lhs_s.values[k] = std::pow(lhs_s.values[k], 1.0 / r);
    rhs_s.values[k] = std::pow(rhs_s.values[k], 1.0 / r);
  }
  return {luxemburg_norm(lhs_s, p), luxemburg_norm(rhs_s, p)};
}

IterationResult rubio_iteration(const GridFunction& h, const MP0Context& ctx) {
  for (double v : h.values)
    if (v < 0) throw std::invalid_argument("rubio iteration needs h >= 0");
  if (h.max_abs() == 0.0) throw std::invalid_argument("rubio iteration needs h != 0");
  const double B = ctx.maximal_norm_bound;
  if (!(B > 0)) throw std::invalid_argument("context carries no maximal norm bound");
  ExponentFunction dual = conjugate(ctx.exponent.divided_by(ctx.p0));
  const double nh = luxemburg_norm(h, dual);

  IterationResult res;
  res.B = B;
  res.Rh = h;
  GridFunction term = h;
  double prev_norm = nh;
  int i = 0;
  for (;;) {
    GridFunction next = scaled(hl_maximal(term), 1.0 / (2.0 * B));
    double nn = luxemburg_norm(next, dual);
    if (nn <= 5e-9 * nh) {
      res.terms_used = i;
      res.tail_bound = 2.0 * nn;
      res.next_term = next;
      break;
    }
    if (i > 4 && nn > prev_norm * (1 + 1e-12))
      throw std::runtime_error("rubio iteration diverges; increase the maximal norm bound B");
    if (i > 400) throw std::runtime_error("rubio iteration failed to converge; increase B");
    for (std::size_t k = 0; k < res.Rh.size(); ++k) res.Rh.values[k] += next.values[k];
    term = std::move(next);
    prev_norm = nn;
    ++i;
  }
  return res;
}

}  // namespace hardyvar
