#include "hardyvar/vlebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hardyvar/maximal.hpp"
#include "hardyvar/signals.hpp"

namespace hardyvar {

ExponentFunction ExponentFunction::from_values(GridFunction values) {
  ExponentFunction p;
  p.base = std::move(values);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : p.base.values) {
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("exponent values must be finite and positive");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  p.p_minus = lo;
  p.p_plus = hi;
  return p;
}

ExponentFunction ExponentFunction::constant(const Grid& g, double p) {
  return from_values(GridFunction(g, p));
}

bool ExponentFunction::has_omega() const {
  for (auto m : omega_inf)
    if (m) return true;
  return false;
}

ExponentFunction ExponentFunction::scaled_by(double s) const {
  if (!(s > 0)) throw std::invalid_argument("exponent scale must be positive");
  if (has_omega()) throw std::invalid_argument("cannot scale an exponent with an infinite part");
  GridFunction v = base;
  for (auto& x : v.values) x *= s;
  return from_values(std::move(v));
}

ExponentFunction parse_exponent(const Grid& g, const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::istringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::strtod(tok.c_str(), nullptr));
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw std::invalid_argument("bad exponent spec: " + spec);
  };
  GridFunction v(g);
  if (kind == "const") {
    need(1);
    for (auto& x : v.values) x = args[0];
  } else if (kind == "step") {
    need(2);
    for (std::size_t k = 0; k < g.size(); ++k) v.values[k] = g.point(k)[0] <= 0 ? args[0] : args[1];
  } else if (kind == "sin") {
    need(2);
    for (std::size_t k = 0; k < g.size(); ++k) {
      Point p = g.point(k);
      double u = g.dim == 1 ? p[0] : p[0] + p[1];
      v.values[k] = args[0] + args[1] * std::sin(u);
    }
  } else if (kind == "logsmooth") {
    need(2);
    for (std::size_t k = 0; k < g.size(); ++k) {
      Point p = g.point(k);
      double r = g.dim == 1 ? std::abs(p[0]) : norm2(p);
      v.values[k] = args[0] + args[1] / std::log(std::exp(1.0) + r);
    }
  } else {
    throw std::invalid_argument("unknown exponent spec: " + spec);
  }
  return ExponentFunction::from_values(std::move(v));
}

double modular(const GridFunction& f, const ExponentFunction& p, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("modular needs lambda > 0");
  if (!f.same_grid(p.base)) throw std::invalid_argument("grid mismatch between f and exponent");
  const bool masked = !p.omega_inf.empty();
  double acc = 0.0;
  double sup_inf = 0.0;
  bool any_inf = false;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double a = std::abs(f.values[k]);
    if (masked && p.omega_inf[k]) {
      sup_inf = std::max(sup_inf, a);
      any_inf = true;
      continue;
    }
    if (a != 0.0) acc += std::pow(a / lambda, p.base.values[k]);
  }
  double out = acc * f.grid.cell_volume();
  if (any_inf) out += sup_inf / lambda;
  return out;
}

double luxemburg_norm(const GridFunction& f, const ExponentFunction& p) {
  double amax = f.max_abs();
  if (amax == 0.0) return 0.0;
  // Bracket start: max|f| * |supp f|^{1/p_-}, then halve/double to straddle 1.
  std::size_t supp = 0;
  for (double v : f.values)
    if (v != 0.0) ++supp;
  double meas = static_cast<double>(supp) * f.grid.cell_volume();
  double lam = amax * std::pow(std::max(meas, 1e-300), 1.0 / p.p_minus);
  if (!(lam > 0) || !std::isfinite(lam)) lam = amax;

  double lo = 0.0, hi = 0.0;
  double rho = modular(f, p, lam);
  int guard = 0;
  if (rho <= 1.0) {
    hi = lam;
    lo = lam;
    do {
      lo *= 0.5;
      rho = modular(f, p, lo);
      if (++guard > 200) return 0.0;  // f indistinguishable from zero at double range
    } while (rho <= 1.0);
  } else {
    lo = lam;
    hi = lam;
    do {
      hi *= 2.0;
      rho = modular(f, p, hi);
      if (++guard > 200) throw std::runtime_error("luxemburg bracket failed to close");
    } while (rho > 1.0);
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-11 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (modular(f, p, mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ExponentFunction conjugate(const ExponentFunction& p) {
  if (p.has_omega()) throw std::invalid_argument("conjugate of an exponent with an infinite part");
  ExponentFunction q;
  q.base = GridFunction(p.grid());
  q.omega_inf.assign(p.grid().size(), 0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool any_finite = false;
  for (std::size_t k = 0; k < p.base.size(); ++k) {
    double v = p.base.values[k];
    if (v < 1.0 - 1e-12) throw std::invalid_argument("conjugate undefined where p(x) < 1");
    if (v <= 1.0 + 1e-12) {
      q.omega_inf[k] = 1;  // 1/infinity = 0
      q.base.values[k] = std::numeric_limits<double>::infinity();
    } else {
      double w = v / (v - 1.0);
      q.base.values[k] = w;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      any_finite = true;
    }
  }
  if (!any_finite) {
    lo = hi = std::numeric_limits<double>::infinity();
  }
  q.p_minus = lo;
  q.p_plus = hi;
  if (!q.has_omega()) q.omega_inf.clear();
  return q;
}

LogHolderReport check_log_holder(const ExponentFunction& p) {
  const Grid& g = p.grid();
  LogHolderReport rep;
  const double h = g.spacing;
  int reach = static_cast<int>(std::floor(0.5 / h)) + 1;
  auto pval = [&](int i, int j) { return p.base.values[g.index(i, j)]; };
  const int m = g.pts_per_axis;
  const int jdim = g.dim == 1 ? 1 : m;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < jdim; ++j) {
      double pij = pval(i, j);
      for (int di = 0; di <= reach; ++di) {
        int i2 = i + di;
        if (i2 >= m) break;
        int dj_lo = (di == 0) ? 1 : -reach;  // avoid double-counting pairs
        if (g.dim == 1) {
          if (di == 0) continue;
          double dist = di * h;
          if (dist >= 0.5) break;
          double c = std::abs(pval(i2, 0) - pij) * (-std::log(dist));
          rep.C0 = std::max(rep.C0, c);
        } else {
          for (int dj = dj_lo; dj <= reach; ++dj) {
            int j2 = j + dj;
            if (j2 < 0 || j2 >= m) continue;
            double dist = h * std::sqrt(double(di) * di + double(dj) * dj);
            if (dist >= 0.5 || dist == 0.0) continue;
            double c = std::abs(pval(i2, j2) - pij) * (-std::log(dist));
            rep.C0 = std::max(rep.C0, c);
          }
        }
      }
    }
  }
  // p_inf read at the boundary-most lattice point (largest |x|, last wins).
  double best = -1.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point q = g.point(k);
    double r = g.dim == 1 ? std::abs(q[0]) : norm2(q);
    if (r >= best) {
      best = r;
      rep.p_inf = p.base.values[k];
    }
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point q = g.point(k);
    double r = g.dim == 1 ? std::abs(q[0]) : norm2(q);
    double c = std::abs(p.base.values[k] - rep.p_inf) * std::log(std::exp(1.0) + r);
    rep.C_inf = std::max(rep.C_inf, c);
  }
  return rep;
}

double verify_holder_pair(const GridFunction& f, const GridFunction& g, const ExponentFunction& p) {
  if (p.p_minus < 1.0) throw std::invalid_argument("holder pairing needs p_- >= 1");
  double nf = luxemburg_norm(f, p);
  double ng = luxemburg_norm(g, conjugate(p));
  if (nf == 0.0 || ng == 0.0) return 0.0;
  double prod = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) prod += std::abs(f.values[k] * g.values[k]);
  prod *= f.grid.cell_volume();
  return prod / (nf * ng);
}

double norm_of_power(const GridFunction& f, const ExponentFunction& p, double s) {
  if (!(s > 0)) throw std::invalid_argument("power must be positive");
  double lhs = luxemburg_norm(pow_abs(f, s), p);
  double rhs = std::pow(luxemburg_norm(f, p.scaled_by(s)), s);
  double scale = std::max({lhs, rhs, 1e-300});
  if (std::abs(lhs - rhs) > 1e-8 * scale)
    throw std::runtime_error("norm solver inconsistency: || |f|^s ||_p = " + std::to_string(lhs) +
                             " vs ||f||_{sp}^s = " + std::to_string(rhs));
  return lhs;
}

MP0Context MP0Context::make(const ExponentFunction& p, double p0, double B) {
  if (!p.is_p0_class()) throw std::invalid_argument("context needs a bounded positive exponent");
  MP0Context ctx;
  ctx.exponent = p;
  ctx.p0 = p0 > 0 ? p0 : p.p_minus / 2.0;
  if (!(ctx.p0 < p.p_minus)) throw std::invalid_argument("p0 must satisfy 0 < p0 < p_-");
  int n = p.grid().dim;
  ctx.d = std::max(-1, static_cast<int>(std::floor(n * (1.0 / ctx.p0 - 1.0))));
  ctx.gamma = static_cast<double>(n + ctx.d + 1) / n;
  if (B > 0) {
    ctx.maximal_norm_bound = B;
  } else {
    ExponentFunction dual = conjugate(p.divided_by(ctx.p0));
    ctx.maximal_norm_bound = 2.0 * probe_operator_norm(dual, standard_probes(p.grid()));
  }
  return ctx;
}

}  // namespace hardyvar
