#include "hardyvar/sio.hpp"

#include <cmath>
#include <complex>

#include "hardyvar/signals.hpp"
#include "hardyvar/smoothmax.hpp"

namespace hardyvar {

SIOKernel SIOKernel::hilbert() {
  SIOKernel k;
  k.name = "hilbert";
  k.dim = 1;
  k.order = 2;
  k.K = [](Point x) { return 1.0 / (M_PI * x[0]); };
  k.diagonal_cell_integral = 0.0;  // odd kernel
  return k;
}

SIOKernel SIOKernel::riesz(int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("riesz axis must be 0 or 1");
  SIOKernel k;
  k.name = axis == 0 ? "riesz1" : "riesz2";
  k.dim = 2;
  k.order = 2;
  k.K = [axis](Point x) {
    double r = norm2(x);
    return x[axis] / (2.0 * M_PI * r * r * r);
  };
  k.diagonal_cell_integral = 0.0;  // odd kernel
  return k;
}

namespace {

// Nested central differences for mixed partials of K away from the origin.
double kernel_deriv(const SIOKernel& k, int b1, int b2, Point x, double step) {
  if (b1 > 0) {
    Point xp = x, xm = x;
    xp[0] += step;
    xm[0] -= step;
    return (kernel_deriv(k, b1 - 1, b2, xp, step) - kernel_deriv(k, b1 - 1, b2, xm, step)) /
           (2.0 * step);
  }
  if (b2 > 0) {
    Point xp = x, xm = x;
    xp[1] += step;
    xm[1] -= step;
    return (kernel_deriv(k, b1, b2 - 1, xp, step) - kernel_deriv(k, b1, b2 - 1, xm, step)) /
           (2.0 * step);
  }
  return k.K(x);
}

}  // namespace

KernelRegularityReport verify_kernel_regularity(const SIOKernel& kernel,
                                                const std::vector<double>& radii, int order) {
  if (order > kernel.order)
    throw std::invalid_argument("requested order exceeds the kernel's declared regularity");
  for (double r : radii)
    if (!(r > 0)) throw std::invalid_argument("kernel evaluation at the origin");
  KernelRegularityReport rep;
  rep.order = order;
  rep.radii = radii;
  const int n = kernel.dim;
  rep.constants.assign(order + 2, 0.0);
  rep.per_radius.assign(order + 2, std::vector<double>(radii.size(), 0.0));

  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    double r = radii[ri];
    double step = 1e-3 * r;
    std::vector<Point> samples;
    if (n == 1) {
      samples.push_back({r, 0.0});
      samples.push_back({-r, 0.0});
    } else {
      for (int a = 0; a < 64; ++a) {
        double th = 2.0 * M_PI * (a + 0.5) / 64.0;
        samples.push_back({r * std::cos(th), r * std::sin(th)});
      }
    }
    for (int b = 0; b <= order + 1; ++b) {
      double sup = 0.0;
      for (const Point& x : samples) {
        double dmax = 0.0;
        for (int b1 = 0; b1 <= (n == 1 ? 0 : b); ++b1) {
          int bb1 = n == 1 ? b : b1;
          int bb2 = n == 1 ? 0 : b - b1;
          dmax = std::max(dmax, std::abs(kernel_deriv(kernel, bb1, bb2, x, step)));
          if (n == 1) break;
        }
        sup = std::max(sup, dmax * std::pow(r, n + b));
      }
      rep.per_radius[b][ri] = sup;
      rep.constants[b] = std::max(rep.constants[b], sup);
    }
  }
  // Scale stability flag: per-annulus constants within a decade of each other.
  for (int b = 0; b <= order + 1 && rep.homogeneous; ++b) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : rep.per_radius[b]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi > 0 && (lo == 0.0 || hi / lo > 10.0)) rep.homogeneous = false;
  }
  // Band-limited Fourier sanity check: symmetric principal-value sums.
  {
    double R = 64.0;
    double hh = 1.0 / 64.0;
    int n1 = static_cast<int>(R / hh);
    double sup = 0.0;
    for (double xi : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      std::complex<double> acc = 0.0;
      if (kernel.dim == 1) {
        for (int i = 1; i <= n1; ++i) {
          double x = i * hh;
          double kv = kernel.K({x, 0.0});
          double km = kernel.K({-x, 0.0});
          acc += std::complex<double>(kv) * std::exp(std::complex<double>(0, -2.0 * M_PI * xi * x));
          acc += std::complex<double>(km) * std::exp(std::complex<double>(0, 2.0 * M_PI * xi * x));
        }
        acc *= hh;
      } else {
        // Coarser 2D lattice over an annulus.
        double h2 = 1.0 / 8.0;
        int n2 = static_cast<int>(16.0 / h2);
        for (int i = -n2; i <= n2; ++i)
          for (int j = -n2; j <= n2; ++j) {
            if (i == 0 && j == 0) continue;
            double x = i * h2, y = j * h2;
            acc += std::complex<double>(kernel.K({x, y})) *
                   std::exp(std::complex<double>(0, -2.0 * M_PI * xi * x));
          }
        acc *= h2 * h2;
      }
      sup = std::max(sup, std::abs(acc));
    }
    rep.fourier_band_sup = sup;
  }
  return rep;
}

GridFunction apply_sio(const SIOKernel& kernel, const GridFunction& f) {
  const Grid& g = f.grid;
  if (kernel.dim != g.dim) throw std::invalid_argument("kernel dimension mismatch");
  GridFunction out(g);
  const int m = g.pts_per_axis;
  const double vol = g.cell_volume();
  if (g.dim == 1) {
    std::vector<double> kv(2 * m - 1, 0.0);  // kv[d + m-1] = K(d h)
    for (int d = -(m - 1); d <= m - 1; ++d)
      if (d != 0) kv[d + m - 1] = kernel.K({d * g.spacing, 0.0});
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        acc += kv[(i - j) + m - 1] * f.values[j];
      }
      double corr = kernel.diagonal_cell_integral ? *kernel.diagonal_cell_integral * f.values[i] : 0.0;
      out.values[i] = acc * vol + corr;
    }
  } else {
    int side = 2 * m - 1;
    std::vector<double> kv(static_cast<std::size_t>(side) * side, 0.0);
    for (int d1 = -(m - 1); d1 <= m - 1; ++d1)
      for (int d2 = -(m - 1); d2 <= m - 1; ++d2)
        if (d1 != 0 || d2 != 0)
          kv[static_cast<std::size_t>(d1 + m - 1) * side + (d2 + m - 1)] =
              kernel.K({d1 * g.spacing, d2 * g.spacing});
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int i2 = 0; i2 < m; ++i2) {
          const double* fr = &f.values[g.index(i2, 0)];
          const double* kr = &kv[static_cast<std::size_t>(i - i2 + m - 1) * side + (j + m - 1)];
          for (int j2 = 0; j2 < m; ++j2) {
            if (i2 == i && j2 == j) continue;
            acc += kr[-j2] * fr[j2];
          }
        }
        double corr =
            kernel.diagonal_cell_integral ? *kernel.diagonal_cell_integral * f.at(i, j) : 0.0;
        out.at(i, j) = acc * vol + corr;
      }
  }
  return out;
}

namespace {

// Log-log least squares of values against distance over a shell.
struct DecayFit {
  double exponent = 0.0;  // value ~ C r^{-exponent}
  double constant = 0.0;  // sup of value * r^{expected} over the shell
};

DecayFit fit_decay(const Grid& g, const GridFunction& field, const Point& x0, double r_lo,
                   double expected_exponent) {
  DecayFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    Point p = g.point(k);
    double dx = p[0] - x0[0];
    double dy = g.dim == 2 ? p[1] - x0[1] : 0.0;
    double r = std::sqrt(dx * dx + dy * dy);
    double v = std::abs(field.values[k]);
    if (r <= r_lo || v < 1e-13) continue;
    double lx = std::log(r), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
    fit.constant = std::max(fit.constant, v * std::pow(r, expected_exponent));
  }
  if (cnt >= 2) {
    double denom = cnt * sxx - sx * sx;
    if (denom != 0.0) fit.exponent = -(cnt * sxy - sx * sy) / denom;
  }
  return fit;
}

}  // namespace

AtomImageReport atom_image_bounds(const SIOKernel& kernel, const Atom& a, const Grid& g,
                                  const MP0Context& ctx, const TestDictionary& dict) {
  if (kernel.order < ctx.d)
    throw std::invalid_argument("kernel regularity below the context moment degree");
  AtomReport val = validate_atom(a, g, ctx.exponent, ctx);
  if (!val.pass()) throw std::invalid_argument("atom fails validation: " + val.fail_location);

  AtomImageReport rep;
  rep.expected_exponent = g.dim + std::max(ctx.d, 0) + 1;
  GridFunction dense = a.dense(g);
  GridFunction Ta = apply_sio(kernel, dense);
  double chi = a.chi_norm > 0 ? a.chi_norm
                              : luxemburg_norm(ball_indicator(g, a.center, a.radius), ctx.exponent);
  DecayFit f1 = fit_decay(g, Ta, a.center, 2.0 * a.radius, rep.expected_exponent);
  rep.fitted_exponent = f1.exponent;
  // Normalize the admissible constant by the atom size bound.
  double bm = integrate(ball_indicator(g, a.center, a.radius));
  double size_scale = std::pow(bm, 1.0 + (std::max(ctx.d, 0) + 1.0) / g.dim) / chi;
  rep.constant = f1.constant / size_scale;

  GridFunction gm = grand_max(Ta, dict);
  DecayFit f2 = fit_decay(g, gm, a.center, 2.0 * a.radius, rep.expected_exponent);
  rep.grand_fitted_exponent = f2.exponent;
  rep.grand_constant = f2.constant / size_scale;
  return rep;
}

std::pair<double, double> kolmogorov_check(const SIOKernel& kernel, const GridFunction& f,
                                           const Weight& w, double p, const Ball& ball) {
  if (!(p > 0) || !(p < 1)) throw std::invalid_argument("kolmogorov check needs 0 < p < 1");
  const Grid& g = f.grid;
  GridFunction Tf = apply_sio(kernel, f);
  GridFunction chi = ball_indicator(g, ball.center, ball.radius);
  double lhs = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (chi.values[k] != 0.0) lhs += std::pow(std::abs(Tf.values[k]), p) * w.values.values[k];
  lhs *= g.cell_volume();
  double l1w = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) l1w += std::abs(f.values[k]) * w.values.values[k];
  l1w *= g.cell_volume();
  double rhs = std::pow(ball_mass(w.values, ball), 1.0 - p) * std::pow(l1w, p);
  return {lhs, rhs};
}

BoundednessReport boundedness_experiment(const SIOKernel& kernel,
                                         const std::vector<GridFunction>& corpus,
                                         const ExponentFunction& p, const MP0Context& ctx,
                                         const TestDictionary& dict, BoundednessMode mode) {
  BoundednessReport rep;
  rep.kernel = kernel.name;
  rep.mode = mode;
  for (const auto& f : corpus) {
    double hn = hardy_norm(f, dict, p);
    if (hn == 0.0) {
      rep.per_signal.push_back(0.0);
      continue;
    }
    GridFunction Tf = apply_sio(kernel, f);
    double num = mode == BoundednessMode::L ? luxemburg_norm(Tf, p) : hardy_norm(Tf, dict, p);
    rep.per_signal.push_back(num / hn);
    rep.sup_ratio = std::max(rep.sup_ratio, num / hn);
  }

  // Weighted per-atom conditions over the built-in weight generators, using
  // an antisymmetric test atom.
  if (!corpus.empty()) {
    const Grid& g = corpus.front().grid;
    double r = g.half_width / 8.0;
    GridFunction lobe_p = bump_signal(g, {r / 2.0, 0.0}, r / 2.0, 1.0);
    GridFunction lobe_m = bump_signal(g, {-r / 2.0, 0.0}, r / 2.0, 1.0);
    GridFunction av = sub(lobe_p, lobe_m);
    Atom atom;
    atom.center = {0.0, 0.0};
    atom.radius = r;
    atom.q = std::numeric_limits<double>::infinity();
    atom.d = std::min(ctx.d, 0);  // antisymmetric lobes carry one vanishing moment
    atom.chi_norm = luxemburg_norm(ball_indicator(g, atom.center, atom.radius), p);
    IndexBox bw = box_window(g, atom.center, r);
    atom.values = WindowedField(bw);
    double peak = av.max_abs() * atom.chi_norm;
    for (int i = bw.lo[0]; i < bw.hi[0]; ++i)
      for (int j = bw.lo[1]; j < bw.hi[1]; ++j)
        atom.values.at(i, j) = av.values[g.index(i, g.dim == 1 ? 0 : j)] / peak;
    GridFunction Ta = apply_sio(kernel, atom.dense(g));
    GridFunction MTa = mode == BoundednessMode::H ? grand_max(Ta, dict) : GridFunction(g);

    std::vector<std::pair<std::string, GridFunction>> gens;
    gens.emplace_back("const", GridFunction(g, 1.0));
    gens.emplace_back("power", power_weight(g, 0.3 * g.dim));
    gens.emplace_back("plateau", plateau_weight(g, 3.0, {{0.0, 0.0}, g.half_width / 2}));
    double e = g.dim + std::max(ctx.d, 0) + 1;
    for (auto& [name, wf] : gens) {
      Weight w = Weight::from(wf);
      const GridFunction& img = mode == BoundednessMode::H ? MTa : Ta;
      double lhs = weighted_norm(img, w, ctx.p0);
      double wB = ball_mass(w.values, {atom.center, atom.radius});
      rep.weight_names.push_back(name);
      rep.atom_condition.push_back(lhs * atom.chi_norm / std::pow(wB, 1.0 / ctx.p0));
      // Annulus tail sum J against its bound.
      double J = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        Point pt = g.point(k);
        double dx = pt[0] - atom.center[0];
        double dy = g.dim == 2 ? pt[1] - atom.center[1] : 0.0;
        double dist = std::sqrt(dx * dx + dy * dy);
        if (dist <= 2.0 * atom.radius) continue;
        J += w.values.values[k] / std::pow(dist, ctx.p0 * e);
      }
      J *= g.cell_volume();
      double bm = integrate(ball_indicator(g, atom.center, atom.radius));
      rep.tail_constant.push_back(J * std::pow(bm, ctx.p0 * e / g.dim) / (w.a1 * wB));
    }
  }
  return rep;
}

}  // namespace hardyvar
