#include "hardyvar/profiles.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>

namespace hardyvar {

namespace {

std::uint64_t next_profile_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

// ---- polynomial helpers for bump derivatives -------------------------------
// D^k exp(-1/(1-x^2)) = P_k(x) / (1-x^2)^{2k} * exp(-1/(1-x^2)) with
// P_{k+1} = P_k' (1-x^2)^2 + 4k x (1-x^2) P_k - 2x P_k,  P_0 = 1.

using Poly = std::vector<double>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Poly poly_diff(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
  return r;
}

double poly_eval(const Poly& a, double x) {
  double v = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) v = v * x + a[i];
  return v;
}

const Poly& bump_deriv_poly(int k) {
  static std::vector<Poly> table = {{1.0}};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const Poly one_minus_x2 = {1.0, 0.0, -1.0};
  const Poly sq = poly_mul(one_minus_x2, one_minus_x2);
  while (static_cast<int>(table.size()) <= k) {
    int kk = static_cast<int>(table.size()) - 1;
    const Poly& P = table.back();
    Poly t1 = poly_mul(poly_diff(P), sq);
    Poly t2 = poly_mul(Poly{0.0, 4.0 * kk}, poly_mul(one_minus_x2, P));
    Poly t3 = poly_mul(Poly{0.0, -2.0}, P);
    table.push_back(poly_add(poly_add(t1, t2), t3));
  }
  return table[k];
}

// k-th derivative of the unnormalized 1D bump exp(-1/(1-x^2)).
double bump1d_deriv(int k, double x) {
  double u = 1.0 - x * x;
  if (u <= 1e-9) return 0.0;
  double core = std::exp(-1.0 / u);
  if (k == 0) return core;
  return poly_eval(bump_deriv_poly(k), x) / std::pow(u, 2.0 * k) * core;
}

double raw_bump_integral_1d() {
  // Fine midpoint quadrature over [-1,1]; computed once.
  static double val = [] {
    const int n = 1 << 16;
    double h = 2.0 / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += bump1d_deriv(0, -1.0 + (i + 0.5) * h);
    return acc * h;
  }();
  return val;
}

double raw_bump_integral_2d() {
  static double val = [] {
    const int n = 1 << 11;
    double h = 2.0 / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double x = -1.0 + (i + 0.5) * h;
        double y = -1.0 + (j + 0.5) * h;
        double u = 1.0 - x * x - y * y;
        if (u > 1e-9) acc += std::exp(-1.0 / u);
      }
    return acc * h * h;
  }();
  return val;
}

// Nested central finite difference fallback for mixed partials.
double fd_deriv(const std::function<double(double, double)>& f, int b1, int b2, double x, double y,
                double step) {
  if (b1 > 0)
    return (fd_deriv(f, b1 - 1, b2, x + step, y, step) -
            fd_deriv(f, b1 - 1, b2, x - step, y, step)) /
           (2.0 * step);
  if (b2 > 0)
    return (fd_deriv(f, b1, b2 - 1, x, y + step, step) -
            fd_deriv(f, b1, b2 - 1, x, y - step, step)) /
           (2.0 * step);
  return f(x, y);
}

}  // namespace

std::vector<std::vector<double>> Profile::seminorm_table(int N) const {
  if (cached_N_ >= N) return cached_table_;
  std::vector<std::vector<double>> tab(N + 1, std::vector<double>(N + 1, 0.0));
  const double R = std::min(support_radius, 64.0);  // sampling box
  const int samples = dim == 1 ? 2001 : 101;
  const double step = 2.0 * R / (samples - 1);
  const double fd_step = std::max(1e-3, 5e-3 * R);
  auto dval = [&](int b1, int b2, double x, double y) {
    if (deriv) return deriv(b1, b2, x, y);
    return fd_deriv(eval, b1, b2, x, y, fd_step);
  };
  if (dim == 1) {
    for (int s = 0; s < samples; ++s) {
      double x = -R + s * step;
      double ax = std::abs(x);
      for (int b = 0; b <= N; ++b) {
        double dv = std::abs(dval(b, 0, x, 0.0));
        if (dv == 0.0) continue;
        double xa = 1.0;
        for (int a = 0; a <= N; ++a) {
          tab[a][b] = std::max(tab[a][b], xa * dv);
          xa *= ax;
        }
      }
    }
  } else {
    for (int si = 0; si < samples; ++si) {
      for (int sj = 0; sj < samples; ++sj) {
        double x = -R + si * step;
        double y = -R + sj * step;
        for (int b = 0; b <= N; ++b) {
          // maximize over |beta| = b splits
          double dv = 0.0;
          for (int b1 = 0; b1 <= b; ++b1) dv = std::max(dv, std::abs(dval(b1, b - b1, x, y)));
          if (dv == 0.0) continue;
          for (int a = 0; a <= N; ++a) {
            double xa = 0.0;  // max over |alpha| = a of |x^a1 y^a2|
            for (int a1 = 0; a1 <= a; ++a1)
              xa = std::max(xa, std::pow(std::abs(x), a1) * std::pow(std::abs(y), a - a1));
            tab[a][b] = std::max(tab[a][b], xa * dv);
          }
        }
      }
    }
  }
  cached_table_ = tab;
  cached_N_ = N;
  return tab;
}

double Profile::max_seminorm(int N) const {
  auto tab = seminorm_table(N);
  double m = 0.0;
  for (auto& row : tab)
    for (double v : row) m = std::max(m, v);
  return m;
}

Profile bump_profile(int dim) {
  Profile p;
  p.dim = dim;
  p.name = "bump";
  p.support_radius = 1.0;
  p.id = next_profile_id();
  if (dim == 1) {
    double c = 1.0 / raw_bump_integral_1d();
    p.integral = 1.0;
    p.eval = [c](double x, double) { return c * bump1d_deriv(0, x); };
    p.deriv = [c](int b1, int b2, double x, double) {
      return b2 == 0 ? c * bump1d_deriv(b1, x) : 0.0;
    };
  } else {
    double c = 1.0 / raw_bump_integral_2d();
    p.integral = 1.0;
    p.eval = [c](double x, double y) {
      double u = 1.0 - x * x - y * y;
      return u > 1e-9 ? c * std::exp(-1.0 / u) : 0.0;
    };
    // Mixed partials of the radial bump fall back to finite differences.
  }
  return p;
}

Profile bump_derivative_profile(int dim, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
  Profile p;
  p.dim = dim;
  p.name = "bump_d" + std::to_string(order);
  p.id = next_profile_id();
  double c1 = 1.0 / raw_bump_integral_1d();
  if (dim == 1) {
    p.support_radius = 1.0;
    p.integral = 0.0;  // derivative of a compactly supported function
    p.eval = [c1, order](double x, double) { return c1 * bump1d_deriv(order, x); };
    p.deriv = [c1, order](int b1, int b2, double x, double) {
      return b2 == 0 ? c1 * bump1d_deriv(order + b1, x) : 0.0;
    };
  } else {
    // Tensor product: d^k b(x) * b(y), compact on the unit square.
    p.support_radius = std::sqrt(2.0);
    p.integral = 0.0;
    double c2 = c1 * c1;
    p.eval = [c2, order](double x, double y) {
      return c2 * bump1d_deriv(order, x) * bump1d_deriv(0, y);
    };
    p.deriv = [c2, order](int b1, int b2, double x, double y) {
      return c2 * bump1d_deriv(order + b1, x) * bump1d_deriv(b2, y);
    };
  }
  return p;
}

Profile poisson_profile(int dim) {
  Profile p;
  p.dim = dim;
  p.name = "poisson";
  p.id = next_profile_id();
  p.integral = 1.0;
  // Truncation radius: kernel below 1e-12 of its peak.
  double expo = (dim + 1) / 2.0;
  p.support_radius = std::sqrt(std::pow(1e12, 1.0 / expo));
  double cn = dim == 1 ? 1.0 / M_PI : 1.0 / (2.0 * M_PI);
  p.eval = [cn, expo, R = p.support_radius](double x, double y) {
    double r2 = x * x + y * y;
    if (r2 > R * R) return 0.0;
    return cn / std::pow(1.0 + r2, expo);
  };
  return p;
}

bool is_poisson(const Profile& p) { return p.name.rfind("poisson", 0) == 0; }

Profile dilated(const Profile& p, double s) {
  if (!(s > 0)) throw std::invalid_argument("dilation factor must be positive");
  Profile q;
  q.dim = p.dim;
  q.name = p.name + "_dil" + std::to_string(s);
  q.id = next_profile_id();
  q.support_radius = p.support_radius * s;
  q.integral = p.integral * std::pow(s, p.dim);
  auto base_eval = p.eval;
  q.eval = [base_eval, s](double x, double y) { return base_eval(x / s, y / s); };
  if (p.deriv) {
    auto base_deriv = p.deriv;
    q.deriv = [base_deriv, s](int b1, int b2, double x, double y) {
      return base_deriv(b1, b2, x / s, y / s) / std::pow(s, b1 + b2);
    };
  }
  return q;
}

Profile translated(const Profile& p, double shift) {
  Profile q;
  q.dim = p.dim;
  q.name = p.name + "_tr" + std::to_string(shift);
  q.id = next_profile_id();
  q.support_radius = p.support_radius + std::abs(shift);
  q.integral = p.integral;
  auto base_eval = p.eval;
  q.eval = [base_eval, shift](double x, double y) { return base_eval(x - shift, y); };
  if (p.deriv) {
    auto base_deriv = p.deriv;
    q.deriv = [base_deriv, shift](int b1, int b2, double x, double y) {
      return base_deriv(b1, b2, x - shift, y);
    };
  }
  return q;
}

Profile scaled_profile(const Profile& p, double c) {
  Profile q;
  q.dim = p.dim;
  q.name = p.name + "_x" + std::to_string(c);
  q.id = next_profile_id();
  q.support_radius = p.support_radius;
  q.integral = p.integral * c;
  auto base_eval = p.eval;
  q.eval = [base_eval, c](double x, double y) { return c * base_eval(x, y); };
  if (p.deriv) {
    auto base_deriv = p.deriv;
    q.deriv = [base_deriv, c](int b1, int b2, double x, double y) {
      return c * base_deriv(b1, b2, x, y);
    };
  }
  return q;
}

namespace {

struct StencilKey {
  std::uint64_t profile_id;
  double t;
  double h;
  int dim;
  bool operator<(const StencilKey& o) const {
    if (profile_id != o.profile_id) return profile_id < o.profile_id;
    if (t != o.t) return t < o.t;
    if (h != o.h) return h < o.h;
    return dim < o.dim;
  }
};

struct Stencil {
  int K = 0;                 // offsets in [-K, K] per axis
  std::vector<double> w;     // raw kernel values Phi(-k h / t)
  double scale = 0.0;        // h^n / t^n
  bool renormalized = false;
};

const Stencil& stencil_for(const GridFunction& f, const Profile& phi, double t) {
  static thread_local std::map<StencilKey, Stencil> cache;
  StencilKey key{phi.id, t, f.grid.spacing, f.grid.dim};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 512) cache.clear();

  const Grid& g = f.grid;
  Stencil st;
  double reach = t * phi.support_radius / g.spacing;
  st.K = std::min(g.pts_per_axis - 1, static_cast<int>(std::ceil(reach)) + 1);
  st.scale = std::pow(g.spacing, g.dim) / std::pow(t, g.dim);
  if (g.dim == 1) {
    st.w.resize(2 * st.K + 1);
    for (int k = -st.K; k <= st.K; ++k)
      st.w[k + st.K] = phi.eval(static_cast<double>(-k) * g.spacing / t, 0.0);
  } else {
    int side = 2 * st.K + 1;
    st.w.resize(static_cast<std::size_t>(side) * side);
    for (int k1 = -st.K; k1 <= st.K; ++k1)
      for (int k2 = -st.K; k2 <= st.K; ++k2)
        st.w[static_cast<std::size_t>(k1 + st.K) * side + (k2 + st.K)] =
            phi.eval(static_cast<double>(-k1) * g.spacing / t,
                     static_cast<double>(-k2) * g.spacing / t);
  }
  if (is_poisson(phi)) {
    // Clipped heavy-tailed kernel: renormalize the stencil to unit mass.
    double mass = 0.0;
    for (double v : st.w) mass += v;
    mass *= st.scale;
    if (mass > 0) {
      for (double& v : st.w) v /= mass;
      st.scale *= 1.0;  // mass folded into weights
      for (double& v : st.w) v *= st.scale;
      st.scale = 1.0;
      st.renormalized = true;
    }
  }
  auto [pos, ok] = cache.emplace(key, std::move(st));
  (void)ok;
  return pos->second;
}

}  // namespace

GridFunction convolve_at_scale(const GridFunction& f, const Profile& phi, double t) {
  const Grid& g = f.grid;
  if (!(t >= g.spacing / 2)) throw std::invalid_argument("scale below h/2: kernel undersampled");
  if (phi.dim != g.dim) throw std::invalid_argument("profile dimension mismatch");
  const Stencil& st = stencil_for(f, phi, t);
  GridFunction out(g);
  const int m = g.pts_per_axis;
  if (g.dim == 1) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      int klo = std::max(-st.K, -i);
      int khi = std::min(st.K, m - 1 - i);
      for (int k = klo; k <= khi; ++k) acc += f.values[i + k] * st.w[k + st.K];
      out.values[i] = acc * st.scale;
    }
  } else {
    int side = 2 * st.K + 1;
    for (int i = 0; i < m; ++i) {
      int k1lo = std::max(-st.K, -i);
      int k1hi = std::min(st.K, m - 1 - i);
      for (int j = 0; j < m; ++j) {
        int k2lo = std::max(-st.K, -j);
        int k2hi = std::min(st.K, m - 1 - j);
        double acc = 0.0;
        for (int k1 = k1lo; k1 <= k1hi; ++k1) {
          const double* fr = &f.values[g.index(i + k1, 0)];
          const double* wr = &st.w[static_cast<std::size_t>(k1 + st.K) * side + st.K];
          for (int k2 = k2lo; k2 <= k2hi; ++k2) acc += fr[j + k2] * wr[k2];
        }
        out.at(i, j) = acc * st.scale;
      }
    }
  }
  return out;
}

}  // namespace hardyvar
