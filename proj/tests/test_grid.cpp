#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "hardyvar/grid.hpp"
#include "hardyvar/io.hpp"
#include "hardyvar/profiles.hpp"
#include "hardyvar/signals.hpp"

using namespace hardyvar;

namespace {

// Brute-force quadrature oracle with the same summation order as the library
// path: ascending lattice index, identical per-term arithmetic.
GridFunction conv_oracle(const GridFunction& f, const Profile& phi, double t) {
  const Grid& g = f.grid;
  const int m = g.pts_per_axis;
  GridFunction out(g);
  double scale = std::pow(g.spacing, g.dim) / std::pow(t, g.dim);
  if (g.dim == 1) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j)
        acc += f.values[j] * phi.eval(static_cast<double>(i - j) * g.spacing / t, 0.0);
      out.values[i] = acc * scale;
    }
  } else {
    for (int i1 = 0; i1 < m; ++i1)
      for (int i2 = 0; i2 < m; ++i2) {
        double acc = 0.0;
        for (int j1 = 0; j1 < m; ++j1)
          for (int j2 = 0; j2 < m; ++j2)
            acc += f.at(j1, j2) * phi.eval(static_cast<double>(i1 - j1) * g.spacing / t,
                                           static_cast<double>(i2 - j2) * g.spacing / t);
        out.at(i1, i2) = acc * scale;
      }
  }
  return out;
}

}  // namespace

TEST_CASE("integrate basics") {
  Grid g(1, 4.0, 0.01);
  GridFunction zero(g);
  CHECK(integrate(zero) == 0.0);

  GridFunction chi = box_indicator(g, 0.0, 1.0);
  CHECK(std::abs(integrate(chi) - 1.0) <= g.spacing);

  GridFunction odd(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double x = g.point(k)[0];
    odd.values[k] = std::abs(x) <= 1.0 ? x : 0.0;
  }
  CHECK(std::abs(integrate(odd)) <= g.spacing);
}

TEST_CASE("integrate is linear") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(7);
  GridFunction f = random_signal(g, rng), h = random_signal(g, rng);
  double a = 1.7, b = -0.3;
  GridFunction comb = add(scaled(f, a), scaled(h, b));
  CHECK(integrate(comb) == doctest::Approx(a * integrate(f) + b * integrate(h)).epsilon(1e-13));
}

TEST_CASE("convolution with a point mass samples the kernel") {
  Grid g(1, 4.0, 1.0 / 64);
  GridFunction spike = spike_signal(g, {0.0, 0.0}, 1.0);
  Profile phi = bump_profile(1);
  double t = 0.5;
  GridFunction conv = convolve_at_scale(spike, phi, t);
  int i0 = g.nearest_axis_index(0.0);
  double sup = 0.0, peak = 0.0;
  for (int i = 0; i < g.pts_per_axis; ++i) {
    double want = phi.eval((g.coord(i) - g.coord(i0)) / t, 0.0) / t;
    sup = std::max(sup, std::abs(conv.values[i] - want));
    peak = std::max(peak, want);
  }
  CHECK(sup <= 1e-12 * peak);
}

TEST_CASE("convolution of zero is zero") {
  Grid g(1, 2.0, 1.0 / 32);
  GridFunction zero(g);
  GridFunction conv = convolve_at_scale(zero, bump_profile(1), 0.25);
  CHECK(conv.max_abs() == 0.0);
}

TEST_CASE("convolution equals the direct-sum oracle bit for bit") {
  Grid g(1, 2.0, 1.0 / 64);
  GridFunction f = box_indicator(g, -1.0, 1.0);
  Profile phi = bump_profile(1);
  GridFunction fast = convolve_at_scale(f, phi, 0.25);
  GridFunction slow = conv_oracle(f, phi, 0.25);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(fast.values[k] == slow.values[k]);

  Rng rng(21);
  GridFunction r = random_signal(g, rng);
  for (double t : {0.1, 0.5, 1.0}) {
    GridFunction a = convolve_at_scale(r, phi, t);
    GridFunction b = conv_oracle(r, phi, t);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(a.values[k] == b.values[k]);
  }
}

TEST_CASE("convolution matches the oracle in 2D") {
  Grid g(2, 1.0, 1.0 / 8);
  Rng rng(3);
  GridFunction f = random_signal(g, rng);
  Profile phi = bump_profile(2);
  GridFunction fast = convolve_at_scale(f, phi, 0.3);
  GridFunction slow = conv_oracle(f, phi, 0.3);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(fast.values[k] == slow.values[k]);
}

TEST_CASE("undersampled scale is rejected") {
  Grid g(1, 1.0, 1.0 / 16);
  GridFunction f = box_indicator(g, -0.5, 0.5);
  CHECK_THROWS(convolve_at_scale(f, bump_profile(1), g.spacing / 4));
}

TEST_CASE("translation covariance away from the boundary") {
  Grid g(1, 4.0, 1.0 / 32);
  GridFunction f = bump_signal(g, {-0.5, 0.0}, 0.8, 1.0);
  GridFunction fs(g);
  for (int i = 1; i < g.pts_per_axis; ++i) fs.values[i] = f.values[i - 1];
  Profile phi = bump_profile(1);
  double t = 0.25;
  GridFunction c1 = convolve_at_scale(f, phi, t);
  GridFunction c2 = convolve_at_scale(fs, phi, t);
  int guard = static_cast<int>(std::ceil(t * phi.support_radius / g.spacing)) + 2;
  for (int i = guard + 1; i < g.pts_per_axis - guard; ++i)
    CHECK(c2.values[i] == doctest::Approx(c1.values[i - 1]).epsilon(1e-12));
}

TEST_CASE("ball indicator conventions") {
  Grid g(1, 1.0, 0.5);
  GridFunction all = ball_indicator(g, {0.0, 0.0}, 1.0);
  std::vector<double> want{1, 1, 1, 1, 1};
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(all.values[k] == want[k]);

  GridFunction tiny = ball_indicator(g, {0.26, 0.0}, 0.1);
  double mass = 0.0;
  for (double v : tiny.values) mass += v;
  CHECK(mass == 1.0);
  CHECK(tiny.values[g.nearest_axis_index(0.26)] == 1.0);

  Grid g2(2, 1.0, 0.25);
  GridFunction disk = ball_indicator(g2, {0.0, 0.0}, 1.0);
  for (std::size_t k = 0; k < g2.size(); ++k) {
    Point p = g2.point(k);
    CHECK(disk.values[k] == (norm2(p) <= 1.0 + 1e-12 ? 1.0 : 0.0));
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS(Grid(3, 1.0, 0.5));
  CHECK_THROWS(Grid(1, 1.0, 0.3));  // 2L/h not integral
  CHECK_NOTHROW(Grid(2, 4.0, 1.0 / 64));
}

TEST_CASE("scale ladder") {
  ScaleLadder lad = ScaleLadder::dyadic(0.1, 2.0);
  REQUIRE(!lad.scales.empty());
  for (std::size_t i = 1; i < lad.scales.size(); ++i) CHECK(lad.scales[i] > lad.scales[i - 1]);
  CHECK(lad.scales.front() >= 0.1 * (1 - 1e-12));
  CHECK(lad.scales.back() <= 2.0 * (1 + 1e-12));

  ScaleLadder fine = ScaleLadder::dyadic(0.25, 1.0, 2);
  CHECK(fine.scales.size() >= 4);
}

TEST_CASE("csv round trip is bit exact") {
  Grid g(1, 2.0, 1.0 / 32);
  Rng rng(99);
  GridFunction f = random_signal(g, rng);
  f.values[3] = 1.0 / 3.0;
  f.values[4] = 1e-300;
  auto stem = std::filesystem::temp_directory_path() / "hv_roundtrip";
  save_grid_function(f, stem.string());
  GridFunction back = load_grid_function(stem.string());
  REQUIRE(back.grid == f.grid);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(back.values[k] == f.values[k]);

  Grid g2(2, 1.0, 0.25);
  Rng rng2(5);
  GridFunction f2 = random_signal(g2, rng2);
  auto stem2 = std::filesystem::temp_directory_path() / "hv_roundtrip2";
  save_grid_function(f2, stem2.string());
  GridFunction back2 = load_grid_function(stem2.string());
  for (std::size_t k = 0; k < f2.size(); ++k) CHECK(back2.values[k] == f2.values[k]);
}
