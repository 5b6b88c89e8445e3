#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hardyvar/signals.hpp"
#include "hardyvar/vlebesgue.hpp"

using namespace hardyvar;

namespace {

// Classical-norm oracle for constant exponents, independent of the solver.
double classical_norm(const GridFunction& f, double p) {
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

ExponentFunction sin_exponent(const Grid& g, double base, double amp) {
  return parse_exponent(g, "sin:" + std::to_string(base) + "," + std::to_string(amp));
}

}  // namespace

TEST_CASE("modular examples") {
  Grid g(1, 4.0, 1.0 / 128);
  ExponentFunction p2 = ExponentFunction::constant(g, 2.0);
  GridFunction chi = box_indicator(g, 0.0, 1.0);
  CHECK(std::abs(modular(chi, p2, 1.0) - 1.0) <= g.spacing * 2);
  CHECK(std::abs(modular(scaled(chi, 2.0), p2, 1.0) - 4.0) <= 4 * g.spacing * 2);

  ExponentFunction pstep = parse_exponent(g, "step:2,3");
  GridFunction chi2 = box_indicator(g, -1.0, 1.0);
  CHECK(std::abs(modular(chi2, pstep, 1.0) - 2.0) <= 2 * g.spacing * 2);
}

TEST_CASE("luxemburg norm basic values") {
  Grid g(1, 4.0, 1.0 / 128);
  ExponentFunction p1 = ExponentFunction::constant(g, 1.0);
  GridFunction chi = box_indicator(g, 0.0, 2.0);
  CHECK(std::abs(luxemburg_norm(chi, p1) - 2.0) <= 2 * g.spacing);

  GridFunction zero(g);
  CHECK(luxemburg_norm(zero, p1) == 0.0);
}

TEST_CASE("luxemburg norm against a closed-form root") {
  // p = 1 on [0,1/2), 2 on [1/2,1); f = chi_[0,1); the modular at lambda is
  // 0.5/lambda + 0.5/lambda^2, which equals 1 exactly at lambda = 1.
  Grid g(1, 1.0, 1.0 / 256);
  GridFunction pv(g, 2.0);
  GridFunction f(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double x = g.point(k)[0];
    if (x >= 0.0 && x < 0.5) pv.values[k] = 1.0;
    if (x >= 0.0 && x < 1.0) f.values[k] = 1.0;
  }
  ExponentFunction p = ExponentFunction::from_values(pv);
  CHECK(luxemburg_norm(f, p) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("constant exponents match the classical norm") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(11);
  for (double pc : {0.5, 1.0, 2.0, 3.7}) {
    ExponentFunction p = ExponentFunction::constant(g, pc);
    for (int trial = 0; trial < 25; ++trial) {
      GridFunction f = random_signal(g, rng);
      double lux = luxemburg_norm(f, p);
      double cls = classical_norm(f, pc);
      CHECK(std::abs(lux - cls) <= 1e-8 * cls);
      CHECK(std::abs(modular(f, p, lux) - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("conjugate exponents") {
  Grid g(1, 1.0, 0.25);
  ExponentFunction p2 = ExponentFunction::constant(g, 2.0);
  ExponentFunction q2 = conjugate(p2);
  for (double v : q2.base.values) CHECK(v == doctest::Approx(2.0));

  ExponentFunction p1 = ExponentFunction::constant(g, 1.0);
  ExponentFunction q1 = conjugate(p1);
  REQUIRE(q1.omega_inf.size() == g.size());
  for (auto m : q1.omega_inf) CHECK(m == 1);

  ExponentFunction p4 = ExponentFunction::constant(g, 4.0);
  ExponentFunction q4 = conjugate(p4);
  for (double v : q4.base.values) CHECK(v == doctest::Approx(4.0 / 3.0));

  ExponentFunction bad = ExponentFunction::constant(g, 0.5);
  CHECK_THROWS(conjugate(bad));
}

TEST_CASE("norm with an infinite part uses the sup term") {
  // p = 1 everywhere conjugates to infinity everywhere: the norm is sup|f|.
  Grid g(1, 1.0, 0.25);
  ExponentFunction q = conjugate(ExponentFunction::constant(g, 1.0));
  GridFunction f(g);
  f.values[2] = 3.0;
  f.values[4] = -5.0;
  CHECK(luxemburg_norm(f, q) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("log-Holder scan") {
  Grid g(1, 4.0, 1.0 / 64);
  LogHolderReport c = check_log_holder(ExponentFunction::constant(g, 2.0));
  CHECK(c.C0 == 0.0);
  CHECK(c.C_inf == 0.0);

  LogHolderReport s = check_log_holder(sin_exponent(g, 2.0, 0.25));
  CHECK(s.C0 > 0.0);
  CHECK(s.C0 < 10.0);
  CHECK(std::isfinite(s.C_inf));

  // A jump exponent's local constant grows as h -> 0.
  LogHolderReport j1 = check_log_holder(parse_exponent(g, "step:2,3"));
  Grid g2(1, 4.0, 1.0 / 256);
  LogHolderReport j2 = check_log_holder(parse_exponent(g2, "step:2,3"));
  CHECK(j2.C0 > j1.C0);
}

TEST_CASE("holder pairing ratio") {
  Grid g(1, 2.0, 1.0 / 64);
  ExponentFunction p2 = ExponentFunction::constant(g, 2.0);
  GridFunction chi = ball_indicator(g, {0.0, 0.0}, 0.5);
  double eq = verify_holder_pair(chi, chi, p2);
  CHECK(eq == doctest::Approx(1.0).epsilon(1e-6));

  GridFunction zero(g);
  CHECK(verify_holder_pair(zero, chi, p2) == 0.0);

  Rng rng(13);
  ExponentFunction ps = sin_exponent(g, 2.0, 0.25);
  for (int trial = 0; trial < 200; ++trial) {
    GridFunction f = random_signal(g, rng), h = random_signal(g, rng);
    CHECK(verify_holder_pair(f, h, ps) <= 2.0);
  }
}

TEST_CASE("norm of power identity") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(17);
  ExponentFunction p = sin_exponent(g, 1.6, 0.1);
  GridFunction f = random_signal(g, rng);
  CHECK_NOTHROW(norm_of_power(f, p, 1.0));
  CHECK_NOTHROW(norm_of_power(f, p, 0.7));
  CHECK_NOTHROW(norm_of_power(f, p, 2.0));

  // Indicator: both sides equal ||chi_B||_{2p}^2.
  GridFunction chi = ball_indicator(g, {0.0, 0.0}, 0.7);
  double v = norm_of_power(chi, p, 2.0);
  CHECK(v == doctest::Approx(std::pow(luxemburg_norm(chi, p.scaled_by(2.0)), 2.0)).epsilon(1e-7));
}

TEST_CASE("norm-modular bounds") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(19);
  for (auto spec : {"const:0.8", "sin:1.5,0.3", "step:0.7,2"}) {
    ExponentFunction p = parse_exponent(g, spec);
    for (int trial = 0; trial < 100; ++trial) {
      GridFunction f = scaled(random_signal(g, rng), rng.uniform(0.05, 3.0));
      double nrm = luxemburg_norm(f, p);
      if (nrm == 0.0) continue;
      double rho = modular(f, p, 1.0);
      double lo = std::pow(rho, 1.0 / (nrm <= 1.0 ? p.p_minus : p.p_plus));
      double hi = std::pow(rho, 1.0 / (nrm <= 1.0 ? p.p_plus : p.p_minus));
      CHECK(nrm >= lo * (1 - 1e-7));
      CHECK(nrm <= hi * (1 + 1e-7));
    }
  }
}

TEST_CASE("triangle-type inequalities") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(23);
  ExponentFunction plow = parse_exponent(g, "sin:0.8,0.1");  // p_- < 1
  ExponentFunction phigh = parse_exponent(g, "sin:2.0,0.25");
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction f = random_signal(g, rng), h = random_signal(g, rng);
    double pm = plow.p_minus;
    double ls = std::pow(luxemburg_norm(add(f, h), plow), pm);
    double rs = std::pow(luxemburg_norm(f, plow), pm) + std::pow(luxemburg_norm(h, plow), pm);
    CHECK(ls <= rs * (1 + 1e-7));

    double lt = luxemburg_norm(add(f, h), phigh);
    double rt = luxemburg_norm(f, phigh) + luxemburg_norm(h, phigh);
    CHECK(lt <= rt * (1 + 1e-7));
  }
}

TEST_CASE("embedding with the measure factor") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(29);
  ExponentFunction p = parse_exponent(g, "sin:1.2,0.1");
  ExponentFunction q = parse_exponent(g, "sin:2.4,0.1");  // q >= p pointwise
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction f = random_signal(g, rng);
    double a = rng.uniform(-1.5, 0.5);
    GridFunction chiE = box_indicator(g, a, a + rng.uniform(0.2, 1.5));
    GridFunction fe(g);
    double measE = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      fe.values[k] = f.values[k] * chiE.values[k];
      measE += chiE.values[k];
    }
    measE *= g.cell_volume();
    CHECK(luxemburg_norm(fe, p) <= (1 + measE) * luxemburg_norm(fe, q) * (1 + 1e-7));
  }
}

TEST_CASE("homogeneity and normalized modular") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(31);
  ExponentFunction p = parse_exponent(g, "sin:1.4,0.3");
  for (int trial = 0; trial < 50; ++trial) {
    GridFunction f = random_signal(g, rng);
    double c = rng.uniform(0.1, 10.0);
    double n1 = luxemburg_norm(scaled(f, c), p);
    double n0 = luxemburg_norm(f, p);
    CHECK(n1 == doctest::Approx(c * n0).epsilon(1e-8));
    if (n0 > 0) CHECK(std::abs(modular(f, p, n0) - 1.0) <= 1e-8);
  }
}

TEST_CASE("monotone convergence of norms") {
  Grid g(1, 2.0, 1.0 / 64);
  Rng rng(37);
  ExponentFunction p = parse_exponent(g, "sin:1.3,0.2");
  GridFunction f = random_smooth_nonneg(g, rng);
  double target = luxemburg_norm(f, p);
  double prev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    double nk = luxemburg_norm(scaled(f, 1.0 - std::exp2(-k)), p);
    CHECK(nk >= prev - 1e-10);
    prev = nk;
  }
  CHECK(std::abs(prev - target) <= 1e-5 * std::max(target, 1e-30));
}

TEST_CASE("context defaults and invariants") {
  Grid g(1, 2.0, 1.0 / 32);
  ExponentFunction p = ExponentFunction::constant(g, 1.0);
  MP0Context ctx = MP0Context::make(p, 0.5, 4.0);
  CHECK(ctx.p0 == 0.5);
  CHECK(ctx.d == 1);  // floor(1 * (2 - 1))
  CHECK(ctx.gamma == doctest::Approx(3.0));
  CHECK(ctx.gamma > 1.0 / ctx.p0);

  MP0Context dflt = MP0Context::make(ExponentFunction::constant(g, 2.0));
  CHECK(dflt.p0 == doctest::Approx(1.0));
  CHECK(dflt.d == 0);
  CHECK(dflt.maximal_norm_bound > 1.0);

  CHECK_THROWS(MP0Context::make(p, 1.5));  // p0 >= p_-
}

TEST_CASE("exponent parser and csv compatibility") {
  Grid g(1, 1.0, 0.25);
  CHECK_THROWS(parse_exponent(g, "nope:1"));
  ExponentFunction s = parse_exponent(g, "logsmooth:2,0.5");
  CHECK(s.p_minus >= 2.0);
  CHECK(s.p_plus <= 2.5);
}
