#pragma once

#include <span>
#include <string>
#include <vector>

#include "hardyvar/grid.hpp"

namespace hardyvar {

/// Variable exponent p(.) on a grid.  Points with p = infinity (allowed only
/// for conjugate exponents) are tracked by the omega_inf mask; base values
/// there are ignored.
struct ExponentFunction {
  GridFunction base;
  double p_minus = 0.0;  // min over lattice, off omega_inf
  double p_plus = 0.0;   // max over lattice, off omega_inf
  std::vector<std::uint8_t> omega_inf;  // empty means no infinite set

  static ExponentFunction from_values(GridFunction values);
  static ExponentFunction constant(const Grid& g, double p);

  bool has_omega() const;
  bool is_p0_class() const { return !has_omega() && p_minus > 0.0; }
  const Grid& grid() const { return base.grid; }

  /// Pointwise p(.)*s.
  ExponentFunction scaled_by(double s) const;
  /// Pointwise p(.)/s.
  ExponentFunction divided_by(double s) const { return scaled_by(1.0 / s); }
};

/// Named builders: "const:<p>", "step:<p1>,<p2>", "sin:<base>,<amp>",
/// "logsmooth:<base>,<amp>".
ExponentFunction parse_exponent(const Grid& g, const std::string& spec);

/// rho(f/lambda): quadrature of (|f|/lambda)^p(x) off omega_inf plus
/// lambda^{-1} * sup |f| on omega_inf.
double modular(const GridFunction& f, const ExponentFunction& p, double lambda);

/// Smallest lambda with modular(f, p, lambda) <= 1, by bracketed bisection on
/// the decreasing map lambda -> rho(f/lambda).  Returns 0 iff f == 0.
double luxemburg_norm(const GridFunction& f, const ExponentFunction& p);

/// Pointwise conjugate 1/p + 1/p' = 1.  Points with p = 1 go to omega_inf.
/// Throws if p(x) < 1 anywhere.
ExponentFunction conjugate(const ExponentFunction& p);

struct LogHolderReport {
  double C0 = 0.0;     // local constant over pairs |x-y| < 1/2
  double C_inf = 0.0;  // decay constant against p_inf
  double p_inf = 0.0;  // p at the boundary-most lattice point
};
LogHolderReport check_log_holder(const ExponentFunction& p);

/// integral |fg| / (||f||_p ||g||_p'); 0 when either norm vanishes.
double verify_holder_pair(const GridFunction& f, const GridFunction& g, const ExponentFunction& p);

/// || |f|^s ||_p, asserting equality with ||f||_{sp}^s to 1e-8 relative.
double norm_of_power(const GridFunction& f, const ExponentFunction& p, double s);

struct MaximalProbeOptions;  // see maximal.hpp

/// Working context for an exponent in the maximal class: a choice of
/// 0 < p0 < p_-, the bound B on the maximal operator norm over L^{(p/p0)'},
/// the moment degree d = floor(n(1/p0 - 1)) (clamped at -1) and
/// gamma = (n+d+1)/n.
struct MP0Context {
  ExponentFunction exponent;
  double p0 = 0.0;
  double maximal_norm_bound = 0.0;  // B
  int d = 0;
  double gamma = 0.0;

  /// p0 <= 0 selects the default p_- / 2.  B <= 0 probes a built-in corpus on
  /// L^{(p/p0)'} and doubles the measured lower bound.
  static MP0Context make(const ExponentFunction& p, double p0 = -1.0, double B = -1.0);
};

}  // namespace hardyvar
