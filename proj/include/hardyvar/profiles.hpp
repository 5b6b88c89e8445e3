#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hardyvar/grid.hpp"

namespace hardyvar {

/// A smooth test profile: analytic evaluator, declared support radius, unit
/// integral bookkeeping, and a measured seminorm table
/// s(a,b) = sup |x^alpha D^beta Phi| maximized over multi-indices with
/// |alpha| = a, |beta| = b.
struct Profile {
  std::string name;
  int dim = 1;
  double support_radius = 1.0;  // evaluator returns exactly 0 outside
  double integral = 0.0;
  std::uint64_t id = 0;  // process-unique, for stencil caching

  std::function<double(double, double)> eval;
  /// Analytic partial derivative d^(b1)_x d^(b2)_y when available; empty
  /// falls back to nested finite differences in seminorm measurement.
  std::function<double(int, int, double, double)> deriv;

  double operator()(double x, double y = 0.0) const { return eval(x, y); }

  /// Seminorm table up to order N (measured once, cached).
  std::vector<std::vector<double>> seminorm_table(int N) const;
  double max_seminorm(int N) const;

private:
  mutable std::vector<std::vector<double>> cached_table_;
  mutable int cached_N_ = -1;
};

/// exp(-1/(1-|x|^2)) scaled to unit integral.
Profile bump_profile(int dim);
/// Order-k coordinate derivative. 1D: exact polynomial recurrence.
/// 2D: tensor product b^(k)(x) b(y) built from the 1D machinery.
Profile bump_derivative_profile(int dim, int order);
/// Poisson kernel c_n / (1+|x|^2)^((n+1)/2); support treated as unbounded
/// (stencils clip to the grid and are renormalized to unit discrete mass).
Profile poisson_profile(int dim);
bool is_poisson(const Profile& p);

Profile dilated(const Profile& p, double s);               // Phi(x/s)
Profile translated(const Profile& p, double shift);        // Phi(x - shift e_1)
Profile scaled_profile(const Profile& p, double c);        // c * Phi

/// (f * Phi_t) with Phi_t(x) = t^{-n} Phi(x/t), by midpoint quadrature over
/// the kernel support.  Throws if t < h/2 (undersampled kernel).
GridFunction convolve_at_scale(const GridFunction& f, const Profile& phi, double t);

}  // namespace hardyvar
