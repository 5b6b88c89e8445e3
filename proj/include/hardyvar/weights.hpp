#pragma once

#include <map>
#include <vector>

#include "hardyvar/atomic.hpp"
#include "hardyvar/grid.hpp"
#include "hardyvar/profiles.hpp"
#include "hardyvar/vlebesgue.hpp"

namespace hardyvar {

struct Ball {
  Point center{0.0, 0.0};
  double radius = 0.0;
};

/// Strictly positive weight with its measured A_1 constant and a reverse
/// Holder table cache.
struct Weight {
  GridFunction values;
  double a1 = 0.0;
  std::map<double, double> rh_table;

  static Weight from(GridFunction w);
  const Grid& grid() const { return values.grid; }
};

/// max over the lattice of M w / w.
double a1_constant(const GridFunction& w);

/// max over the family of (avg_B w^s)^{1/s} / avg_B w.
double rh_constant(const Weight& w, double s, const std::vector<Ball>& balls);

/// s = 1 + (2^{n+2} [w]_{A1})^{-1}.
double sharp_rh_exponent(const Weight& w);

/// (integral |f|^p w)^{1/p}.
double weighted_norm(const GridFunction& f, const Weight& w, double p);

/// weighted_norm of the radial maximal function.
double weighted_hardy_norm(const GridFunction& f, const Weight& w, double p0, const Profile& phi,
                           const ScaleLadder& ladder);

/// || sum lambda_j^{p0} chi_{B_j} / ||chi_{B_j}||^{p0} ||_{L^1(w)}^{1/p0}.
double weighted_finite_atomic_norm(const AtomicDecomposition& dec, const Weight& w, double p0,
                                   const ExponentFunction& p);

/// Lattice-centered balls with dyadic radii {2^m h, m >= min_level} clipped
/// to the domain; centers stride coarsens with the radius.
std::vector<Ball> dyadic_ball_family(const Grid& g, int min_level = 2);

/// w(B) = h^n sum_{B cap lattice} w.
double ball_mass(const GridFunction& w, const Ball& b);

// Built-in weight generators.
GridFunction power_weight(const Grid& g, double a);            // (|x| + h)^{-a}
GridFunction plateau_weight(const Grid& g, double c, const Ball& b);  // 1 + c chi_B

}  // namespace hardyvar
