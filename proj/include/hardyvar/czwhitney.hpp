#pragma once

#include <vector>

#include "hardyvar/grid.hpp"
#include "hardyvar/smoothmax.hpp"
#include "hardyvar/vlebesgue.hpp"

namespace hardyvar {

inline constexpr double kTildeDilation = 9.0 / 8.0;  // a~
inline constexpr double kStarDilation = 3.0 / 2.0;   // a*

/// Dyadic cube of the Whitney decomposition, in cell coordinates (each
/// lattice point owns the cell box of side h centered at it).  Distances and
/// diameters use the max metric on cell boxes with a one-cell resolution
/// offset: dist = (min box gap in cells + 1) * h, diam = side.
struct WhitneyCube {
  std::array<int, 2> cell_lo{0, 0};  // lowest cell index per axis
  int side_cells = 1;
  Point center{0.0, 0.0};
  double side = 0.0;      // physical side of Q
  double dist_inf = 0.0;  // measured distance to the complement

  IndexBox core_box(const Grid& g) const;   // lattice points of Q
  IndexBox tilde_box(const Grid& g) const;  // lattice points of a~ Q
  IndexBox star_box(const Grid& g) const;   // lattice points of a* Q
  bool point_in_star(const Grid& g, std::size_t flat) const;
};

/// Whitney decomposition of a grid-open set (mask over lattice cells) by
/// recursive dyadic subdivision; cells outside the grid count as complement.
/// Accepted cubes partition omega and satisfy side <= dist <= 4 side.
std::vector<WhitneyCube> whitney_decompose(const Grid& g, const std::vector<std::uint8_t>& omega);

/// Smooth partition of unity subordinate to the dilated cubes: eta_k
/// supported in tilde(Q_k), sum = 1 on the union of the Q_k.
std::vector<WindowedField> partition_of_unity(const Grid& g, const std::vector<WhitneyCube>& cubes);

/// Polynomial in scaled coordinates X = (x - center)/scale; 2D coefficients
/// run over monomials X^a Y^b with a+b <= degree, ordered by (a+b, a).
struct PolyCoeffs {
  Point center{0.0, 0.0};
  double scale = 1.0;
  int degree = 0;
  int dim = 1;
  std::vector<double> coef;
  bool degraded = false;  // degree lowered due to a rank-deficient Gram matrix

  double eval(const Point& p) const;
};

/// Weighted L^2 projection of f onto polynomials of degree <= d on the cube,
/// weight eta normalized to unit mass.  Falls back to a lower degree if the
/// Gram matrix is numerically singular.
PolyCoeffs poly_project(const GridFunction& f, const WhitneyCube& cube, const WindowedField& eta,
                        int d);

struct CZEstimates {
  double c_g = 0.0;           // max |g| / lambda
  int overlap = 0;            // max_x sum_k chi_{Q_k^*}(x)
  double bk_near_const = 0;   // sup_k sup_{Q_k^*} M_phi b_k / grand_max f
  double bk_far_const = 0;    // sup_k sup_off-star M_phi b_k |x-x_k|^e / (lambda l_k^e)
  double far_exponent = 0;    // e = n + max(d,0) + 1
  std::vector<double> moment_errors;  // per cube, worst scaled moment
};

struct CZResult {
  double lambda = 0.0;
  std::vector<std::uint8_t> omega;  // level-set mask
  std::vector<WhitneyCube> cubes;
  std::vector<WindowedField> partition;  // eta_k
  std::vector<WindowedField> bs;         // b_k = (f - c_k) eta_k
  std::vector<PolyCoeffs> projections;   // c_k
  GridFunction g;
  int degree = 0;
  CZEstimates estimates;  // filled when measure_estimates
};

/// f = g + sum b_k at level lambda on the super-level set of grand_max f.
/// Empty level set gives the trivial split g = f; full lattice raises.
CZResult cz_decompose(const GridFunction& f, double lambda, const MP0Context& ctx,
                      const TestDictionary& dict, bool measure_estimates = true);

/// Same decomposition against a precomputed grand-maximal field (reused by
/// the level-by-level atomic construction); no estimate measurement.
CZResult cz_core(const GridFunction& f, double lambda, const MP0Context& ctx,
                 const GridFunction& grand);

}  // namespace hardyvar
