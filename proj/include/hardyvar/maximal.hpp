#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hardyvar/grid.hpp"
#include "hardyvar/vlebesgue.hpp"

namespace hardyvar {

enum class MaxAlgorithm { oracle, fast };

/// Hardy-Littlewood maximal function over axis-parallel cubes centered at
/// lattice points with side lengths odd multiples of h, clipped to the
/// zero-extended plane.  Both algorithms evaluate every window average from
/// one shared prefix-sum table, so they agree bit for bit; the oracle
/// enumerates all (center, width) pairs per point, the fast path runs
/// sliding-window maxima per width.
GridFunction hl_maximal(const GridFunction& f, MaxAlgorithm alg = MaxAlgorithm::fast);

/// Report wrapper carrying the algorithm tag and window family label.
struct MaximalReport {
  GridFunction output;
  MaxAlgorithm algorithm;
  const char* window_family = "axis-parallel lattice-centered cubes";
};
MaximalReport hl_maximal_report(const GridFunction& f, MaxAlgorithm alg);

/// max over probes of ||Mf||_p / ||f||_p -- a certified lower bound for the
/// operator norm on L^{p(.)}.
double probe_operator_norm(const ExponentFunction& p, std::span<const GridFunction> probes,
                           MaxAlgorithm alg = MaxAlgorithm::fast);

/// Built-in probe family (indicators, spike, bump) for norm probing.
std::vector<GridFunction> standard_probes(const Grid& g);

/// lhs = ||(sum (M f_k)^r)^{1/r}||_p, rhs = ||(sum |f_k|^r)^{1/r}||_p.
std::pair<double, double> vector_maximal(std::span<const GridFunction> fs, double r,
                                         const ExponentFunction& p);

struct IterationResult {
  GridFunction Rh;        // sum_{i<=I} M^i h / (2B)^i
  int terms_used = 0;     // I
  double tail_bound = 0;  // bound on the dropped tail in the (p/p0)' norm
  double B = 0;           // maximal norm bound used
  GridFunction next_term; // first dropped term, for pointwise tail control
};

/// Rubio de Francia iteration: damped Neumann series over maximal iterates.
/// Stops once the next term is below 5e-9 of ||h|| in the (p/p0)' norm.
IterationResult rubio_iteration(const GridFunction& h, const MP0Context& ctx);

}  // namespace hardyvar
