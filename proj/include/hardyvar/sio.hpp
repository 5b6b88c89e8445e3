#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardyvar/atomic.hpp"
#include "hardyvar/grid.hpp"
#include "hardyvar/weights.hpp"

namespace hardyvar {

/// Convolution-type singular integral kernel: pointwise evaluator away from
/// the origin, declared regularity order, and an optional closed-form
/// diagonal cell integral (zero by oddness for the built-ins).
struct SIOKernel {
  std::string name;
  int dim = 1;
  int order = 0;  // regularity order k
  std::function<double(Point)> K;
  std::optional<double> diagonal_cell_integral;  // per unit f value

  static SIOKernel hilbert();        // 1/(pi x), 1D
  static SIOKernel riesz(int axis);  // x_i / (2 pi |x|^3), 2D
};

struct KernelRegularityReport {
  int order = 0;
  // per derivative order b: smallest C with |D^b K| <= C / |x|^{n+b} on the mesh
  std::vector<double> constants;
  // per (b, radius) the measured sup of |x|^{n+b} |D^b K| on that annulus
  std::vector<std::vector<double>> per_radius;
  std::vector<double> radii;
  double fourier_band_sup = 0.0;  // numerical sup of |K^| over a band
  bool homogeneous = true;        // per-radius constants stable across annuli
};

/// Finite-difference verification of the kernel decay conditions on annuli.
KernelRegularityReport verify_kernel_regularity(const SIOKernel& kernel,
                                                const std::vector<double>& radii, int order);

/// Principal-value discrete convolution: sum over y != x of K(x-y) f(y) h^n,
/// plus the registered diagonal correction when present.
GridFunction apply_sio(const SIOKernel& kernel, const GridFunction& f);

struct AtomImageReport {
  double fitted_exponent = 0.0;    // decay of |Ta| outside 2B
  double expected_exponent = 0.0;  // n + d + 1
  double constant = 0.0;           // smallest admissible C in the pointwise bound
  double grand_fitted_exponent = 0.0;  // decay of grand_max(Ta)
  double grand_constant = 0.0;
};

/// Fits |Ta| (and grand_max Ta) against C |x-x0|^{-(n+d+1)} outside 2B.
AtomImageReport atom_image_bounds(const SIOKernel& kernel, const Atom& a, const Grid& g,
                                  const MP0Context& ctx, const TestDictionary& dict);

/// lhs = integral_B |Tf|^p w, rhs = w(B)^{1-p} (integral |f| w)^p.
std::pair<double, double> kolmogorov_check(const SIOKernel& kernel, const GridFunction& f,
                                           const Weight& w, double p, const Ball& ball);

enum class BoundednessMode { L, H };

struct BoundednessReport {
  std::string kernel;
  BoundednessMode mode = BoundednessMode::L;
  std::vector<double> per_signal;  // ||Tf|| / ||f||_{H} per corpus entry
  double sup_ratio = 0.0;
  // per weight generator: sup over test atoms of the weighted atom condition
  std::vector<std::string> weight_names;
  std::vector<double> atom_condition;  // ||Ta||_{L^{p0}(w)} ||chi_B|| / w(B)^{1/p0}
  std::vector<double> tail_constant;   // J |B|^{p0 gamma} / ([w]_{A1} w(B))
};

BoundednessReport boundedness_experiment(const SIOKernel& kernel,
                                         const std::vector<GridFunction>& corpus,
                                         const ExponentFunction& p, const MP0Context& ctx,
                                         const TestDictionary& dict, BoundednessMode mode);

}  // namespace hardyvar
