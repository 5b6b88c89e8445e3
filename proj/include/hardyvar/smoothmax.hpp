#pragma once

#include <string>
#include <vector>

#include "hardyvar/grid.hpp"
#include "hardyvar/profiles.hpp"
#include "hardyvar/vlebesgue.hpp"

namespace hardyvar {

/// Finite family of profiles rescaled into the discrete S_N seminorm ball,
/// with a shared scale ladder.  The pointwise max of radial maxima over the
/// members is the computable surrogate for the grand maximal operator.
struct TestDictionary {
  int N = 0;
  std::vector<Profile> profiles;          // members, already in the S_N ball
  std::vector<double> admission_scales;   // original = scale * member
  ScaleLadder ladder;

  /// Bump, its first n_deriv coordinate derivatives, and dilated/translated
  /// variants of each, all rescaled by their measured seminorm tables.
  /// n_deriv < 0 takes min(N, 4).
  static TestDictionary standard(int dim, double p0, const ScaleLadder& ladder, int n_deriv = -1);

  std::string manifest_json() const;
  std::uint64_t manifest_hash() const;
  const Profile& primary() const { return profiles.front(); }  // unit integral
};

/// Default dictionary order floor(n/p0) + n + 2.
int default_dictionary_order(int dim, double p0);
/// Truncation exponent helper for the eps-truncated operators.
double truncation_exponent(int dim, double p0);

/// sup over ladder scales of |f * Phi_t|.
GridFunction radial_max(const GridFunction& f, const Profile& phi, const ScaleLadder& ladder);

/// sup over scales t and lattice y with |x-y| < t of |f * Phi_t(y)|.
GridFunction nontangential_max(const GridFunction& f, const Profile& phi, const ScaleLadder& ladder);

/// sup over lattice z and scales of |f * Phi_t(z)| (1 + |x-z|/t)^{-T}.
GridFunction tangential_max(const GridFunction& f, const Profile& phi, double T,
                            const ScaleLadder& ladder);

/// Pointwise max of radial maxima over the dictionary.
GridFunction grand_max(const GridFunction& f, const TestDictionary& dict);

/// Non-tangential maximal function of the Poisson extension.
GridFunction poisson_max(const GridFunction& f, const ScaleLadder& ladder);

/// sup over scales of |f * Phi_t(x)| * t^L / (t + eps + eps|x|)^L.
GridFunction truncated_radial_max(const GridFunction& f, const Profile& phi, double eps,
                                  double Lexp, const ScaleLadder& ladder);

/// ||grand_max f||_{p(.)} -- the Hardy-space norm in this artifact.
double hardy_norm(const GridFunction& f, const TestDictionary& dict, const ExponentFunction& p);

}  // namespace hardyvar
