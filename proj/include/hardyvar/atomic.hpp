#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hardyvar/czwhitney.hpp"
#include "hardyvar/grid.hpp"
#include "hardyvar/smoothmax.hpp"
#include "hardyvar/vlebesgue.hpp"

namespace hardyvar {

/// A (p(.), q) atom candidate: values supported in the ball B(center, radius),
/// with declared integrability exponent q (infinity for sup-normalized atoms)
/// and moment degree d.  Discrete ball measures are used throughout:
/// |B| = h^n * #(B cap lattice).
struct Atom {
  Point center{0.0, 0.0};
  double radius = 0.0;
  WindowedField values;
  double q = std::numeric_limits<double>::infinity();
  int d = 0;
  double chi_norm = 0.0;  // cached ||chi_B||_{p(.)}, 0 = not yet computed

  GridFunction dense(const Grid& g) const { return values.dense(g); }
};

struct AtomReport {
  bool support_ok = true;
  bool size_ok = true;
  bool moments_ok = true;
  double size_lhs = 0.0;       // ||a||_q
  double size_rhs = 0.0;       // |B|^{1/q} ||chi_B||^{-1}
  double worst_moment = 0.0;   // max scaled moment residual
  double moment_tol = 0.0;
  std::string fail_location;   // first offending lattice point, if any

  bool pass() const { return support_ok && size_ok && moments_ok; }
};

/// Checks support, the size condition, and vanishing moments up to the
/// context degree d (none when d < 0).
AtomReport validate_atom(const Atom& a, const Grid& g, const ExponentFunction& p,
                         const MP0Context& ctx);

struct AtomicDecomposition {
  std::vector<Atom> atoms;
  std::vector<double> coeffs;                    // lambda_j >= 0
  std::vector<std::pair<int, int>> provenance;   // (level j, cube k)
  GridFunction residual;                         // f - sum lambda_j a_j
  double truncation_bound = 0.0;                 // declared bound on |residual|
  double patch_constant = 0.0;                   // the constant c of the coefficients
  GridFunction grand;                            // grand maximal field of f
  int j_min = 0, j_max = 0;
};

/// Canonical decomposition into (p(.), infinity) atoms built from the
/// level sets E_j = {grand_max f > 2^j} and the CZ machinery per level.
/// Levels run until the leftover good part drops below
/// residual_tol * max|f|; the result reconstructs f up to that residual.
AtomicDecomposition canonical_decompose(const GridFunction& f, const ExponentFunction& p,
                                        const MP0Context& ctx, const TestDictionary& dict,
                                        double residual_tol = 1e-8);

/// Luxemburg norm of sum_j lambda_j chi_{B_j} / ||chi_{B_j}||.
double atomic_norm(const AtomicDecomposition& dec, const Grid& g, const ExponentFunction& p);

/// Regroups the canonical decomposition of a compactly supported finite atom
/// sum into finitely many (p(.), q) atoms: a scaled sup-atom on B(0, 4R), a
/// tail atom, and the atoms with |j| + k <= i.
AtomicDecomposition finite_regroup(const GridFunction& f, const ExponentFunction& p,
                                   const MP0Context& ctx, const TestDictionary& dict, double q);

/// Threshold the regrouping exponent must exceed.
double finite_atom_q_threshold(const ExponentFunction& p, const MP0Context& ctx);

}  // namespace hardyvar
