#pragma once

#include <cstdint>
#include <vector>

#include "hardyvar/grid.hpp"

namespace hardyvar {

/// splitmix64-based generator.  Kept in-library so seeded corpora are
/// byte-stable across standard library implementations.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// Built-in signals.

/// Smooth compactly supported bump: amp * exp(1 - 1/(1 - |x-c|^2/r^2)) on
/// |x-c| < r, zero outside (peak value = amp).
GridFunction bump_signal(const Grid& g, const Point& center, double radius, double amp = 1.0);

/// Indicator of the axis box [a,b] (1D) / [a,b]^2 (2D).
GridFunction box_indicator(const Grid& g, double a, double b);

/// Single lattice spike of total mass `mass` at the point nearest `where`.
GridFunction spike_signal(const Grid& g, const Point& where, double mass);

/// Random values in [-1,1] (every lattice point).
GridFunction random_signal(const Grid& g, Rng& rng);

/// Random smooth signal: a few random bumps with random centers/widths/signs.
GridFunction random_smooth_signal(const Grid& g, Rng& rng, int bumps = 4, double max_radius_frac = 0.3);

/// Nonnegative random smooth signal.
GridFunction random_smooth_nonneg(const Grid& g, Rng& rng, int bumps = 4);

/// Deterministic mixed corpus of smooth/rough compactly supported signals.
std::vector<GridFunction> standard_corpus(const Grid& g, int count, std::uint64_t seed);

}  // namespace hardyvar
