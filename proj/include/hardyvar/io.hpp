#pragma once

#include <cstdint>
#include <string>

#include "hardyvar/grid.hpp"

namespace hardyvar {

/// Writes <path>.csv (index columns, then value, 17 significant digits) and
/// <path>.json ({dim, L, h}).  The pair round-trips bit-exactly.
void save_grid_function(const GridFunction& f, const std::string& path_stem);
GridFunction load_grid_function(const std::string& path_stem);

std::string format_double(double x);

/// FNV-1a 64-bit, used to fingerprint manifests and artifacts.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed = 1469598103934665603ull);
std::uint64_t fnv1a_file(const std::string& path, std::uint64_t seed = 1469598103934665603ull);
std::string hex64(std::uint64_t v);

}  // namespace hardyvar
