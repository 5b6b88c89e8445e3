#include "hardyvar/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hardyvar {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void save_grid_function(const GridFunction& f, const std::string& path_stem) {
  {
    nlohmann::json hdr;
    hdr["dim"] = f.grid.dim;
    hdr["L"] = f.grid.half_width;
    hdr["h"] = f.grid.spacing;
    std::ofstream out(path_stem + ".json");
    if (!out) throw std::runtime_error("cannot write " + path_stem + ".json");
    out << hdr.dump(2) << "\n";
  }
  std::ofstream out(path_stem + ".csv");
  if (!out) throw std::runtime_error("cannot write " + path_stem + ".csv");
  const Grid& g = f.grid;
  if (g.dim == 1) {
    for (int i = 0; i < g.pts_per_axis; ++i)
      out << i << "," << format_double(f.values[i]) << "\n";
  } else {
    for (int i = 0; i < g.pts_per_axis; ++i)
      for (int j = 0; j < g.pts_per_axis; ++j)
        out << i << "," << j << "," << format_double(f.at(i, j)) << "\n";
  }
}

GridFunction load_grid_function(const std::string& path_stem) {
  nlohmann::json hdr;
  {
    std::ifstream in(path_stem + ".json");
    if (!in) throw std::runtime_error("cannot read " + path_stem + ".json");
    in >> hdr;
  }
  Grid g(hdr.at("dim").get<int>(), hdr.at("L").get<double>(), hdr.at("h").get<double>());
  GridFunction f(g);
  std::ifstream in(path_stem + ".csv");
  if (!in) throw std::runtime_error("cannot read " + path_stem + ".csv");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    int i = 0, j = 0;
    std::getline(ss, tok, ',');
    i = std::stoi(tok);
    if (g.dim == 2) {
      std::getline(ss, tok, ',');
      j = std::stoi(tok);
    }
    std::getline(ss, tok, ',');
    f.at(i, j) = std::strtod(tok.c_str(), nullptr);
  }
  return f;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str(), seed);
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace hardyvar
