#include "hardyvar/smoothmax.hpp"

#include <cmath>
#include <sstream>

#include "hardyvar/io.hpp"

namespace hardyvar {

int default_dictionary_order(int dim, double p0) {
  return static_cast<int>(std::floor(dim / p0)) + dim + 2;
}

double truncation_exponent(int dim, double p0) {
  return std::max(2.0 * std::ceil(2.0 * dim / p0), 4.0 * dim);
}

TestDictionary TestDictionary::standard(int dim, double p0, const ScaleLadder& ladder, int n_deriv) {
  TestDictionary dict;
  dict.N = std::min(default_dictionary_order(dim, p0), 8);
  dict.ladder = ladder;
  if (n_deriv < 0) n_deriv = std::min(dict.N, 4);

  std::vector<Profile> raw;
  raw.push_back(bump_profile(dim));
  for (int k = 1; k <= n_deriv; ++k) raw.push_back(bump_derivative_profile(dim, k));
  std::vector<Profile> variants;
  for (const auto& p : raw) {
    variants.push_back(dilated(p, 0.5));
    variants.push_back(translated(p, 0.3 * p.support_radius));
  }
  for (auto& p : variants) raw.push_back(std::move(p));

  for (const auto& p : raw) {
    double c = std::max(1.0, p.max_seminorm(dict.N));
    dict.profiles.push_back(scaled_profile(p, 1.0 / c));
    dict.admission_scales.push_back(c);
  }
  return dict;
}

std::string TestDictionary::manifest_json() const {
  std::ostringstream out;
  out << "{\n  \"schema_version\": 1,\n  \"N\": " << N << ",\n  \"ladder\": {\"t_min\": "
      << format_double(ladder.t_min) << ", \"t_max\": " << format_double(ladder.t_max)
      << ", \"per_octave\": " << ladder.per_octave << "},\n  \"profiles\": [\n";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const Profile& p = profiles[i];
    out << "    {\"name\": \"" << p.name << "\", \"support_radius\": "
        << format_double(p.support_radius) << ", \"integral\": " << format_double(p.integral)
        << ", \"admission_scale\": " << format_double(admission_scales[i]) << ", \"seminorms\": [";
    auto tab = p.seminorm_table(N);
    bool first = true;
    for (int a = 0; a <= N; ++a)
      for (int b = 0; b <= N; ++b) {
        if (!first) out << ", ";
        first = false;
        out << "[" << a << ", " << b << ", " << format_double(tab[a][b]) << "]";
      }
    out << "]}" << (i + 1 < profiles.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

std::uint64_t TestDictionary::manifest_hash() const { return fnv1a(manifest_json()); }

GridFunction radial_max(const GridFunction& f, const Profile& phi, const ScaleLadder& ladder) {
  if (ladder.scales.empty()) throw std::invalid_argument("scale ladder is empty");
  GridFunction out(f.grid);
  for (double t : ladder.scales) {
    GridFunction conv = convolve_at_scale(f, phi, t);
    for (std::size_t k = 0; k < out.size(); ++k)
      out.values[k] = std::max(out.values[k], std::abs(conv.values[k]));
  }
  return out;
}

namespace {

// Offsets with |k| h < t (Euclidean); t <= h admits only the origin.
std::vector<std::pair<int, int>> aperture_offsets(const Grid& g, double t) {
  std::vector<std::pair<int, int>> offs;
  int reach = static_cast<int>(std::ceil(t / g.spacing)) - 1;
  reach = std::max(reach, 0);
  double t2 = t * t / (g.spacing * g.spacing);
  if (g.dim == 1) {
    for (int k = -reach; k <= reach; ++k)
      if (static_cast<double>(k) * k < t2) offs.emplace_back(k, 0);
  } else {
    for (int k1 = -reach; k1 <= reach; ++k1)
      for (int k2 = -reach; k2 <= reach; ++k2)
        if (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 < t2)
          offs.emplace_back(k1, k2);
  }
  if (offs.empty()) offs.emplace_back(0, 0);
  return offs;
}

GridFunction cone_sup(const GridFunction& f, const Profile& phi, const ScaleLadder& ladder) {
  const Grid& g = f.grid;
  GridFunction out(g);
  const int m = g.pts_per_axis;
  for (double t : ladder.scales) {
    GridFunction conv = convolve_at_scale(f, phi, t);
    auto offs = aperture_offsets(g, t);
    if (g.dim == 1) {
      for (int i = 0; i < m; ++i) {
        double best = out.values[i];
        for (auto [k, _] : offs) {
          int j = i + k;
          if (j < 0 || j >= m) continue;
          best = std::max(best, std::abs(conv.values[j]));
        }
        out.values[i] = best;
      }
    } else {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double best = out.at(i, j);
          for (auto [k1, k2] : offs) {
            int i2 = i + k1, j2 = j + k2;
            if (i2 < 0 || i2 >= m || j2 < 0 || j2 >= m) continue;
            best = std::max(best, std::abs(conv.at(i2, j2)));
          }
          out.at(i, j) = best;
        }
    }
  }
  return out;
}

}  // namespace

GridFunction nontangential_max(const GridFunction& f, const Profile& phi, const ScaleLadder& ladder) {
  if (ladder.scales.empty()) throw std::invalid_argument("scale ladder is empty");
  return cone_sup(f, phi, ladder);
}

GridFunction tangential_max(const GridFunction& f, const Profile& phi, double T,
                            const ScaleLadder& ladder) {
  if (!(T > 0)) throw std::invalid_argument("tangential exponent T must be positive");
  if (ladder.scales.empty()) throw std::invalid_argument("scale ladder is empty");
  const Grid& g = f.grid;
  const int m = g.pts_per_axis;
  GridFunction out(g);
  for (double t : ladder.scales) {
    GridFunction conv = convolve_at_scale(f, phi, t);
    for (std::size_t x = 0; x < g.size(); ++x) {
      Point px = g.point(x);
      double best = out.values[x];
      for (std::size_t z = 0; z < g.size(); ++z) {
        double cv = std::abs(conv.values[z]);
        if (cv <= best) continue;  // weight <= 1 cannot beat best
        Point pz = g.point(z);
        double dy = g.dim == 1 ? std::abs(px[0] - pz[0])
                               : norm2({px[0] - pz[0], px[1] - pz[1]});
        double wgt = std::pow(1.0 + dy / t, -T);
        best = std::max(best, cv * wgt);
      }
      out.values[x] = best;
    }
  }
  (void)m;
  return out;
}

GridFunction grand_max(const GridFunction& f, const TestDictionary& dict) {
  if (dict.profiles.empty()) throw std::invalid_argument("dictionary is empty");
  GridFunction out(f.grid);
  for (const auto& phi : dict.profiles) {
    GridFunction r = radial_max(f, phi, dict.ladder);
    for (std::size_t k = 0; k < out.size(); ++k)
      out.values[k] = std::max(out.values[k], r.values[k]);
  }
  return out;
}

GridFunction poisson_max(const GridFunction& f, const ScaleLadder& ladder) {
  Profile P = poisson_profile(f.grid.dim);
  return cone_sup(f, P, ladder);
}

GridFunction truncated_radial_max(const GridFunction& f, const Profile& phi, double eps,
                                  double Lexp, const ScaleLadder& ladder) {
  if (!(eps > 0) || !(eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
  if (!(Lexp > 0)) throw std::invalid_argument("Lexp must be positive");
  const Grid& g = f.grid;
  GridFunction out(g);
  for (double t : ladder.scales) {
    GridFunction conv = convolve_at_scale(f, phi, t);
    for (std::size_t k = 0; k < g.size(); ++k) {
      Point p = g.point(k);
      double ax = g.dim == 1 ? std::abs(p[0]) : norm2(p);
      double damp = std::pow(t / (t + eps + eps * ax), Lexp);
      out.values[k] = std::max(out.values[k], std::abs(conv.values[k]) * damp);
    }
  }
  return out;
}

double hardy_norm(const GridFunction& f, const TestDictionary& dict, const ExponentFunction& p) {
  return luxemburg_norm(grand_max(f, dict), p);
}

}  // namespace hardyvar
