#include "anosovforge/flagdyn.hpp"

#include <cmath>
#include <stdexcept>

namespace anosov {

double flag_distance(const Flag& a, const Flag& b) {
  return std::max(chordal(a.line, b.line),
                  chordal(a.plane_normal, b.plane_normal));
}

Flag act_flag(const Mat3d& m, const Flag& f) {
  Flag out;
  out.line = sign_normalized(mul(m, f.line));
  out.plane_normal = sign_normalized(mul(transpose(inverse(m)), f.plane_normal));
  if (std::abs(dot(out.line, out.plane_normal)) > 1e-10)
    throw std::runtime_error("act_flag: incidence lost");
  return out;
}

Flag attracting_flag(const RatMat3& m) {
  const EigenStructure es = eigen_structure(m);
  return Flag{es.Eu.v, es.Ecu.normal};
}

Flag attracting_flag(const Mat3d& m) {
  // Power iteration is enough here: the line goes to E^u, the normal of
  // the attracting plane to the top eigenvector of the inverse transpose.
  const Mat3d mt = transpose(inverse(m));
  Vec3d line{0.37, 0.61, 0.72}, normal{0.53, 0.41, 0.74};
  for (int it = 0; it < 400; ++it) {
    line = normalized(mul(m, line));
    normal = normalized(mul(mt, normal));
  }
  Flag f{sign_normalized(line), sign_normalized(normal)};
  if (std::abs(dot(f.line, f.plane_normal)) > 1e-8)
    throw std::domain_error("attracting_flag: no dominated flag (non-loxodromic?)");
  return f;
}

std::vector<Flag> limit_set_sample(const FloatRep& rep, int max_length,
                                   const SampleOptions& opts) {
  std::vector<Flag> sample;
  const auto push = [&](const Flag& f) {
    for (const Flag& s : sample)
      if (flag_distance(s, f) <= opts.dedup_resolution) return;
    sample.push_back(f);
  };

  // Base flag: given or the attracting flag of the first loxodromic generator.
  std::optional<Flag> base = opts.base_flag;
  if (!base) {
    for (const Mat3d& img : rep.images) {
      try {
        base = attracting_flag(img);
        break;
      } catch (const std::domain_error&) {
      }
    }
  }

  const int rank = rep.gens.rank;
  std::function<void(const Word&, const Mat3d&, int)> walk =
      [&](const Word& w, const Mat3d& m, int depth) {
        if (depth >= 1) {
          if (base) push(act_flag(m, *base));
          // Attracting flag when the word acts loxodromically.
          try {
            push(attracting_flag(m));
          } catch (const std::domain_error&) {
          }
        }
        if (depth == max_length) return;
        for (int32_t x = -rank; x <= rank; ++x) {
          if (x == 0) continue;
          if (!w.empty() && x == -w.back()) continue;
          Word w2 = w;
          w2.push_back(x);
          const Mat3d& img = rep.images[static_cast<size_t>((x > 0 ? x : -x) - 1)];
          walk(w2, mul(m, x > 0 ? img : inverse(img)), depth + 1);
        }
      };
  walk(Word{}, Mat3d::identity(), 0);
  return sample;
}

CoverageReport coverage(const std::vector<Flag>& sample, double eta,
                        double delta, int max_length) {
  if (eta <= 0 || delta <= 0)
    throw std::invalid_argument("coverage: eta and delta must be positive");

  CoverageReport rep;
  rep.eta = eta;
  rep.delta = delta;
  rep.max_length = max_length;

  // Deterministic grid of lines: polar rings over the upper hemisphere.
  std::vector<Vec3d> lines;
  const long polar_steps = static_cast<long>(std::ceil(M_PI / 2 / eta));
  for (long i = 0; i <= polar_steps; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) * (M_PI / 2) /
                         static_cast<double>(polar_steps + 1);
    const long az = std::max<long>(
        1, static_cast<long>(std::ceil(2 * M_PI * std::sin(theta) / eta)));
    for (long j = 0; j < az; ++j) {
      const double phi = 2 * M_PI * static_cast<double>(j) / static_cast<double>(az);
      lines.push_back(sign_normalized(Vec3d{std::sin(theta) * std::cos(phi),
                                            std::sin(theta) * std::sin(phi),
                                            std::cos(theta)}));
    }
  }

  const long fiber_steps =
      std::max<long>(1, static_cast<long>(std::ceil(M_PI / eta)));
  const size_t grid_size = lines.size() * static_cast<size_t>(fiber_steps);
  if (grid_size > kCoverageGridCap)
    throw std::invalid_argument("coverage: grid exceeds the cell cap");
  rep.grid_size = grid_size;

  for (const Vec3d& l : lines) {
    // Orthonormal frame of the incident-plane fiber over l.
    Vec3d e{1, 0, 0};
    if (std::abs(l[0]) > 0.8) e = Vec3d{0, 1, 0};
    const Vec3d u = normalized(cross(l, e));
    const Vec3d v = cross(l, u);
    for (long j = 0; j < fiber_steps; ++j) {
      const double psi = M_PI * static_cast<double>(j) / static_cast<double>(fiber_steps);
      const Flag cell{l, sign_normalized(add(scale(u, std::cos(psi)),
                                             scale(v, std::sin(psi))))};
      for (const Flag& s : sample) {
        // Cheap line prefilter before the full flag distance.
        if (chordal(cell.line, s.line) > delta) continue;
        if (flag_distance(cell, s) <= delta) {
          ++rep.covered;
          break;
        }
      }
    }
  }
  rep.fraction = grid_size == 0
                     ? 0.0
                     : static_cast<double>(rep.covered) / static_cast<double>(grid_size);
  return rep;
}

}  // namespace anosov
