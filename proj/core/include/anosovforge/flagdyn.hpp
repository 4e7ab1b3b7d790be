#pragma once

#include <optional>
#include <vector>

#include "anosovforge/represent.hpp"

namespace anosov {

/// Incident (line, plane) pair; the plane is stored by its unit normal.
struct Flag {
  Vec3d line{};
  Vec3d plane_normal{};
};

/// max of the chordal distances on the line and on the plane normal.
double flag_distance(const Flag& a, const Flag& b);

/// (M . L, M . P): the plane normal transforms by the inverse transpose.
Flag act_flag(const Mat3d& m, const Flag& f);

/// (E^u, E^cu) of a loxodromic matrix.
Flag attracting_flag(const RatMat3& m);
Flag attracting_flag(const Mat3d& m);

struct SampleOptions {
  double dedup_resolution = 1e-6;
  std::optional<Flag> base_flag;  // default: attracting flag of the first
                                  // loxodromic generator
};

/// Attracting flags of all loxodromic images of words up to the given
/// length, plus the orbit of a base flag, deduplicated.
std::vector<Flag> limit_set_sample(const FloatRep& rep, int max_length,
                                   const SampleOptions& opts = {});

struct CoverageReport {
  double eta = 0;
  double delta = 0;
  int max_length = 0;  // word-length schedule of the sample
  size_t grid_size = 0;
  size_t covered = 0;
  double fraction = 0;
};

inline constexpr size_t kCoverageGridCap = 10'000'000;

/// Fraction of a deterministic flag grid (lines on an eta-grid of RP^2,
/// each fibered by incident planes at angular pitch eta) lying within
/// flag distance delta of the sample. Grids above the cap are refused.
CoverageReport coverage(const std::vector<Flag>& sample, double eta,
                        double delta, int max_length = 0);

}  // namespace anosov
