#pragma once

#include <array>
#include <optional>
#include <vector>

#include "anosovforge/ratmat.hpp"

namespace anosov {

/// Line in RP^2: unit vector, sign-normalized so that equality up to sign
/// is plain comparison.
struct ProjPoint {
  Vec3d v{};
};

/// Plane through the origin, stored as a sign-normalized unit normal.
struct PlaneR3 {
  Vec3d normal{};
};

/// Spectral data of a 3x3 rational matrix. The characteristic polynomial
/// and the discriminant sign are exact; root moduli are double precision.
struct Spectrum3 {
  Cubic charpoly;
  int discriminant_sign = 0;          // sign of disc(charpoly), exact
  bool all_real = false;              // disc >= 0
  std::array<double, 3> moduli{};     // lambda_u >= lambda_c >= lambda_s
  std::array<bool, 3> real_flags{};   // aligned with moduli
  std::array<double, 3> real_eigs{};  // aligned; meaningful where real
};

Spectrum3 spectrum3(const RatMat3& m);

/// Three real eigenvalues with pairwise distinct moduli, decided exactly:
/// disc > 0 and no pair of roots sums to zero (c0 != c1*c2).
bool is_loxodromic(const RatMat3& m);

/// Exact test charpoly == (x-1)^3. The identity matrix also passes;
/// callers that need g != 1 must exclude it themselves.
bool is_unipotent(const RatMat3& m);

struct EigenStructure {
  ProjPoint Eu, Ec, Es;   // eigenlines, by eigenvalue modulus descending
  PlaneR3 Ecu, Ecs;       // span(Eu,Ec) and span(Ec,Es)
  std::array<double, 3> eigenvalues{};  // mu_u, mu_c, mu_s
};

/// Requires is_loxodromic(m); throws std::domain_error otherwise.
EigenStructure eigen_structure(const RatMat3& m);

/// Singular values s1 >= s2 >= s3 of the double-precision image of m.
std::array<double, 3> singular_values(const RatMat3& m);
std::array<double, 3> singular_values(const Mat3d& m);

enum class Sl2Class {
  plus_minus_identity,
  elliptic,
  parabolic,
  hyperbolic,
  glide,  // det = -1 with nonzero trace
};

/// Exact trace classification; requires det = +/-1. A det -1 involution
/// (trace 0, eigenvalue moduli both 1) is reported as elliptic since it
/// obstructs quasi-isometry the same way.
Sl2Class classify_sl2(const RatMat2& m);

/// (|tr| + sqrt(tr^2 - 4 det)) / 2 for real-spectrum input; throws on
/// elliptic matrices.
double sl2_top_modulus(const RatMat2& m);

/// Largest eigenvalue modulus of a det = +/-1 matrix; elliptic inputs
/// return 1 (both moduli are 1).
double sl2pm_top_modulus(const RatMat2& m);

/// Rank of (X, Y) -> Ad_g(Ad_{h^-1}(X) - X) + (Ad_g(Y) - Y) on traceless
/// 2x2 matrices, computed exactly. Both inputs must have det 1.
int commutator_differential_rank(const RatMat2& g, const RatMat2& h);

/// Real n-th root of a loxodromic matrix through its eigenbasis; requires
/// n odd when a real eigenvalue is negative. The result R satisfies
/// R^n = m within 1e-9 relative Frobenius residual and shares eigenlines
/// with m.
Mat3d nth_root_loxodromic(const RatMat3& m, long n);
Mat3d nth_root_loxodromic(const Mat3d& m, long n);

/// Rational eigenvalues of m, found by rationalizing float roots and
/// verifying charpoly(v) == 0 exactly.
std::vector<Rat> rational_eigenvalues(const RatMat3& m);

/// Rational kernel basis of m (exact Gaussian elimination).
std::vector<RatVec3> rational_kernel(const RatMat3& m);

/// Continued-fraction rationalization: nearest rational within tol whose
/// denominator stays below den_cap, if any.
std::optional<Rat> rationalize(double x, double tol = 1e-9,
                               double den_cap = 1e12);

/// Exact rank of an r x c rational matrix (row-major), r, c small.
int rational_rank(std::vector<std::vector<Rat>> rows);

double chordal(const Vec3d& a, const Vec3d& b);  // |a x b| / (|a||b|)
/// sin of the angle between a line and a plane given by its normal.
double line_plane_angle_sin(const Vec3d& line, const Vec3d& normal);

}  // namespace anosov
