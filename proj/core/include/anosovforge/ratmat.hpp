#pragma once

#include <array>
#include <string>

#include "anosovforge/rat.hpp"

namespace anosov {

using RatVec2 = std::array<Rat, 2>;
using RatVec3 = std::array<Rat, 3>;
using Vec3d = std::array<double, 3>;

/// Exact rational 2x2 matrix, row major.
struct RatMat2 {
  std::array<Rat, 4> a{};

  static RatMat2 identity();
  Rat& at(int i, int j) { return a[static_cast<size_t>(2 * i + j)]; }
  const Rat& at(int i, int j) const { return a[static_cast<size_t>(2 * i + j)]; }
  bool operator==(const RatMat2&) const = default;
};

RatMat2 mul2(const RatMat2& x, const RatMat2& y);
Rat det2(const RatMat2& m);
Rat trace2(const RatMat2& m);
RatMat2 inv2(const RatMat2& m);  // throws std::domain_error if singular

/// Exact rational 3x3 matrix, row major.
struct RatMat3 {
  std::array<Rat, 9> a{};

  static RatMat3 identity();
  Rat& at(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
  const Rat& at(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }
  bool operator==(const RatMat3&) const = default;
  bool is_identity() const;
};

RatMat3 mul3(const RatMat3& x, const RatMat3& y);
Rat det3(const RatMat3& m);
Rat trace3(const RatMat3& m);
RatMat3 inv3(const RatMat3& m);  // throws std::domain_error if singular
RatMat3 transpose3(const RatMat3& m);
RatMat3 pow3(const RatMat3& m, long e);  // negative exponents allowed
RatVec3 apply3(const RatMat3& m, const RatVec3& v);
RatVec2 apply2(const RatMat2& m, const RatVec2& v);

/// Monic characteristic polynomial x^3 + c2 x^2 + c1 x + c0 of a 3x3 matrix.
struct Cubic {
  Rat c2, c1, c0;
  bool operator==(const Cubic&) const = default;
};

Cubic charpoly3(const RatMat3& m);
Rat cubic_eval(const Cubic& p, const Rat& x);
/// Discriminant of the monic cubic (exact).
Rat cubic_discriminant(const Cubic& p);

/// Exact projective equality of rational 3-vectors (nonzero, up to scale).
bool proportional(const RatVec3& x, const RatVec3& y);
RatVec3 cross_rat(const RatVec3& x, const RatVec3& y);
Rat dot_rat(const RatVec3& x, const RatVec3& y);

// ---------------------------------------------------------------------------
// Double-precision 3x3 helpers used by the floating layers.

struct Mat3d {
  std::array<double, 9> a{};

  static Mat3d identity();
  double& at(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
  double at(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }
};

Mat3d to_double(const RatMat3& m);
Vec3d to_double(const RatVec3& v);
Mat3d mul(const Mat3d& x, const Mat3d& y);
Mat3d inverse(const Mat3d& m);
Mat3d transpose(const Mat3d& m);
Vec3d mul(const Mat3d& m, const Vec3d& v);
Mat3d pow(const Mat3d& m, long e);
double frobenius(const Mat3d& m);
double det(const Mat3d& m);

Vec3d add(const Vec3d& x, const Vec3d& y);
Vec3d sub(const Vec3d& x, const Vec3d& y);
Vec3d scale(const Vec3d& x, double s);
double dot(const Vec3d& x, const Vec3d& y);
Vec3d cross(const Vec3d& x, const Vec3d& y);
double norm(const Vec3d& x);
Vec3d normalized(const Vec3d& x);
/// Unit representative with the first coordinate of modulus > 1e-12 positive.
Vec3d sign_normalized(const Vec3d& x);

}  // namespace anosov
