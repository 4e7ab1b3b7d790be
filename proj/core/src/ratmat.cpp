#include "anosovforge/ratmat.hpp"

#include <cmath>
#include <stdexcept>

namespace anosov {

RatMat2 RatMat2::identity() {
  RatMat2 m;
  m.at(0, 0) = 1;
  m.at(1, 1) = 1;
  return m;
}

RatMat2 mul2(const RatMat2& x, const RatMat2& y) {
  RatMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.at(i, j) = x.at(i, 0) * y.at(0, j) + x.at(i, 1) * y.at(1, j);
  return r;
}

Rat det2(const RatMat2& m) {
  return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
}

Rat trace2(const RatMat2& m) { return m.at(0, 0) + m.at(1, 1); }

RatMat2 inv2(const RatMat2& m) {
  const Rat d = det2(m);
  if (sgn(d) == 0) throw std::domain_error("inv2: singular matrix");
  RatMat2 r;
  r.at(0, 0) = m.at(1, 1) / d;
  r.at(0, 1) = -m.at(0, 1) / d;
  r.at(1, 0) = -m.at(1, 0) / d;
  r.at(1, 1) = m.at(0, 0) / d;
  return r;
}

RatMat3 RatMat3::identity() {
  RatMat3 m;
  m.at(0, 0) = 1;
  m.at(1, 1) = 1;
  m.at(2, 2) = 1;
  return m;
}

bool RatMat3::is_identity() const { return *this == identity(); }

RatMat3 mul3(const RatMat3& x, const RatMat3& y) {
  RatMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.at(i, j) = x.at(i, 0) * y.at(0, j) + x.at(i, 1) * y.at(1, j) +
                   x.at(i, 2) * y.at(2, j);
  return r;
}

Rat det3(const RatMat3& m) {
  return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
         m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
         m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

Rat trace3(const RatMat3& m) { return m.at(0, 0) + m.at(1, 1) + m.at(2, 2); }

RatMat3 inv3(const RatMat3& m) {
  const Rat d = det3(m);
  if (sgn(d) == 0) throw std::domain_error("inv3: singular matrix");
  RatMat3 r;  // adjugate over determinant
  r.at(0, 0) = (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) / d;
  r.at(0, 1) = (m.at(0, 2) * m.at(2, 1) - m.at(0, 1) * m.at(2, 2)) / d;
  r.at(0, 2) = (m.at(0, 1) * m.at(1, 2) - m.at(0, 2) * m.at(1, 1)) / d;
  r.at(1, 0) = (m.at(1, 2) * m.at(2, 0) - m.at(1, 0) * m.at(2, 2)) / d;
  r.at(1, 1) = (m.at(0, 0) * m.at(2, 2) - m.at(0, 2) * m.at(2, 0)) / d;
  r.at(1, 2) = (m.at(0, 2) * m.at(1, 0) - m.at(0, 0) * m.at(1, 2)) / d;
  r.at(2, 0) = (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0)) / d;
  r.at(2, 1) = (m.at(0, 1) * m.at(2, 0) - m.at(0, 0) * m.at(2, 1)) / d;
  r.at(2, 2) = (m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)) / d;
  return r;
}

RatMat3 transpose3(const RatMat3& m) {
  RatMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = m.at(j, i);
  return r;
}

RatMat3 pow3(const RatMat3& m, long e) {
  RatMat3 base = e < 0 ? inv3(m) : m;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  RatMat3 acc = RatMat3::identity();
  while (k) {
    if (k & 1) acc = mul3(acc, base);
    base = mul3(base, base);
    k >>= 1;
  }
  return acc;
}

RatVec3 apply3(const RatMat3& m, const RatVec3& v) {
  RatVec3 r;
  for (int i = 0; i < 3; ++i)
    r[static_cast<size_t>(i)] =
        m.at(i, 0) * v[0] + m.at(i, 1) * v[1] + m.at(i, 2) * v[2];
  return r;
}

RatVec2 apply2(const RatMat2& m, const RatVec2& v) {
  return {m.at(0, 0) * v[0] + m.at(0, 1) * v[1],
          m.at(1, 0) * v[0] + m.at(1, 1) * v[1]};
}

Cubic charpoly3(const RatMat3& m) {
  // det(xI - m) = x^3 - tr x^2 + (sum of principal 2x2 minors) x - det.
  const Rat minors = (m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)) +
                     (m.at(0, 0) * m.at(2, 2) - m.at(0, 2) * m.at(2, 0)) +
                     (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1));
  return Cubic{-trace3(m), minors, -det3(m)};
}

Rat cubic_eval(const Cubic& p, const Rat& x) {
  return ((x + p.c2) * x + p.c1) * x + p.c0;
}

Rat cubic_discriminant(const Cubic& p) {
  const Rat &b = p.c2, &c = p.c1, &d = p.c0;
  return Rat(18) * b * c * d - Rat(4) * b * b * b * d + b * b * c * c -
         Rat(4) * c * c * c - Rat(27) * d * d;
}

bool proportional(const RatVec3& x, const RatVec3& y) {
  const RatVec3 c = cross_rat(x, y);
  return sgn(c[0]) == 0 && sgn(c[1]) == 0 && sgn(c[2]) == 0;
}

RatVec3 cross_rat(const RatVec3& x, const RatVec3& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
          x[0] * y[1] - x[1] * y[0]};
}

Rat dot_rat(const RatVec3& x, const RatVec3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

Mat3d Mat3d::identity() {
  Mat3d m;
  m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1.0;
  return m;
}

Mat3d to_double(const RatMat3& m) {
  Mat3d r;
  for (size_t i = 0; i < 9; ++i) r.a[i] = m.a[i].get_d();
  return r;
}

Vec3d to_double(const RatVec3& v) {
  return {v[0].get_d(), v[1].get_d(), v[2].get_d()};
}

Mat3d mul(const Mat3d& x, const Mat3d& y) {
  Mat3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.at(i, j) = x.at(i, 0) * y.at(0, j) + x.at(i, 1) * y.at(1, j) +
                   x.at(i, 2) * y.at(2, j);
  return r;
}

double det(const Mat3d& m) {
  return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
         m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
         m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

Mat3d inverse(const Mat3d& m) {
  const double d = det(m);
  if (d == 0.0) throw std::domain_error("inverse: singular matrix");
  Mat3d r;
  r.at(0, 0) = (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) / d;
  r.at(0, 1) = (m.at(0, 2) * m.at(2, 1) - m.at(0, 1) * m.at(2, 2)) / d;
  r.at(0, 2) = (m.at(0, 1) * m.at(1, 2) - m.at(0, 2) * m.at(1, 1)) / d;
  r.at(1, 0) = (m.at(1, 2) * m.at(2, 0) - m.at(1, 0) * m.at(2, 2)) / d;
  r.at(1, 1) = (m.at(0, 0) * m.at(2, 2) - m.at(0, 2) * m.at(2, 0)) / d;
  r.at(1, 2) = (m.at(0, 2) * m.at(1, 0) - m.at(0, 0) * m.at(1, 2)) / d;
  r.at(2, 0) = (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0)) / d;
  r.at(2, 1) = (m.at(0, 1) * m.at(2, 0) - m.at(0, 0) * m.at(2, 1)) / d;
  r.at(2, 2) = (m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)) / d;
  return r;
}

Mat3d transpose(const Mat3d& m) {
  Mat3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.at(i, j) = m.at(j, i);
  return r;
}

Vec3d mul(const Mat3d& m, const Vec3d& v) {
  Vec3d r;
  for (int i = 0; i < 3; ++i)
    r[static_cast<size_t>(i)] =
        m.at(i, 0) * v[0] + m.at(i, 1) * v[1] + m.at(i, 2) * v[2];
  return r;
}

Mat3d pow(const Mat3d& m, long e) {
  Mat3d base = e < 0 ? inverse(m) : m;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Mat3d acc = Mat3d::identity();
  while (k) {
    if (k & 1) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1;
  }
  return acc;
}

double frobenius(const Mat3d& m) {
  double s = 0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

Vec3d add(const Vec3d& x, const Vec3d& y) {
  return {x[0] + y[0], x[1] + y[1], x[2] + y[2]};
}
Vec3d sub(const Vec3d& x, const Vec3d& y) {
  return {x[0] - y[0], x[1] - y[1], x[2] - y[2]};
}
Vec3d scale(const Vec3d& x, double s) { return {x[0] * s, x[1] * s, x[2] * s}; }
double dot(const Vec3d& x, const Vec3d& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}
Vec3d cross(const Vec3d& x, const Vec3d& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
          x[0] * y[1] - x[1] * y[0]};
}
double norm(const Vec3d& x) { return std::sqrt(dot(x, x)); }

Vec3d normalized(const Vec3d& x) {
  const double n = norm(x);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return scale(x, 1.0 / n);
}

Vec3d sign_normalized(const Vec3d& x) {
  Vec3d u = normalized(x);
  for (double c : u) {
    if (std::abs(c) > 1e-12) {
      if (c < 0) u = scale(u, -1.0);
      return u;
    }
  }
  return u;
}

}  // namespace anosov
