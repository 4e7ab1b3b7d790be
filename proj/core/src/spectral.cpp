#include "anosovforge/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace anosov {

namespace {

Eigen::Matrix3d to_eigen(const Mat3d& m) {
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = m.at(i, j);
  return e;
}

Mat3d from_eigen(const Eigen::Matrix3d& e) {
  Mat3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.at(i, j) = e(i, j);
  return m;
}

// Roots of the monic cubic via the companion matrix, then one Newton step
// per real root to tighten them against the double-precision coefficients.
std::array<std::complex<double>, 3> cubic_roots(const Cubic& p) {
  const double c2 = p.c2.get_d(), c1 = p.c1.get_d(), c0 = p.c0.get_d();
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(0, 2) = -c0;
  comp(1, 0) = 1;
  comp(1, 2) = -c1;
  comp(2, 1) = 1;
  comp(2, 2) = -c2;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(comp, false);
  std::array<std::complex<double>, 3> roots;
  for (int i = 0; i < 3; ++i) roots[static_cast<size_t>(i)] = solver.eigenvalues()(i);
  for (auto& r : roots) {
    if (std::abs(r.imag()) > 1e-12 * (1.0 + std::abs(r.real()))) continue;
    double x = r.real();
    for (int it = 0; it < 3; ++it) {
      const double f = ((x + c2) * x + c1) * x + c0;
      const double df = (3 * x + 2 * c2) * x + c1;
      if (df == 0.0) break;
      x -= f / df;
    }
    r = std::complex<double>(x, 0.0);
  }
  return roots;
}

}  // namespace

Spectrum3 spectrum3(const RatMat3& m) {
  Spectrum3 s;
  s.charpoly = charpoly3(m);
  s.discriminant_sign = sgn(cubic_discriminant(s.charpoly));
  s.all_real = s.discriminant_sign >= 0;

  auto roots = cubic_roots(s.charpoly);
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(roots[static_cast<size_t>(i)]) > std::abs(roots[static_cast<size_t>(j)]);
  });
  for (int i = 0; i < 3; ++i) {
    const auto& r = roots[static_cast<size_t>(order[static_cast<size_t>(i)])];
    s.moduli[static_cast<size_t>(i)] = std::abs(r);
    // The exact discriminant sign decides realness; with one real root the
    // complex pair has the strictly larger imaginary parts.
    s.real_eigs[static_cast<size_t>(i)] = r.real();
  }
  if (s.all_real) {
    s.real_flags = {true, true, true};
    // Complex parts are numerical noise in this branch.
    auto sorted = roots;
    std::array<double, 3> re{};
    for (int i = 0; i < 3; ++i)
      re[static_cast<size_t>(i)] = sorted[static_cast<size_t>(order[static_cast<size_t>(i)])].real();
    s.real_eigs = re;
  } else {
    int real_idx = 0;
    double best = 1e300;
    for (int i = 0; i < 3; ++i) {
      const double im = std::abs(roots[static_cast<size_t>(order[static_cast<size_t>(i)])].imag());
      if (im < best) {
        best = im;
        real_idx = i;
      }
    }
    s.real_flags = {false, false, false};
    s.real_flags[static_cast<size_t>(real_idx)] = true;
  }
  return s;
}

bool is_loxodromic(const RatMat3& m) {
  const Cubic p = charpoly3(m);
  if (sgn(cubic_discriminant(p)) <= 0) return false;
  // Distinct real roots a, b with |a| = |b| force a + b = 0, which happens
  // exactly when the cubic factors as (x^2 + c1)(x + c2), i.e. c0 = c1 c2.
  return p.c0 != p.c1 * p.c2;
}

bool is_unipotent(const RatMat3& m) {
  const Cubic p = charpoly3(m);
  return p.c2 == -3 && p.c1 == 3 && p.c0 == -1;
}

EigenStructure eigen_structure(const RatMat3& m) {
  if (!is_loxodromic(m)) throw std::domain_error("eigen_structure: not loxodromic");
  const Spectrum3 s = spectrum3(m);
  const Mat3d md = to_double(m);

  EigenStructure es;
  es.eigenvalues = s.real_eigs;
  std::array<Vec3d, 3> lines;
  for (int i = 0; i < 3; ++i) {
    const double mu = s.real_eigs[static_cast<size_t>(i)];
    Mat3d shifted = md;
    for (int d = 0; d < 3; ++d) shifted.at(d, d) -= mu;
    // Kernel direction of a rank-2 matrix: the largest cross product of two rows.
    Vec3d best{0, 0, 0};
    double best_norm = -1;
    for (int r1 = 0; r1 < 3; ++r1)
      for (int r2 = r1 + 1; r2 < 3; ++r2) {
        const Vec3d row1{shifted.at(r1, 0), shifted.at(r1, 1), shifted.at(r1, 2)};
        const Vec3d row2{shifted.at(r2, 0), shifted.at(r2, 1), shifted.at(r2, 2)};
        const Vec3d c = cross(row1, row2);
        if (norm(c) > best_norm) {
          best_norm = norm(c);
          best = c;
        }
      }
    lines[static_cast<size_t>(i)] = sign_normalized(best);
  }
  es.Eu.v = lines[0];
  es.Ec.v = lines[1];
  es.Es.v = lines[2];
  es.Ecu.normal = sign_normalized(cross(lines[0], lines[1]));
  es.Ecs.normal = sign_normalized(cross(lines[1], lines[2]));

  for (int i = 0; i < 3; ++i) {
    const Vec3d img = mul(md, lines[static_cast<size_t>(i)]);
    if (chordal(img, lines[static_cast<size_t>(i)]) > 1e-9)
      throw std::runtime_error("eigen_structure: eigenline residual too large");
  }
  return es;
}

std::array<double, 3> singular_values(const RatMat3& m) {
  return singular_values(to_double(m));
}

std::array<double, 3> singular_values(const Mat3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  return {sv(0), sv(1), sv(2)};
}

Sl2Class classify_sl2(const RatMat2& m) {
  const Rat d = det2(m);
  const Rat tr = trace2(m);
  if (d == 1) {
    if (m == RatMat2::identity()) return Sl2Class::plus_minus_identity;
    RatMat2 neg = RatMat2::identity();
    neg.at(0, 0) = -1;
    neg.at(1, 1) = -1;
    if (m == neg) return Sl2Class::plus_minus_identity;
    const Rat abs_tr = abs(tr);
    if (abs_tr > 2) return Sl2Class::hyperbolic;
    if (abs_tr == 2) return Sl2Class::parabolic;
    return Sl2Class::elliptic;
  }
  if (d == -1) return sgn(tr) != 0 ? Sl2Class::glide : Sl2Class::elliptic;
  throw std::invalid_argument("classify_sl2: determinant must be +/-1");
}

double sl2_top_modulus(const RatMat2& m) {
  const Rat d = det2(m);
  if (d != 1 && d != -1)
    throw std::invalid_argument("sl2_top_modulus: determinant must be +/-1");
  const Rat disc = trace2(m) * trace2(m) - Rat(4) * d;
  if (sgn(disc) < 0) throw std::domain_error("sl2_top_modulus: elliptic input");
  const double tr = std::abs(trace2(m).get_d());
  return (tr + std::sqrt(disc.get_d())) / 2.0;
}

double sl2pm_top_modulus(const RatMat2& m) {
  const Rat d = det2(m);
  if (d != 1 && d != -1)
    throw std::invalid_argument("sl2pm_top_modulus: determinant must be +/-1");
  const Rat disc = trace2(m) * trace2(m) - Rat(4) * d;
  if (sgn(disc) < 0) return 1.0;
  const double tr = std::abs(trace2(m).get_d());
  return (tr + std::sqrt(disc.get_d())) / 2.0;
}

namespace {

// Coordinates of a traceless 2x2 matrix in the basis H, E, F.
std::array<Rat, 3> sl2_coords(const RatMat2& x) {
  return {x.at(0, 0), x.at(0, 1), x.at(1, 0)};
}

RatMat2 ad(const RatMat2& g, const RatMat2& x) {
  return mul2(mul2(g, x), inv2(g));
}

RatMat2 sub2(const RatMat2& x, const RatMat2& y) {
  RatMat2 r;
  for (size_t i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

}  // namespace

int commutator_differential_rank(const RatMat2& g, const RatMat2& h) {
  if (det2(g) != 1 || det2(h) != 1)
    throw std::invalid_argument("commutator_differential_rank: need det 1");
  RatMat2 H, E, F;
  H.at(0, 0) = 1;
  H.at(1, 1) = -1;
  E.at(0, 1) = 1;
  F.at(1, 0) = 1;
  const std::array<RatMat2, 3> basis{H, E, F};
  const RatMat2 h_inv = inv2(h);

  std::vector<std::vector<Rat>> columns;  // 6 columns of a 3x6 map
  for (const RatMat2& X : basis) {
    const RatMat2 img = ad(g, sub2(ad(h_inv, X), X));
    const auto c = sl2_coords(img);
    columns.push_back({c[0], c[1], c[2]});
  }
  for (const RatMat2& Y : basis) {
    const RatMat2 img = sub2(ad(g, Y), Y);
    const auto c = sl2_coords(img);
    columns.push_back({c[0], c[1], c[2]});
  }
  // Rank of the transpose equals the rank of the map.
  return rational_rank(std::move(columns));
}

Mat3d nth_root_loxodromic(const RatMat3& m, long n) {
  if (!is_loxodromic(m))
    throw std::domain_error("nth_root_loxodromic: not loxodromic");
  return nth_root_loxodromic(to_double(m), n);
}

Mat3d nth_root_loxodromic(const Mat3d& m, long n) {
  if (n <= 0) throw std::invalid_argument("nth_root_loxodromic: n must be positive");
  Eigen::EigenSolver<Eigen::Matrix3d> solver(to_eigen(m));
  const auto evals = solver.eigenvalues();
  const auto evecs = solver.eigenvectors();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(evals(i).imag()) > 1e-9 * (1.0 + std::abs(evals(i).real())))
      throw std::domain_error("nth_root_loxodromic: complex spectrum");
    if (evals(i).real() < 0 && n % 2 == 0)
      throw std::domain_error(
          "nth_root_loxodromic: even root of a negative eigenvalue");
  }
  Eigen::Matrix3d V, D = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int r = 0; r < 3; ++r) V(r, i) = evecs(r, i).real();
    const double mu = evals(i).real();
    D(i, i) = (mu < 0 ? -1.0 : 1.0) * std::pow(std::abs(mu), 1.0 / static_cast<double>(n));
  }
  const Eigen::Matrix3d R = V * D * V.inverse();
  const Mat3d root = from_eigen(R);
  const Mat3d check = pow(root, n);
  Mat3d diff;
  for (size_t i = 0; i < 9; ++i) diff.a[i] = check.a[i] - m.a[i];
  if (frobenius(diff) > 1e-9 * std::max(1.0, frobenius(m)))
    throw std::runtime_error("nth_root_loxodromic: residual too large");
  return root;
}

std::vector<Rat> rational_eigenvalues(const RatMat3& m) {
  const Cubic p = charpoly3(m);
  const auto roots = cubic_roots(p);
  std::vector<Rat> out;
  for (const auto& r : roots) {
    if (std::abs(r.imag()) > 1e-7 * (1.0 + std::abs(r.real()))) continue;
    const auto cand = rationalize(r.real(), 1e-7, 1e12);
    if (!cand) continue;
    if (sgn(cubic_eval(p, *cand)) != 0) continue;
    bool dup = false;
    for (const Rat& seen : out) dup = dup || seen == *cand;
    if (!dup) out.push_back(*cand);
  }
  return out;
}

std::vector<RatVec3> rational_kernel(const RatMat3& m) {
  // Gauss-Jordan over the rationals.
  std::vector<std::vector<Rat>> rows(3, std::vector<Rat>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.at(i, j);

  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < 3 && r < 3; ++c) {
    size_t piv = r;
    while (piv < 3 && sgn(rows[piv][c]) == 0) ++piv;
    if (piv == 3) continue;
    std::swap(rows[r], rows[piv]);
    const Rat inv = 1 / rows[r][c];
    for (size_t j = 0; j < 3; ++j) rows[r][j] *= inv;
    for (size_t i = 0; i < 3; ++i) {
      if (i == r || sgn(rows[i][c]) == 0) continue;
      const Rat f = rows[i][c];
      for (size_t j = 0; j < 3; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }

  std::vector<RatVec3> kernel;
  for (int c = 0; c < 3; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end())
      continue;
    RatVec3 v{Rat(0), Rat(0), Rat(0)};
    v[static_cast<size_t>(c)] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i)
      v[static_cast<size_t>(pivot_col[i])] = -rows[i][static_cast<size_t>(c)];
    kernel.push_back(v);
  }
  return kernel;
}

std::optional<Rat> rationalize(double x, double tol, double den_cap) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued fraction expansion with convergents p/q.
  double v = x;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(v);
    if (std::abs(fl) > 9e17) return std::nullopt;
    const long long a = static_cast<long long>(fl);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (static_cast<double>(q2) > den_cap) return std::nullopt;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (q1 != 0 &&
        std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <=
            tol * std::max(1.0, std::abs(x)))
      return rat(p1, q1);
    const double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 != 0 &&
      std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <=
          tol * std::max(1.0, std::abs(x)))
    return rat(p1, q1);
  return std::nullopt;
}

int rational_rank(std::vector<std::vector<Rat>> rows) {
  if (rows.empty()) return 0;
  const size_t cols = rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && sgn(rows[piv][c]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    for (size_t i = r + 1; i < rows.size(); ++i) {
      if (sgn(rows[i][c]) == 0) continue;
      const Rat f = rows[i][c] / rows[r][c];
      for (size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

double chordal(const Vec3d& a, const Vec3d& b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw std::domain_error("chordal: zero vector");
  return norm(cross(a, b)) / (na * nb);
}

double line_plane_angle_sin(const Vec3d& line, const Vec3d& normal) {
  return std::abs(dot(normalized(line), normalized(normal)));
}

}  // namespace anosov
