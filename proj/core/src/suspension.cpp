#include "anosovforge/suspension.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anosov {

namespace {

Rat rat_abs(const Rat& r) { return sgn(r) < 0 ? Rat(-r) : r; }

double top_modulus_2x2(double tr, double dt) {
  const double disc = tr * tr - 4.0 * dt;
  if (disc >= 0.0) return (std::abs(tr) + std::sqrt(disc)) / 2.0;
  return std::sqrt(std::abs(dt));  // complex pair, both moduli sqrt|det|
}

struct Mat2d {
  std::array<double, 4> a{};
  static Mat2d id() { return {{1, 0, 0, 1}}; }
};

Mat2d mul2d(const Mat2d& x, const Mat2d& y) {
  return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
           x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}

Mat2d inv2d(const Mat2d& m) {
  const double d = m.a[0] * m.a[3] - m.a[1] * m.a[2];
  return {{m.a[3] / d, -m.a[1] / d, -m.a[2] / d, m.a[0] / d}};
}

}  // namespace

void Suspension::validate() const {
  if (rank < 2) throw std::invalid_argument("Suspension: rank must be >= 2");
  const size_t k = static_cast<size_t>(rank);
  if (plane_parts.size() != k || multipliers.size() != k || signs.size() != k ||
      kappas.size() != k)
    throw std::invalid_argument("Suspension: per-generator data sizes mismatch");
  for (size_t i = 0; i < k; ++i) {
    const Rat d = det2(plane_parts[i]);
    if (d != 1 && d != -1)
      throw std::invalid_argument("Suspension: plane part determinant must be +/-1");
    if (sgn(multipliers[i]) <= 0)
      throw std::invalid_argument("Suspension: multipliers must be positive");
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("Suspension: signs must be +/-1");
    if (Rat(signs[i]) != d)
      throw std::invalid_argument(
          "Suspension: sign inconsistent with plane determinant (assembled "
          "determinant would not be 1)");
  }
}

RatMat2 Suspension::plane_word(const Word& w) const {
  RatMat2 acc = RatMat2::identity();
  for (int32_t x : w) {
    const size_t i = static_cast<size_t>((x > 0 ? x : -x) - 1);
    if (i >= plane_parts.size())
      throw std::invalid_argument("plane_word: letter out of range");
    acc = mul2(acc, x > 0 ? plane_parts[i] : inv2(plane_parts[i]));
  }
  return acc;
}

Rat Suspension::multiplier_word(const Word& w) const {
  Rat acc(1);
  for (int32_t x : w) {
    const size_t i = static_cast<size_t>((x > 0 ? x : -x) - 1);
    if (i >= multipliers.size())
      throw std::invalid_argument("multiplier_word: letter out of range");
    if (x > 0)
      acc *= multipliers[i];
    else
      acc /= multipliers[i];
  }
  return acc;
}

int Suspension::sign_word(const Word& w) const {
  int s = 1;
  for (int32_t x : w) s *= signs[static_cast<size_t>((x > 0 ? x : -x) - 1)];
  return s;
}

Representation assemble(const Suspension& susp) {
  susp.validate();
  std::vector<RatMat3> images;
  for (size_t i = 0; i < static_cast<size_t>(susp.rank); ++i) {
    const auto root = rat_sqrt_exact(susp.multipliers[i]);
    if (!root)
      throw std::domain_error(
          "assemble: multiplier " + rat_str(susp.multipliers[i]) +
          " is not a rational square, exact assembly impossible");
    const Rat inv_root = 1 / *root;
    RatMat3 m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m.at(r, c) = inv_root * susp.plane_parts[i].at(r, c);
    m.at(0, 2) = susp.kappas[i][0];
    m.at(1, 2) = susp.kappas[i][1];
    m.at(2, 2) = Rat(susp.signs[i]) * susp.multipliers[i];
    if (det3(m) != 1)
      throw std::domain_error("assemble: inconsistent data, determinant != 1");
    images.push_back(m);
  }
  return Representation(GeneratorSet::standard(susp.rank), std::move(images));
}

Suspension extract(const Representation& rep, const PlaneR3& plane) {
  // Rationalize the plane normal.
  RatVec3 n;
  for (int i = 0; i < 3; ++i) {
    const auto r = rationalize(plane.normal[static_cast<size_t>(i)], 1e-10);
    if (!r) throw std::invalid_argument("extract: plane normal not rationalizable");
    n[static_cast<size_t>(i)] = *r;
  }
  if (sgn(n[0]) == 0 && sgn(n[1]) == 0 && sgn(n[2]) == 0)
    throw std::invalid_argument("extract: zero plane normal");

  // Rational basis (v1, v2) of the plane plus a transverse coordinate axis.
  std::array<RatVec3, 2> v{};
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (rat_abs(n[static_cast<size_t>(i)]) > rat_abs(n[static_cast<size_t>(axis)])) axis = i;
  int vi = 0;
  for (int i = 0; i < 3 && vi < 2; ++i) {
    if (i == axis) continue;
    RatVec3 b{Rat(0), Rat(0), Rat(0)};
    b[static_cast<size_t>(i)] = 1;
    b[static_cast<size_t>(axis)] = -n[static_cast<size_t>(i)] / n[static_cast<size_t>(axis)];
    v[static_cast<size_t>(vi++)] = b;
  }
  RatVec3 u{Rat(0), Rat(0), Rat(0)};
  u[static_cast<size_t>(axis)] = 1;

  RatMat3 B;
  for (int r = 0; r < 3; ++r) {
    B.at(r, 0) = v[0][static_cast<size_t>(r)];
    B.at(r, 1) = v[1][static_cast<size_t>(r)];
    B.at(r, 2) = u[static_cast<size_t>(r)];
  }
  const RatMat3 B_inv = inv3(B);

  Suspension out;
  out.rank = rep.rank();
  for (const RatMat3& img : rep.images()) {
    const RatMat3 c = mul3(mul3(B_inv, img), B);
    if (sgn(c.at(2, 0)) != 0 || sgn(c.at(2, 1)) != 0)
      throw std::invalid_argument("extract: plane is not invariant");
    const Rat corner = c.at(2, 2);
    const Rat t = rat_abs(corner);
    const int s = sgn(corner);
    const auto root = rat_sqrt_exact(t);
    if (!root)
      throw std::domain_error("extract: multiplier " + rat_str(t) +
                              " is not a rational square");
    RatMat2 p;
    for (int r = 0; r < 2; ++r)
      for (int cc = 0; cc < 2; ++cc) p.at(r, cc) = *root * c.at(r, cc);
    out.plane_parts.push_back(p);
    out.multipliers.push_back(t);
    out.signs.push_back(s);
    out.kappas.push_back({c.at(0, 2), c.at(1, 2)});
  }
  out.validate();
  return out;
}

LambdaTriple lambda_triple(const Suspension& susp, const Word& w) {
  LambdaTriple lt;
  lt.lambda_perp = susp.multiplier_word(w);
  const RatMat2 p = susp.plane_word(w);
  const double lu = sl2pm_top_modulus(p);
  const double scale = std::sqrt(rat_d(lt.lambda_perp));
  lt.lambda1 = lu / scale;
  lt.lambda2 = 1.0 / (lu * scale);
  return lt;
}

std::optional<Word> hyperbolicity_scan(const Suspension& susp, int max_length) {
  susp.validate();
  std::optional<Word> witness;
  for (int n = 1; n <= max_length && !witness; ++n) {
    enumerate(susp.rank, n, [&](const Word& w) {
      if (witness) return;
      const RatMat2 p = susp.plane_word(w);
      const Rat d = det2(p);
      if (d == 1) {
        if (rat_abs(trace2(p)) <= 2) witness = w;
      } else {
        if (sgn(trace2(p)) == 0) witness = w;
      }
    });
  }
  return witness;
}

LahnResult lahn_ratio(const Suspension& susp, int max_length) {
  if (const auto bad = hyperbolicity_scan(susp, max_length)) {
    std::ostringstream os;
    os << "lahn_ratio: hyperbolicity scan failed at word [";
    for (int32_t x : *bad) os << x << " ";
    os << "]";
    throw std::domain_error(os.str());
  }

  LahnResult res;
  res.inf_ratio = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= max_length; ++n) {
    enumerate(susp.rank, n, [&](const Word& w) {
      const Rat t = susp.multiplier_word(w);
      if (t == 1) return;  // phi(w) = 0, excluded from the infimum
      ++res.words_considered;
      const double lu = sl2pm_top_modulus(susp.plane_word(w));
      const double ratio = std::log(lu) / std::abs(std::log(rat_d(t)));
      if (ratio < res.inf_ratio ||
          (ratio == res.inf_ratio && word_lex_less(w, res.witness))) {
        res.inf_ratio = ratio;
        res.witness = w;
      }
    });
  }
  if (res.words_considered == 0)
    throw std::domain_error("lahn_ratio: no word with phi != 0 up to the depth");
  res.anosov_consistent = res.inf_ratio > 1.5;
  return res;
}

DfbEvidence dfb_evidence(const Suspension& susp, int max_length) {
  susp.validate();
  DfbEvidence ev;
  ev.hyperbolicity_witness = hyperbolicity_scan(susp, max_length);

  // Plane action embedded as diag(plane_part, det plane_part): exact det 1.
  std::vector<RatMat3> images;
  for (size_t i = 0; i < static_cast<size_t>(susp.rank); ++i) {
    RatMat3 m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m.at(r, c) = susp.plane_parts[i].at(r, c);
    m.at(2, 2) = det2(susp.plane_parts[i]);
    images.push_back(m);
  }
  Representation embedded(GeneratorSet::standard(susp.rank), std::move(images));
  ev.plane_profile = qi_profile(embedded, max_length);
  ev.slope_positive = ev.plane_profile.slope_s1 > 0;
  for (const auto& [w, m] : unipotent_scan(embedded, max_length))
    ev.unipotent_witnesses.push_back(w);
  ev.pass = !ev.hyperbolicity_witness && ev.slope_positive &&
            ev.unipotent_witnesses.empty();
  return ev;
}

ScaledSuspension scale_generator(const Suspension& susp, int generator,
                                 double eps) {
  susp.validate();
  if (generator < 0 || generator >= susp.rank)
    throw std::invalid_argument("scale_generator: generator index out of range");
  return ScaledSuspension{susp, generator, eps};
}

double ScaledSuspension::lambda1(const Word& w) const {
  const long p = abelianize(w, base.rank)[static_cast<size_t>(scaled_generator)];
  const LambdaTriple lt = anosov::lambda_triple(base, w);
  return lt.lambda1 * std::exp(-eps * static_cast<double>(p) / 2.0);
}

double ScaledSuspension::lambda_perp(const Word& w) const {
  const long p = abelianize(w, base.rank)[static_cast<size_t>(scaled_generator)];
  return rat_d(base.multiplier_word(w)) * std::exp(eps * static_cast<double>(p));
}

double ScaledSuspension::lambda1_recomputed(const Word& w) const {
  Mat2d acc = Mat2d::id();
  for (int32_t x : w) {
    const size_t i = static_cast<size_t>((x > 0 ? x : -x) - 1);
    const double t = rat_d(base.multipliers[i]) *
                     (static_cast<int>(i) == scaled_generator ? std::exp(eps) : 1.0);
    const double f = 1.0 / std::sqrt(t);
    Mat2d block;
    for (int j = 0; j < 4; ++j)
      block.a[static_cast<size_t>(j)] =
          f * base.plane_parts[i].a[static_cast<size_t>(j)].get_d();
    acc = mul2d(acc, x > 0 ? block : inv2d(block));
  }
  const double tr = acc.a[0] + acc.a[3];
  const double dprod = acc.a[0] * acc.a[3] - acc.a[1] * acc.a[2];
  return top_modulus_2x2(tr, dprod);
}

double ScaledSuspension::lambda_perp_recomputed(const Word& w) const {
  double acc = 1.0;
  for (int32_t x : w) {
    const size_t i = static_cast<size_t>((x > 0 ? x : -x) - 1);
    const double t = rat_d(base.multipliers[i]) *
                     (static_cast<int>(i) == scaled_generator ? std::exp(eps) : 1.0);
    acc *= x > 0 ? t : 1.0 / t;
  }
  return acc;
}

Mat3d ScaledSuspension::evaluate(const Word& w) const {
  Mat3d acc = Mat3d::identity();
  for (int32_t x : w) {
    const size_t i = static_cast<size_t>((x > 0 ? x : -x) - 1);
    const double t = rat_d(base.multipliers[i]) *
                     (static_cast<int>(i) == scaled_generator ? std::exp(eps) : 1.0);
    const double f = 1.0 / std::sqrt(t);
    Mat3d g;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g.at(r, c) = f * base.plane_parts[i].at(r, c).get_d();
    g.at(0, 2) = base.kappas[i][0].get_d();
    g.at(1, 2) = base.kappas[i][1].get_d();
    g.at(2, 2) = static_cast<double>(base.signs[i]) * t;
    acc = mul(acc, x > 0 ? g : inverse(g));
  }
  return acc;
}

VClass v_class(const Suspension& susp, const Word& w) {
  const LambdaTriple lt = lambda_triple(susp, w);
  const double lp = rat_d(lt.lambda_perp);
  const double tol = 1e-9;
  if (std::abs(lt.lambda1 - lp) <= tol * std::max(1.0, std::abs(lp)))
    return VClass::Boundary;
  if (lt.lambda1 < lp) return VClass::V;
  if (std::abs(lp - lt.lambda2) <= tol * std::max(1.0, std::abs(lp)))
    return VClass::Boundary;
  if (lp < lt.lambda2) return VClass::V_inverse;
  return VClass::Neither;
}

TauResult tau_iteration(const Suspension& susp, const Word& a, const Word& b,
                        int max_iter, long p_cap) {
  susp.validate();
  const auto tau = [&](const Word& w) { return Rat(1) / susp.multiplier_word(w); };

  if (v_class(susp, a) != VClass::V)
    throw std::domain_error("tau_iteration: the first word must lie in V");

  TauResult res;
  Word A = a, B = b;

  const VClass vb = v_class(susp, B);
  if (vb == VClass::Boundary)
    throw std::domain_error("tau_iteration: boundary verdict for b");
  if (vb == VClass::Neither) {
    res.a_final = A;
    res.b_final = B;
    res.terminated = true;
    res.reason = "b already outside V and V^-1";
    return res;
  }
  if (vb == VClass::V_inverse) {
    B = invert(B);
    res.steps.push_back(TauStep{0, "invert_b", A, B, tau(A), tau(B),
                                {{{1, 0}, {0, -1}}}, -1});
  }

  Rat tau_a = tau(A), tau_b = tau(B);
  if (!(tau_a < 1 && tau_b < 1))
    throw std::logic_error("tau_iteration: V membership should force tau < 1");
  if (tau_a > tau_b) {
    std::swap(A, B);
    std::swap(tau_a, tau_b);
    res.steps.push_back(
        TauStep{0, "swap", A, B, tau_a, tau_b, {{{0, 1}, {1, 0}}}, -1});
  }

  for (int iter = 0; iter < max_iter; ++iter) {
    // Least positive p with tau(a b^-p) in (tau(b), 1].
    long p = 1;
    Rat x = tau_a / tau_b;
    while (x <= tau_b) {
      if (++p > p_cap)
        throw std::domain_error("tau_iteration: p search cap exceeded");
      x /= tau_b;
    }
    if (x > 1) throw std::logic_error("tau_iteration: substitution left (tau_b, 1]");

    const Word newA = B;
    const Word newB = concat(A, power(B, -p));
    if (Rat(1) / susp.multiplier_word(newB) != x)
      throw std::logic_error("tau_iteration: tau multiplicativity violated");

    TauStep step{p, "substitute", newA, newB, tau_b, x, {{{0, 1}, {1, -p}}}, 0};
    step.det = step.pair_matrix[0][0] * step.pair_matrix[1][1] -
               step.pair_matrix[0][1] * step.pair_matrix[1][0];
    if (step.det != 1 && step.det != -1)
      throw std::logic_error("tau_iteration: substitution not invertible over Z");
    // The b-slot trace must be strictly increasing.
    if (!(x > tau_b)) throw std::logic_error("tau_iteration: tau trace not increasing");
    res.steps.push_back(step);

    A = newA;
    B = newB;
    tau_a = step.tau_a;
    tau_b = step.tau_b;

    const VClass vc = v_class(susp, B);
    if (vc == VClass::Boundary)
      throw std::domain_error("tau_iteration: boundary verdict during iteration");
    if (vc == VClass::V_inverse)
      throw std::logic_error("tau_iteration: b entered V^-1 with tau <= 1");
    if (vc == VClass::Neither) {
      res.a_final = A;
      res.b_final = B;
      res.terminated = true;
      res.reason = "b left V union V^-1";
      return res;
    }
  }

  res.a_final = A;
  res.b_final = B;
  res.terminated = false;
  res.reason = "max_iter reached";
  return res;
}

namespace {

// Eigenplane of the two smallest-modulus eigenvalues of a real 3x3 matrix.
Vec3d repelling_plane_normal(const Mat3d& m) {
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = m.at(i, j);
  Eigen::EigenSolver<Eigen::Matrix3d> solver(e);
  std::array<int, 3> order{0, 1, 2};
  const auto evals = solver.eigenvalues();
  for (int i = 0; i < 3; ++i)
    if (std::abs(evals(i).imag()) > 1e-8 * (1.0 + std::abs(evals(i).real())))
      throw std::domain_error("repelling_plane_normal: complex spectrum");
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(evals(i)) < std::abs(evals(j));
  });
  Vec3d v0, v1;
  for (int r = 0; r < 3; ++r) {
    v0[static_cast<size_t>(r)] = solver.eigenvectors()(r, order[0]).real();
    v1[static_cast<size_t>(r)] = solver.eigenvectors()(r, order[1]).real();
  }
  return sign_normalized(cross(v0, v1));
}

}  // namespace

BalanceResult balance_scaling(const Suspension& susp, const Word& a,
                              const Word& b, long m, long n, int slot) {
  susp.validate();
  if (m <= 0 || n <= 0)
    throw std::invalid_argument("balance_scaling: m and n must be positive");
  const Word w = concat(power(a, m), power(b, n));

  if (slot < 0) {
    if (a.size() == 1 && a[0] > 0) {
      slot = a[0] - 1;
    } else {
      const auto ab = abelianize(w, susp.rank);
      for (size_t i = 0; i < ab.size() && slot < 0; ++i)
        if (ab[i] != 0) slot = static_cast<int>(i);
    }
  }
  if (slot < 0 || slot >= susp.rank)
    throw std::invalid_argument("balance_scaling: no usable generator slot");

  const long p = abelianize(w, susp.rank)[static_cast<size_t>(slot)];
  if (p == 0)
    throw std::domain_error(
        "balance_scaling: degenerate, the scaled slot has zero abelianization "
        "coordinate in a^m b^n");

  const LambdaTriple lt = lambda_triple(susp, w);
  const double ratio0 = lt.lambda1 / rat_d(lt.lambda_perp);
  BalanceResult out;
  out.eps_star = (2.0 / (3.0 * static_cast<double>(p))) * std::log(ratio0);
  out.scaled = scale_generator(susp, slot, out.eps_star);
  out.log_ratio_residual = std::abs(std::log(
      out.scaled.lambda1_recomputed(w) / out.scaled.lambda_perp_recomputed(w)));
  out.lambda1 = out.scaled.lambda1_recomputed(w);
  if (std::abs(std::log(out.lambda1)) < 1e-12)
    throw std::domain_error("balance_scaling: degenerate, lambda1 = 1 at balance");

  // Eigenline of lambda2 inside the invariant plane, embedded in R^3.
  {
    Mat2d acc = Mat2d::id();
    for (int32_t x : w) {
      const size_t i = static_cast<size_t>((x > 0 ? x : -x) - 1);
      const double t = rat_d(susp.multipliers[i]) *
                       (static_cast<int>(i) == slot ? std::exp(out.eps_star) : 1.0);
      const double f = 1.0 / std::sqrt(t);
      Mat2d block;
      for (int j = 0; j < 4; ++j)
        block.a[static_cast<size_t>(j)] =
            f * susp.plane_parts[i].a[static_cast<size_t>(j)].get_d();
      acc = mul2d(acc, x > 0 ? block : inv2d(block));
    }
    const double tr = acc.a[0] + acc.a[3];
    const double dt = acc.a[0] * acc.a[3] - acc.a[1] * acc.a[2];
    const double disc = tr * tr - 4.0 * dt;
    if (disc <= 0)
      throw std::domain_error("balance_scaling: plane part has no real splitting");
    const double l_small =
        (tr >= 0 ? tr - std::sqrt(disc) : tr + std::sqrt(disc)) / 2.0;
    // Kernel of (acc - l_small I).
    const double a11 = acc.a[0] - l_small, a12 = acc.a[1];
    const double a21 = acc.a[2], a22 = acc.a[3] - l_small;
    Vec3d dir;
    if (std::abs(a11) + std::abs(a12) > std::abs(a21) + std::abs(a22))
      dir = {-a12, a11, 0.0};
    else
      dir = {-a22, a21, 0.0};
    out.L0 = sign_normalized(dir);
  }

  const Vec3d ecs_normal = repelling_plane_normal(out.scaled.evaluate(a));
  out.containment_residual = line_plane_angle_sin(out.L0, ecs_normal);
  return out;
}

BalancedWordResult find_balanced_word(const Suspension& susp, const Word& a,
                                      const Word& b, double C, long m_max,
                                      long n_max) {
  susp.validate();
  if (C <= 1.0) throw std::invalid_argument("find_balanced_word: C must exceed 1");

  BalancedWordResult res;
  const auto ratio_of = [&](long m, long n) {
    const Word w = concat(power(a, m), power(b, n));
    const LambdaTriple lt = lambda_triple(susp, w);
    return lt.lambda1 / rat_d(lt.lambda_perp);
  };

  const auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << "find_balanced_word: " << why << "; trajectory:";
    for (const auto& t : res.trajectory)
      os << " (" << t[0] << "," << t[1] << ")=" << t[2];
    throw std::domain_error(os.str());
  };

  const VClass va = v_class(susp, a);
  const VClass vb = v_class(susp, b);
  if (va != VClass::V || vb != VClass::Neither) {
    for (long s = 1; s <= 4; ++s)
      res.trajectory.push_back(
          {static_cast<double>(s), static_cast<double>(s), ratio_of(s, s)});
    fail("preconditions violated (need a in V, b outside V and V^-1)");
  }

  for (long s = 2; s <= m_max + n_max; ++s) {
    for (long m = std::max(1L, s - n_max); m <= std::min(m_max, s - 1); ++m) {
      const long n = s - m;
      const double r = ratio_of(m, n);
      res.trajectory.push_back(
          {static_cast<double>(m), static_cast<double>(n), r});
      if (r >= 1.0 / C && r <= C) {
        res.m = m;
        res.n = n;
        res.ratio = r;
        return res;
      }
    }
  }
  fail("no (m, n) within bounds reached [1/C, C]");
  return res;  // unreachable
}

}  // namespace anosov
