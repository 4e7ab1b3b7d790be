#include "anosovforge/perturb.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anosov {

namespace {

Mat3d columns(const Vec3d& c0, const Vec3d& c1, const Vec3d& c2) {
  Mat3d m;
  for (int r = 0; r < 3; ++r) {
    m.at(r, 0) = c0[static_cast<size_t>(r)];
    m.at(r, 1) = c1[static_cast<size_t>(r)];
    m.at(r, 2) = c2[static_cast<size_t>(r)];
  }
  return m;
}

bool loxodromic_float(const Mat3d& m) {
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = m.at(i, j);
  Eigen::EigenSolver<Eigen::Matrix3d> solver(e, false);
  std::array<double, 3> mods;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(solver.eigenvalues()(i).imag()) >
        1e-9 * (1.0 + std::abs(solver.eigenvalues()(i).real())))
      return false;
    mods[static_cast<size_t>(i)] = std::abs(solver.eigenvalues()(i));
  }
  std::sort(mods.begin(), mods.end());
  return mods[1] > mods[0] * (1 + 1e-9) && mods[2] > mods[1] * (1 + 1e-9);
}

Mat3d sub(const Mat3d& x, const Mat3d& y) {
  Mat3d r;
  for (size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

}  // namespace

Word IncidenceInstance::omega_word() const {
  return concat(power(Word{static_cast<int32_t>(a_index + 1)}, m),
                power(Word{static_cast<int32_t>(b_index + 1)}, n));
}

IncidenceInstance make_incidence_testbed() {
  // rho(a) diagonal, rho(omega) scalar (mu = 2) on P0 = span((1,-1,0),(0,1,1))
  // with complementary eigenline L0 = (1,1,0) inside E^cu(rho(a)). The p = 1
  // incidence functional then crosses zero at tan t0 = -3/31.
  RatMat3 a;
  a.at(0, 0) = 4;
  a.at(1, 1) = 2;
  a.at(2, 2) = rat(1, 8);

  RatMat3 basis;  // columns: P0 basis, then L0
  basis.at(0, 0) = 1;
  basis.at(1, 0) = -1;
  basis.at(1, 1) = 1;
  basis.at(2, 1) = 1;
  basis.at(0, 2) = 1;
  basis.at(1, 2) = 1;
  RatMat3 diag;
  diag.at(0, 0) = 2;
  diag.at(1, 1) = 2;
  diag.at(2, 2) = rat(1, 4);
  const RatMat3 w = mul3(mul3(basis, diag), inv3(basis));

  IncidenceInstance inst{
      Representation(GeneratorSet::standard(2), {a, mul3(inv3(a), w)}),
      0,
      1,
      1,
      1,
      1,
      Rat(2),
      RatVec3{Rat(1), Rat(1), Rat(0)},
      {RatVec3{Rat(1), Rat(-1), Rat(0)}, RatVec3{Rat(0), Rat(1), Rat(1)}}};
  return inst;
}

GenericityResult genericity_adjust(const IncidenceInstance& inst, double eta) {
  if (eta <= 0) throw std::invalid_argument("genericity_adjust: eta must be positive");
  const RatMat3& a_exact = inst.rep.image(inst.a_index);
  const EigenStructure es = eigen_structure(a_exact);
  const Vec3d L0 = sign_normalized(to_double(inst.L0));
  const Vec3d n0 = sign_normalized(
      to_double(cross_rat(inst.P0[0], inst.P0[1])));

  GenericityResult out;
  out.rep = to_float(inst.rep);
  out.margin_Ec_L0 = chordal(es.Ec.v, L0);
  out.margin_Es_P0 = line_plane_angle_sin(es.Es.v, n0);

  Vec3d ec = es.Ec.v, e_s = es.Es.v;
  bool moved = false;
  if (out.margin_Ec_L0 < eta / 10) {
    // Keep E^cu = span(E^u, L0): move E^c inside that plane, away from L0.
    const Vec3d in_plane = normalized(
        sub(es.Eu.v, scale(L0, dot(es.Eu.v, L0))));
    ec = sign_normalized(add(L0, scale(in_plane, 2 * eta)));
    moved = true;
  }
  if (out.margin_Es_P0 < eta / 10) {
    e_s = sign_normalized(add(e_s, scale(n0, 2 * eta)));
    moved = true;
  }

  if (moved) {
    const Mat3d v = columns(es.Eu.v, ec, e_s);
    Mat3d d{};
    d.at(0, 0) = es.eigenvalues[0];
    d.at(1, 1) = es.eigenvalues[1];
    d.at(2, 2) = es.eigenvalues[2];
    const Mat3d a_new = mul(mul(v, d), inverse(v));

    const Mat3d omega = to_float(inst.rep).evaluate(inst.omega_word());
    const Mat3d root_arg = mul(pow(a_new, -inst.m), omega);
    const Mat3d b_new =
        inst.n == 1 ? root_arg : nth_root_loxodromic(root_arg, inst.n);

    out.rep.images[static_cast<size_t>(inst.a_index)] = a_new;
    out.rep.images[static_cast<size_t>(inst.b_index)] = b_new;
    out.adjusted = true;

    const Mat3d drift = sub(out.rep.evaluate(inst.omega_word()), omega);
    out.omega_drift = frobenius(drift) / std::max(1.0, frobenius(omega));
    if (out.omega_drift > 1e-9)
      throw std::domain_error("genericity_adjust: omega compensation drifted");

    out.margin_Ec_L0 = chordal(ec, L0);
    out.margin_Es_P0 = line_plane_angle_sin(e_s, n0);
    if (out.margin_Ec_L0 < eta / 10 || out.margin_Es_P0 < eta / 10)
      throw std::domain_error("genericity_adjust: margins unobtainable");
  }
  return out;
}

DeformationPath::DeformationPath(const IncidenceInstance& inst,
                                 const FloatRep& base, double amplitude)
    : inst_(&inst), amplitude_(amplitude), m_(inst.m), n_(inst.n) {
  if (amplitude <= 0 || amplitude >= 1.2)
    throw std::invalid_argument("DeformationPath: amplitude out of range");

  const Mat3d a0 = base.images.at(static_cast<size_t>(inst.a_index));
  rho_omega_ = base.evaluate(inst.omega_word());
  L0_ = sign_normalized(to_double(inst.L0));
  P0_normal_ = sign_normalized(
      to_double(cross_rat(inst.P0[0], inst.P0[1])));

  // Eigenframe of rho(a) through the exact layer when possible.
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = a0.at(i, j);
  Eigen::EigenSolver<Eigen::Matrix3d> solver(e);
  std::array<int, 3> order{0, 1, 2};
  for (int i = 0; i < 3; ++i)
    if (std::abs(solver.eigenvalues()(i).imag()) >
        1e-9 * (1.0 + std::abs(solver.eigenvalues()(i).real())))
      throw std::domain_error("DeformationPath: rho(a) must be loxodromic");
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(solver.eigenvalues()(i)) > std::abs(solver.eigenvalues()(j));
  });
  const auto col = [&](int i) {
    Vec3d v;
    for (int r = 0; r < 3; ++r) v[static_cast<size_t>(r)] =
        solver.eigenvectors()(r, order[static_cast<size_t>(i)]).real();
    return normalized(v);
  };
  u0_ = col(0);
  ec_ = col(1);
  es_ = col(2);
  for (int i = 0; i < 3; ++i)
    eigs_[static_cast<size_t>(i)] =
        solver.eigenvalues()(order[static_cast<size_t>(i)]).real();

  // The eigenline moves inside span(E^u, E^s): transverse to E^cu at t = 0.
  w_ = es_;
  if (!(theta_cu(t_minus()) * theta_cu(t_plus()) < 0))
    throw std::domain_error("DeformationPath: no transverse crossing of E^cu");

  // Loxodromy of both path members, with domain shrinking when violated.
  for (int attempt = 0; attempt < 20; ++attempt) {
    bool ok = true;
    for (int s = 0; s <= 16 && ok; ++s) {
      const double t =
          t_minus() + (t_plus() - t_minus()) * static_cast<double>(s) / 16.0;
      ok = loxodromic_float(a_at(t));
      if (ok && n_ != 1) ok = loxodromic_float(mul(pow(a_at(t), -m_), rho_omega_));
      if (ok) ok = loxodromic_float(b_at(t));
    }
    if (ok) break;
    amplitude_ /= 2;
    if (attempt == 19)
      throw std::domain_error("DeformationPath: loxodromy lost near t = 0");
  }

  double drift = 0;
  for (int s = 0; s <= 8; ++s) {
    const double t =
        t_minus() + (t_plus() - t_minus()) * static_cast<double>(s) / 8.0;
    drift = std::max(drift, frobenius(sub(omega_at(t), rho_omega_)) /
                                std::max(1.0, frobenius(rho_omega_)));
  }
  omega_drift_ = drift;
  if (drift > 1e-9)
    throw std::domain_error("DeformationPath: omega drift above tolerance");
}

Mat3d DeformationPath::a_at(double t) const {
  const Vec3d ut = add(scale(u0_, std::cos(t)), scale(w_, std::sin(t)));
  const Mat3d v = columns(ut, ec_, es_);
  Mat3d d{};
  d.at(0, 0) = eigs_[0];
  d.at(1, 1) = eigs_[1];
  d.at(2, 2) = eigs_[2];
  return mul(mul(v, d), inverse(v));
}

Mat3d DeformationPath::b_at(double t) const {
  const Mat3d arg = mul(pow(a_at(t), -m_), rho_omega_);
  return n_ == 1 ? arg : nth_root_loxodromic(arg, n_);
}

Mat3d DeformationPath::omega_at(double t) const {
  return mul(pow(a_at(t), m_), pow(b_at(t), n_));
}

double DeformationPath::theta_cu(double t) const {
  const Vec3d ut = add(scale(u0_, std::cos(t)), scale(w_, std::sin(t)));
  const Vec3d n = cross(ut, ec_);  // continuous in t, no sign normalization
  return dot(n, L0_) / norm(n);
}

double DeformationPath::theta_p(double t, long p) const {
  const Vec3d n = mul(transpose(inverse(pow(a_at(t), p))), P0_normal_);
  return dot(n, L0_) / norm(n);
}

DeformationPath compensated_path(const IncidenceInstance& inst,
                                 const FloatRep& base, double amplitude) {
  return DeformationPath(inst, base, amplitude);
}

IncidenceResult solve_incidence(const DeformationPath& path, long p_max,
                                double tol) {
  if (tol <= 0) throw std::invalid_argument("solve_incidence: tol must be positive");
  IncidenceResult res;
  for (long p = 1; p <= p_max; ++p) {
    double lo = path.t_minus(), hi = path.t_plus();
    double th_lo = path.theta_p(lo, p), th_hi = path.theta_p(hi, p);
    if (th_lo == 0 || th_hi == 0 || (th_lo < 0) == (th_hi < 0)) {
      std::ostringstream os;
      os << "p=" << p << ": theta(" << lo << ")=" << th_lo << ", theta(" << hi
         << ")=" << th_hi << " (no sign change)";
      res.trace.push_back(os.str());
      continue;
    }
    int steps = 0;
    double mid = 0, th_mid = th_lo;
    while (steps < 60) {
      mid = (lo + hi) / 2;
      th_mid = path.theta_p(mid, p);
      ++steps;
      if (std::abs(th_mid) <= tol) break;
      if ((th_mid < 0) == (th_lo < 0)) {
        lo = mid;
        th_lo = th_mid;
      } else {
        hi = mid;
      }
    }
    if (std::abs(th_mid) > tol) {
      std::ostringstream os;
      os << "p=" << p << ": bisection stalled at |theta|=" << std::abs(th_mid);
      res.trace.push_back(os.str());
      continue;
    }
    res.t0 = mid;
    res.p = p;
    res.theta_residual = std::abs(th_mid);
    res.bisection_steps = steps;
    return res;
  }
  std::ostringstream os;
  os << "solve_incidence: no sign change up to p_max=" << p_max << ";";
  for (const std::string& s : res.trace) os << "\n  " << s;
  throw std::domain_error(os.str());
}

UnipotentWitness unipotent_commutator(const DeformationPath& path, double t0,
                                      long p, double accept) {
  const IncidenceInstance& inst = path.instance();
  const Mat3d w_q = pow(path.omega_matrix(), inst.q);
  const Mat3d a_p = pow(path.a_at(t0), p);
  const Mat3d conj = mul(mul(a_p, w_q), inverse(a_p));
  const Mat3d m = mul(mul(w_q, conj), mul(inverse(w_q), inverse(conj)));

  UnipotentWitness wit;
  wit.t0 = t0;
  wit.p = p;
  wit.q = inst.q;
  wit.matrix = m;
  wit.residual = unipotent_residual(m);
  {
    // Coefficient distance of the double-precision charpoly to (x-1)^3.
    const double tr = m.at(0, 0) + m.at(1, 1) + m.at(2, 2);
    const double minors =
        (m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)) +
        (m.at(0, 0) * m.at(2, 2) - m.at(0, 2) * m.at(2, 0)) +
        (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1));
    wit.charpoly_distance =
        std::abs(tr - 3) + std::abs(minors - 3) + std::abs(det(m) - 1);
  }
  const Word a{static_cast<int32_t>(inst.a_index + 1)};
  const Word omega_q = power(inst.omega_word(), inst.q);
  wit.word = commutator(omega_q,
                        concat(concat(power(a, p), omega_q), power(a, -p)));
  wit.snapshot.gens = inst.rep.generators();
  wit.snapshot.images = to_float(inst.rep).images;
  wit.snapshot.images[static_cast<size_t>(inst.a_index)] = path.a_at(t0);
  wit.snapshot.images[static_cast<size_t>(inst.b_index)] = path.b_at(t0);

  if (wit.residual > accept) {
    std::ostringstream os;
    os << "unipotent_commutator: residual " << wit.residual
       << " above the acceptance threshold " << accept << " (charpoly distance "
       << wit.charpoly_distance << ")";
    throw std::domain_error(os.str());
  }
  return wit;
}

RhoKWitness rho_k_destabilize(const RhoKInput& in, long q, int n_max,
                              double approach_tol) {
  const int k = in.rep.rank();
  if (k <= 2)
    throw std::invalid_argument("rho_k_destabilize: the construction needs k > 2");
  if (q <= 0) throw std::invalid_argument("rho_k_destabilize: q must be positive");

  // The c1-image must preserve the coordinate plane and axis.
  const RatMat3& g_img = in.rep.image(0);
  if (sgn(g_img.at(2, 0)) != 0 || sgn(g_img.at(2, 1)) != 0 ||
      sgn(g_img.at(0, 2)) != 0 || sgn(g_img.at(1, 2)) != 0)
    throw std::invalid_argument(
        "rho_k_destabilize: c1-image does not preserve (L0, P0)");

  // Step 1: same-modulus rotation twist of the c1 plane block. The factor
  // has rational entries while its angle is an irrational multiple of pi,
  // so no power of the new block is scalar and the induced circle action
  // is minimal.
  RatMat2 twist;
  twist.at(0, 0) = rat(3, 5);
  twist.at(0, 1) = rat(-4, 5);
  twist.at(1, 0) = rat(4, 5);
  twist.at(1, 1) = rat(3, 5);
  RatMat3 g_prime = g_img;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Rat v(0);
      for (int l = 0; l < 2; ++l) v += g_img.at(i, l) * twist.at(l, j);
      g_prime.at(i, j) = v;
    }

  std::vector<RatMat3> images = in.rep.images();
  images[0] = g_prime;

  // Scalar plane of rho(c3^q): P_hat = F . P0 with the scalar read off
  // exactly; rejects q when the restriction is not scalar.
  const RatMat3 c3_pow = pow3(in.rep.image(2), q);
  const RatVec3 p_hat_1 = apply3(in.F, RatVec3{Rat(1), Rat(0), Rat(0)});
  const RatVec3 p_hat_2 = apply3(in.F, RatVec3{Rat(0), Rat(1), Rat(0)});
  const RatVec3 i1 = apply3(c3_pow, p_hat_1);
  const RatVec3 i2 = apply3(c3_pow, p_hat_2);
  Rat mu_hat;
  bool have_mu = false;
  for (int i = 0; i < 3 && !have_mu; ++i)
    if (sgn(p_hat_1[static_cast<size_t>(i)]) != 0) {
      mu_hat = i1[static_cast<size_t>(i)] / p_hat_1[static_cast<size_t>(i)];
      have_mu = true;
    }
  bool scalar = have_mu;
  for (int i = 0; i < 3 && scalar; ++i)
    scalar = i1[static_cast<size_t>(i)] == mu_hat * p_hat_1[static_cast<size_t>(i)] &&
             i2[static_cast<size_t>(i)] == mu_hat * p_hat_2[static_cast<size_t>(i)];
  if (!scalar) {
    // Name the least valid exponent to help callers.
    long valid = 0;
    for (long qq = 1; qq <= 32 && valid == 0; ++qq) {
      const RatMat3 c = pow3(in.rep.image(2), qq);
      const RatVec3 a1 = apply3(c, p_hat_1), a2 = apply3(c, p_hat_2);
      Rat mu;
      bool got = false;
      for (int i = 0; i < 3 && !got; ++i)
        if (sgn(p_hat_1[static_cast<size_t>(i)]) != 0) {
          mu = a1[static_cast<size_t>(i)] / p_hat_1[static_cast<size_t>(i)];
          got = true;
        }
      bool sc = got;
      for (int i = 0; i < 3 && sc; ++i)
        sc = a1[static_cast<size_t>(i)] == mu * p_hat_1[static_cast<size_t>(i)] &&
             a2[static_cast<size_t>(i)] == mu * p_hat_2[static_cast<size_t>(i)];
      if (sc) valid = qq;
    }
    std::ostringstream os;
    os << "rho_k_destabilize: rho(c3^" << q << ") is not scalar on its plane";
    if (valid) os << " (least valid exponent <= 32 is " << valid << ")";
    throw std::invalid_argument(os.str());
  }

  const RatVec3 n_hat = cross_rat(p_hat_1, p_hat_2);
  const Vec3d n_hat_d = sign_normalized(to_double(n_hat));

  // Step 2: search <c1, c2> for the plane orbit point nearest to P_hat.
  // The orbit is dense (minimality of the twisted pair), so the approach
  // improves with depth; the witness below is exact at any approach.
  struct Best {
    double dist = std::numeric_limits<double>::infinity();
    Word gamma;
    RatVec3 normal{};
  } best;
  std::function<void(const Word&, const RatMat3&, int)> walk =
      [&](const Word& w, const RatMat3& m, int depth) {
        const RatVec3 nq = cross_rat(apply3(m, RatVec3{Rat(1), Rat(0), Rat(0)}),
                                     apply3(m, RatVec3{Rat(0), Rat(1), Rat(0)}));
        const double d = chordal(sign_normalized(to_double(nq)), n_hat_d);
        if (d < best.dist) {
          best.dist = d;
          best.gamma = w;
          best.normal = nq;
        }
        if (depth == n_max) return;
        for (int32_t x : {int32_t(1), int32_t(-1), int32_t(2), int32_t(-2)}) {
          if (!w.empty() && x == -w.back()) continue;
          Word w2 = w;
          w2.push_back(x);
          const RatMat3& img = images[static_cast<size_t>((x > 0 ? x : -x) - 1)];
          walk(w2, mul3(m, x > 0 ? img : inv3(img)), depth + 1);
        }
      };
  walk(Word{}, RatMat3::identity(), 0);
  (void)approach_tol;  // the correction below is exact at any approach

  // gamma . P0 with exact basis.
  const RatMat3 m_gamma = [&] {
    RatMat3 acc = RatMat3::identity();
    for (int32_t x : best.gamma) {
      const RatMat3& img = images[static_cast<size_t>((x > 0 ? x : -x) - 1)];
      acc = mul3(acc, x > 0 ? img : inv3(img));
    }
    return acc;
  }();
  const RatVec3 q1_basis = apply3(m_gamma, RatVec3{Rat(1), Rat(0), Rat(0)});
  const RatVec3 q2_basis = apply3(m_gamma, RatVec3{Rat(0), Rat(1), Rat(0)});
  const RatVec3 n_q = cross_rat(q1_basis, q2_basis);

  // Complement line for the projection correction.
  const std::array<RatVec3, 4> candidates{
      RatVec3{Rat(0), Rat(0), Rat(1)}, RatVec3{Rat(1), Rat(0), Rat(1)},
      RatVec3{Rat(0), Rat(1), Rat(1)}, RatVec3{Rat(1), Rat(1), Rat(1)}};
  RatVec3 ell{};
  bool have_ell = false;
  for (const RatVec3& c : candidates) {
    if (sgn(dot_rat(n_hat, c)) != 0 && sgn(dot_rat(n_q, c)) != 0) {
      ell = c;
      have_ell = true;
      break;
    }
  }
  if (!have_ell)
    throw std::logic_error("rho_k_destabilize: no transverse complement line");

  // T maps P_hat onto gamma . P0 along ell and fixes ell.
  const auto project = [&](const RatVec3& v) {
    const Rat f = dot_rat(n_q, v) / dot_rat(n_q, ell);
    return RatVec3{v[0] - f * ell[0], v[1] - f * ell[1], v[2] - f * ell[2]};
  };
  const RatVec3 t1 = project(p_hat_1), t2 = project(p_hat_2);
  RatMat3 dst, src;
  for (int r = 0; r < 3; ++r) {
    dst.at(r, 0) = t1[static_cast<size_t>(r)];
    dst.at(r, 1) = t2[static_cast<size_t>(r)];
    dst.at(r, 2) = ell[static_cast<size_t>(r)];
    src.at(r, 0) = p_hat_1[static_cast<size_t>(r)];
    src.at(r, 1) = p_hat_2[static_cast<size_t>(r)];
    src.at(r, 2) = ell[static_cast<size_t>(r)];
  }
  const RatMat3 correction = mul3(dst, inv3(src));
  images[2] = mul3(mul3(correction, in.rep.image(2)), inv3(correction));

  Representation perturbed(in.rep.generators(), images);

  RhoKWitness wit;
  wit.q = q;
  wit.gamma = best.gamma;
  wit.approach_distance = best.dist;
  {
    Mat3d t_d = to_double(correction);
    t_d.at(0, 0) -= 1;
    t_d.at(1, 1) -= 1;
    t_d.at(2, 2) -= 1;
    wit.correction_size = frobenius(t_d);
  }
  const Word c3{3}, c1{1};
  wit.word = commutator(power(c3, q),
                        concat(concat(best.gamma, c1), invert(best.gamma)));
  wit.matrix = perturbed.evaluate(wit.word);
  wit.residual = unipotent_residual(to_double(wit.matrix));
  wit.perturbed_images = perturbed.images();

  if (!is_unipotent(wit.matrix))
    throw std::logic_error("rho_k_destabilize: commutator is not unipotent");
  if (wit.matrix.is_identity())
    throw std::logic_error("rho_k_destabilize: commutator degenerated to 1");
  return wit;
}

}  // namespace anosov
