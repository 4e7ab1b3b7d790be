#include "anosovforge/pingpong.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace anosov {

double chordal_distance(const Vec3d& a, const Vec3d& b) { return chordal(a, b); }

double projective_lipschitz_bound(const Mat3d& g) {
  const auto s = singular_values(g);
  if (s[2] <= 0) throw std::domain_error("projective_lipschitz_bound: singular input");
  return s[0] * s[1] / (s[2] * s[2]);
}

namespace {

// Tangent-grid net of a chordal ball with Euclidean covering radius at
// most `step` among unit representatives: the gnomonic chart
// (a, b) -> normalize(x + a u + b v) is 1-Lipschitz from the parameter
// plane to the sphere, a square grid of pitch h covers the disk of radius
// R within 1.45 h after projecting outer nodes back to the rim, and chord
// length is bounded by arc length. h = step / 1.5 keeps the bound.
std::vector<Vec3d> ball_net(const Ball& ball, double step) {
  const Vec3d x = normalized(ball.center);
  Vec3d e{1, 0, 0};
  if (std::abs(x[0]) > 0.8) e = Vec3d{0, 1, 0};
  const Vec3d u = normalized(cross(x, e));
  const Vec3d v = cross(x, u);

  const double r = std::min(ball.radius, 0.95);
  const double R = r / std::sqrt(1.0 - r * r);
  const double h = step / 1.5;
  const long n = static_cast<long>(std::ceil((R + h) / h));

  std::vector<Vec3d> net;
  for (long i = -n; i <= n; ++i) {
    for (long j = -n; j <= n; ++j) {
      double a = static_cast<double>(i) * h;
      double b = static_cast<double>(j) * h;
      const double rho = std::hypot(a, b);
      if (rho > R + h) continue;
      if (rho > R) {  // pull rim-adjacent nodes back onto the disk
        a *= R / rho;
        b *= R / rho;
      }
      net.push_back(normalized(add(x, add(scale(u, a), scale(v, b)))));
    }
  }
  return net;
}

struct BlockConformal {
  bool ok = false;
  Rat alpha;  // squared conformal factor of the plane block
  Rat beta;   // squared axis factor
};

BlockConformal block_conformal(const RatMat3& m) {
  BlockConformal out;
  if (sgn(m.at(0, 2)) != 0 || sgn(m.at(1, 2)) != 0 || sgn(m.at(2, 0)) != 0 ||
      sgn(m.at(2, 1)) != 0)
    return out;
  const Rat c00 = m.at(0, 0) * m.at(0, 0) + m.at(1, 0) * m.at(1, 0);
  const Rat c11 = m.at(0, 1) * m.at(0, 1) + m.at(1, 1) * m.at(1, 1);
  const Rat c01 = m.at(0, 0) * m.at(0, 1) + m.at(1, 0) * m.at(1, 1);
  if (sgn(c01) != 0 || c00 != c11) return out;
  out.ok = true;
  out.alpha = c00;
  out.beta = m.at(2, 2) * m.at(2, 2);
  return out;
}

// Exact containment rule for conformal block maps. For M = [[B,0],[0,d]]
// with B^T B = alpha I, writing v = (u, z) and a unit center c:
//   - plane-centered c = (u0, 0):  delta(Mv, Mc)^2 - delta(v, c)^2 has the
//     sign of (beta - alpha) (u ^ u0)^2 ... z^2 (alpha - beta)(|u|^2 - (u^u0)^2)
//     and Cauchy-Schwarz gives delta(Mv, Mc) <= delta(v, c) when beta <= alpha;
//   - axis-centered c = e3: symmetric computation, contraction when
//     alpha <= beta.
// So M maps B(c, r) into B(Mc, r) even where the boundary touches, and
// M c is computed exactly. Returns the target margin when applicable.
std::optional<double> exact_containment_margin(const RatMat3& m_exact,
                                               const BlockConformal& bc,
                                               const Ball& src,
                                               const Cone& target) {
  if (!bc.ok || !src.exact_center) return std::nullopt;
  const RatVec3& c = *src.exact_center;
  const bool plane_centered = sgn(c[2]) == 0;
  const bool axis_centered = sgn(c[0]) == 0 && sgn(c[1]) == 0;
  if (plane_centered && !(bc.beta <= bc.alpha)) return std::nullopt;
  if (axis_centered && !(bc.alpha <= bc.beta)) return std::nullopt;
  if (!plane_centered && !axis_centered) return std::nullopt;

  const RatVec3 image = apply3(m_exact, c);
  for (const Ball& t : target.balls) {
    if (!t.exact_center) continue;
    if (proportional(image, *t.exact_center) && t.radius >= src.radius)
      return t.radius - src.radius;
  }
  return std::nullopt;
}

double best_ball_margin(const Cone& cone, const Vec3d& point) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Ball& b : cone.balls)
    best = std::max(best, b.radius - chordal(point, b.center));
  return best;
}

}  // namespace

CertifyOutcome certify_condition_star(const std::vector<FamilyElement>& family,
                                      const std::vector<Cone>& cones, double c,
                                      const Vec3d& L0, double net_step) {
  if (family.size() != cones.size())
    throw std::invalid_argument("certify: one cone per family element");
  if (c <= 1.0) throw std::invalid_argument("certify: expansion constant must exceed 1");
  if (net_step <= 0) throw std::invalid_argument("certify: net_step must be positive");
  for (size_t i = 0; i < family.size(); ++i) {
    if (family[i].inverse >= family.size() ||
        family[family[i].inverse].inverse != i)
      throw std::invalid_argument("certify: family is not inverse-closed");
    for (const Ball& b : cones[i].balls)
      if (!(b.radius > 0 && b.radius < 0.95))
        throw std::invalid_argument("certify: ball radii must lie in (0, 0.95)");
  }

  CertifyOutcome out;
  Certificate cert;
  cert.family = family;
  cert.cones = cones;
  cert.c = c;
  cert.L0 = L0;
  cert.net_step = net_step;

  const size_t n = family.size();
  std::vector<Mat3d> mats;
  std::vector<std::array<double, 3>> svs;
  std::vector<BlockConformal> conformal;
  for (size_t i = 0; i < n; ++i) {
    mats.push_back(to_double(family[i].mat));
    svs.push_back(singular_values(mats.back()));
    conformal.push_back(block_conformal(family[i].mat));
    cert.lipschitz_global.push_back(projective_lipschitz_bound(mats.back()));
  }
  cert.lipschitz_effective.assign(n, 0.0);

  const auto fail = [&](int cond, const std::string& detail, const Vec3d& witness) {
    out.ok = false;
    out.failure = ConditionFailure{cond, detail, witness};
    return out;
  };

  // (1) pairwise disjoint cones.
  cert.margin_disjoint = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (const Ball& bi : cones[i].balls)
        for (const Ball& bj : cones[j].balls) {
          const double margin =
              chordal(bi.center, bj.center) - bi.radius - bj.radius;
          cert.margin_disjoint = std::min(cert.margin_disjoint, margin);
          if (margin <= 0)
            return fail(1,
                        "cones of " + family[i].label + " and " +
                            family[j].label + " intersect",
                        bi.center);
        }

  // (2) L0 outside every cone.
  cert.margin_L0_outside = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i)
    for (const Ball& b : cones[i].balls) {
      const double margin = chordal(L0, b.center) - b.radius;
      cert.margin_L0_outside = std::min(cert.margin_L0_outside, margin);
      if (margin <= 0)
        return fail(2, "L0 lies inside the cone of " + family[i].label, L0);
    }

  // (3) each element maps L0 into its own cone.
  cert.margin_maps_L0 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const Vec3d image = normalized(mul(mats[i], L0));
    const double margin = best_ball_margin(cones[i], image);
    cert.margin_maps_L0 = std::min(cert.margin_maps_L0, margin);
    if (margin < 0)
      return fail(3, family[i].label + " does not map L0 into its cone", image);
  }

  // (4) and (5) on nets, with the per-ball refined Lipschitz bound.
  cert.margin_containment = std::numeric_limits<double>::infinity();
  cert.margin_expansion = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const double s1 = svs[i][0], s1s2 = svs[i][0] * svs[i][1];
    for (size_t j = 0; j < n; ++j) {
      if (j == family[i].inverse) continue;
      for (const Ball& src : cones[j].balls) {
        const auto net = ball_net(src, net_step);

        // beta lower-bounds |M v| over the whole ball.
        double beta = std::numeric_limits<double>::infinity();
        Vec3d beta_arg{};
        for (const Vec3d& v : net) {
          const double len = norm(mul(mats[i], v));
          if (len < beta) {
            beta = len;
            beta_arg = v;
          }
        }
        beta -= s1 * net_step;

        // (5): ||g|_L|| >= c everywhere on the source ball.
        const double margin5 = beta - c;
        cert.margin_expansion = std::min(cert.margin_expansion, margin5);
        if (margin5 < 0)
          return fail(5,
                      family[i].label + " expands by less than c on the cone of " +
                          family[j].label,
                      beta_arg);

        // (4): image of the source ball inside the target cone.
        const auto exact_margin =
            exact_containment_margin(family[i].mat, conformal[i], src, cones[i]);
        if (exact_margin) {
          cert.margin_containment = std::min(cert.margin_containment, *exact_margin);
          continue;
        }
        const double k_ball = std::min(cert.lipschitz_global[i], s1s2 / (beta * beta));
        cert.lipschitz_effective[i] = std::max(cert.lipschitz_effective[i], k_ball);
        for (const Vec3d& v : net) {
          const Vec3d image = normalized(mul(mats[i], v));
          const double margin =
              best_ball_margin(cones[i], image) - k_ball * net_step;
          cert.margin_containment = std::min(cert.margin_containment, margin);
          if (margin < 0)
            return fail(4,
                        family[i].label + " does not map the cone of " +
                            family[j].label + " into its own cone",
                        v);
        }
      }
    }
  }

  out.ok = true;
  out.cert = std::move(cert);
  return out;
}

CertifyOutcome certify_certificate(const Certificate& cert) {
  return certify_condition_star(cert.family, cert.cones, cert.c, cert.L0,
                                cert.net_step);
}

FabricaqiReport check_fabricaqi(const RatMat3& f, const RatMat3& g, long m_max) {
  FabricaqiReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();

  const auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.failed_hypothesis = why;
    return rep;
  };

  // Invariant decomposition of g: a rational eigenline L0 plus the kernel
  // of the complementary quadratic factor of the characteristic polynomial.
  const Cubic gp = charpoly3(g);
  bool structure_found = false;
  for (const Rat& nu : rational_eigenvalues(g)) {
    RatMat3 shifted = g;
    for (int d = 0; d < 3; ++d) shifted.at(d, d) -= nu;
    const auto line = rational_kernel(shifted);
    if (line.size() != 1) continue;

    // charpoly = (x - nu)(x^2 + b x + c)
    const Rat b = gp.c2 + nu;
    const Rat c = gp.c1 + nu * b;
    if (-nu * c != gp.c0) continue;
    RatMat3 quad = mul3(g, g);
    for (size_t k = 0; k < 9; ++k) quad.a[k] += b * g.a[k];
    for (int d = 0; d < 3; ++d) quad.at(d, d) += c;
    const auto plane = rational_kernel(quad);
    if (plane.size() != 2) continue;

    // Least m with g^m scalar mu > 1 on the plane and mu^-2 on the line.
    RatMat3 power = RatMat3::identity();
    for (long m = 1; m <= m_max; ++m) {
      power = mul3(power, g);
      const RatVec3 i0 = apply3(power, plane[0]);
      const RatVec3 i1 = apply3(power, plane[1]);
      Rat mu;
      bool scalar = false;
      for (int k = 0; k < 3 && !scalar; ++k)
        if (sgn(plane[0][static_cast<size_t>(k)]) != 0) {
          mu = i0[static_cast<size_t>(k)] / plane[0][static_cast<size_t>(k)];
          scalar = true;
        }
      if (!scalar) continue;
      bool is_scalar = true;
      for (int k = 0; k < 3; ++k) {
        is_scalar = is_scalar &&
                    i0[static_cast<size_t>(k)] == mu * plane[0][static_cast<size_t>(k)] &&
                    i1[static_cast<size_t>(k)] == mu * plane[1][static_cast<size_t>(k)];
      }
      if (!is_scalar || !(mu > 1)) continue;

      // The complementary eigenvalue must be mu^-2 (det 1 forces it; verified).
      const RatVec3 l_img = apply3(power, line[0]);
      bool line_ok = true;
      for (int k = 0; k < 3; ++k)
        line_ok = line_ok && mu * mu * l_img[static_cast<size_t>(k)] ==
                                 line[0][static_cast<size_t>(k)];
      if (!line_ok) continue;

      rep.m = m;
      rep.mu = mu;
      rep.L0 = line[0];
      rep.P0 = {plane[0], plane[1]};
      rep.P0_normal = cross_rat(plane[0], plane[1]);
      structure_found = true;
      break;
    }
    if (structure_found) break;
  }
  if (!structure_found)
    return fail("(2) no m <= m_max with g^m scalar (mu > 1) on an invariant plane");

  // Hypothesis (1): f loxodromic with exact rational eigendata.
  if (!is_loxodromic(f)) return fail("(1) f is not loxodromic");
  const auto f_eigs = rational_eigenvalues(f);
  if (f_eigs.size() != 3)
    return fail("(1) f needs three rational eigenvalues for the exact checks");
  std::array<std::pair<Rat, RatVec3>, 3> eig_lines;
  for (size_t i = 0; i < 3; ++i) {
    RatMat3 shifted = f;
    for (int d = 0; d < 3; ++d) shifted.at(d, d) -= f_eigs[i];
    const auto line = rational_kernel(shifted);
    if (line.size() != 1) return fail("(1) eigenline of f is not one-dimensional");
    eig_lines[i] = {f_eigs[i], line[0]};
  }
  std::sort(eig_lines.begin(), eig_lines.end(),
            [](const auto& x, const auto& y) { return abs(x.first) > abs(y.first); });
  for (size_t i = 0; i < 3; ++i) {
    rep.f_eigs[i] = eig_lines[i].first;
    rep.f_lines[i] = eig_lines[i].second;
  }

  const RatVec3& eu = rep.f_lines[0];
  const RatVec3& ec = rep.f_lines[1];
  const RatVec3& es = rep.f_lines[2];
  const RatVec3 n_cu = cross_rat(eu, ec);
  const RatVec3 n_cs = cross_rat(ec, es);

  const auto track = [&](const Vec3d& a, const Vec3d& b) {
    rep.min_margin = std::min(rep.min_margin, chordal(a, b));
  };

  // Hypothesis (3): eigenlines off the plane, L0 off both f-planes.
  for (size_t i = 0; i < 3; ++i) {
    if (sgn(dot_rat(rep.P0_normal, rep.f_lines[i])) == 0)
      return fail("(3) an eigenline of f lies in P0");
    rep.min_margin = std::min(
        rep.min_margin, line_plane_angle_sin(to_double(rep.f_lines[i]),
                                             to_double(rep.P0_normal)));
  }
  if (sgn(dot_rat(n_cu, rep.L0)) == 0) return fail("(3) L0 lies in E^cu(f)");
  if (sgn(dot_rat(n_cs, rep.L0)) == 0) return fail("(3) L0 lies in E^cs(f)");
  rep.min_margin = std::min(rep.min_margin,
                            line_plane_angle_sin(to_double(rep.L0), to_double(n_cu)));
  rep.min_margin = std::min(rep.min_margin,
                            line_plane_angle_sin(to_double(rep.L0), to_double(n_cs)));

  // Hypothesis (4): the orbit X of (E^u + L0) ^ P0 and (E^s + L0) ^ P0
  // stays clear of E^cs and E^cu.
  for (const RatVec3& seed_line : {eu, es}) {
    RatVec3 x = cross_rat(cross_rat(seed_line, rep.L0), rep.P0_normal);
    if (sgn(x[0]) == 0 && sgn(x[1]) == 0 && sgn(x[2]) == 0)
      return fail("(4) degenerate intersection with P0");
    for (long k = 0; k < rep.m; ++k) {
      bool seen = false;
      for (const RatVec3& y : rep.X) seen = seen || proportional(x, y);
      if (!seen) rep.X.push_back(x);
      x = apply3(g, x);
    }
  }
  for (const RatVec3& x : rep.X) {
    if (sgn(dot_rat(n_cs, x)) == 0)
      return fail("(4) an X-line lies in E^cs(f)");
    if (sgn(dot_rat(n_cu, x)) == 0)
      return fail("(4) an X-line lies in E^cu(f)");
    rep.min_margin = std::min(rep.min_margin,
                              line_plane_angle_sin(to_double(x), to_double(n_cs)));
    rep.min_margin = std::min(rep.min_margin,
                              line_plane_angle_sin(to_double(x), to_double(n_cu)));
    track(to_double(x), to_double(eu));
    track(to_double(x), to_double(es));
  }

  rep.ok = true;
  return rep;
}

bool PreparedNbhd::contains_direction(double angle) const {
  for (const Arc& arc : arcs) {
    double d = std::fmod(std::abs(angle - arc.center_angle), 2 * M_PI);
    d = std::min(d, 2 * M_PI - d);
    if (d <= arc.half_width) return true;
  }
  return false;
}

bool PreparedNbhd::contains_line(const Vec3d& line) const {
  const double u = std::hypot(line[0], line[1]);
  if (u < 1e-14 * std::abs(line[2])) return true;  // the saturation axis itself
  return contains_direction(std::atan2(line[1], line[0])) ||
         contains_direction(std::atan2(-line[1], -line[0]));
}

PreparedNbhd prepared_neighborhood(const RatMat3& g, long m, const Rat& mu,
                                   const std::vector<RatVec3>& X, double radius,
                                   const std::vector<RatVec3>& avoid) {
  if (m <= 0 || radius <= 0)
    throw std::invalid_argument("prepared_neighborhood: m and radius must be positive");
  if (sgn(g.at(2, 0)) != 0 || sgn(g.at(2, 1)) != 0 || sgn(g.at(0, 2)) != 0 ||
      sgn(g.at(1, 2)) != 0)
    throw std::invalid_argument(
        "prepared_neighborhood: g must preserve the coordinate plane and axis");

  // g^m must act as mu * id on the plane.
  const RatMat3 gm = pow3(g, m);
  if (gm.at(0, 0) != mu || gm.at(1, 1) != mu || sgn(gm.at(0, 1)) != 0 ||
      sgn(gm.at(1, 0)) != 0)
    throw std::invalid_argument("prepared_neighborhood: g^m is not mu*id on the plane");

  PreparedNbhd nb;
  nb.g = g;
  nb.m = m;
  nb.mu = mu;

  std::vector<RatVec2> dirs;
  for (const RatVec3& x : X) {
    if (sgn(x[2]) != 0)
      throw std::invalid_argument("prepared_neighborhood: X must lie in the plane");
    if (sgn(x[0]) == 0 && sgn(x[1]) == 0)
      throw std::invalid_argument("prepared_neighborhood: zero X entry");
    bool dup = false;
    for (const RatVec2& d : dirs)
      dup = dup || sgn(d[0] * x[1] - d[1] * x[0]) == 0;
    if (!dup) dirs.push_back({x[0], x[1]});
  }

  for (const RatVec2& d : dirs) {
    for (int s : {1, -1}) {
      Arc arc;
      arc.exact_dir = {Rat(s) * d[0], Rat(s) * d[1]};
      arc.center_angle = std::atan2(rat_d(arc.exact_dir[1]), rat_d(arc.exact_dir[0]));
      arc.half_width = radius;
      nb.arcs.push_back(arc);
    }
  }

  // Invariance of the arc system. A conformal plane block preserves angles,
  // so endpoint images land on the arc set exactly whenever the center
  // directions map onto center directions; otherwise fall back to a float
  // check at 1e-12.
  const BlockConformal bc = block_conformal(g);
  for (const Arc& arc : nb.arcs) {
    const RatVec2 img{g.at(0, 0) * arc.exact_dir[0] + g.at(0, 1) * arc.exact_dir[1],
                      g.at(1, 0) * arc.exact_dir[0] + g.at(1, 1) * arc.exact_dir[1]};
    bool on_set = false;
    for (const Arc& other : nb.arcs)
      on_set = on_set ||
               sgn(img[0] * other.exact_dir[1] - img[1] * other.exact_dir[0]) == 0;
    if (!on_set)
      throw std::invalid_argument("prepared_neighborhood: X is not g-invariant");
    if (!bc.ok) {
      const double ia = std::atan2(rat_d(img[1]), rat_d(img[0]));
      double best = 1e300;
      for (const Arc& other : nb.arcs) {
        double d = std::fmod(std::abs(ia - other.center_angle), 2 * M_PI);
        d = std::min(d, 2 * M_PI - d);
        best = std::min(best, d);
      }
      if (best > 1e-12)
        throw std::invalid_argument(
            "prepared_neighborhood: non-conformal block, arc invariance fails");
    }
  }

  // Clearance from the avoid set (as line angles, mod pi).
  double clearance = M_PI;
  for (const RatVec3& av : avoid) {
    const double aa = std::atan2(rat_d(av[1]), rat_d(av[0]));
    for (const Arc& arc : nb.arcs) {
      double d = std::fmod(std::abs(arc.center_angle - aa), M_PI);
      d = std::min(d, M_PI - d);
      clearance = std::min(clearance, d - arc.half_width);
    }
  }
  if (clearance <= 0)
    throw std::invalid_argument(
        "prepared_neighborhood: arcs collide with the avoid set (radius too large)");
  nb.eps0 = std::sin(std::min(clearance, M_PI / 2));
  return nb;
}

FindPowerResult find_power(const RatMat3& f, const RatMat3& g,
                           const FindPowerOptions& opts) {
  const FabricaqiReport rep = check_fabricaqi(f, g, opts.m_max);
  if (!rep.ok)
    throw std::domain_error("find_power: hypotheses fail: " + rep.failed_hypothesis);

  const Vec3d l0 = sign_normalized(to_double(rep.L0));
  const Vec3d eu = sign_normalized(to_double(rep.f_lines[0]));
  const Vec3d es = sign_normalized(to_double(rep.f_lines[2]));
  std::vector<Vec3d> xs;
  for (const RatVec3& x : rep.X) xs.push_back(sign_normalized(to_double(x)));

  // Base cone radius from the separations condition (1) needs and from the
  // clearance of the X-lines to the f-plane traces (condition (5) fails on
  // cone points too close to E^cs(f) or E^cu(f)).
  double sep = chordal(eu, es);
  sep = std::min(sep, chordal(eu, l0));
  sep = std::min(sep, chordal(es, l0));
  for (const Vec3d& x : xs) {
    sep = std::min(sep, chordal(x, eu));
    sep = std::min(sep, chordal(x, es));
    sep = std::min(sep, chordal(x, l0));
  }
  sep = std::min(sep, rep.min_margin);
  const double eps0 = 0.5 * sep / opts.g_radius_factor;

  FindPowerResult result;
  for (long n = 1; n <= opts.n_max; ++n) {
    if (opts.odd_only && n % 2 == 0) continue;
    const RatMat3 fn = pow3(f, n), gn = pow3(g, n);
    const RatMat3 fn_inv = pow3(f, -n), gn_inv = pow3(g, -n);
    const std::string ns = std::to_string(n);

    std::vector<FamilyElement> family{
        {"f^" + ns, fn, 1},
        {"f^-" + ns, fn_inv, 0},
        {"g^" + ns, gn, 3},
        {"g^-" + ns, gn_inv, 2},
    };

    for (int level = 0; level < opts.eps_levels; ++level) {
      const double eps = eps0 / std::pow(2.0, level);
      std::vector<Cone> cones(4);
      cones[0].balls.push_back(Ball{eu, eps, rep.f_lines[0]});
      cones[1].balls.push_back(Ball{es, eps, rep.f_lines[2]});
      for (size_t xi = 0; xi < xs.size(); ++xi)
        cones[2].balls.push_back(Ball{xs[xi], opts.g_radius_factor * eps, rep.X[xi]});
      cones[3].balls.push_back(Ball{l0, eps, rep.L0});

      // The free base line: just outside the g^-n cone, tilted toward the
      // first X direction.
      const double theta = std::asin(std::min(0.9, 1.35 * eps));
      const Vec3d l0_star = sign_normalized(
          add(scale(l0, std::cos(theta)), scale(xs[0], std::sin(theta))));

      const CertifyOutcome oc = certify_condition_star(
          family, cones, 2.0, l0_star, eps * opts.net_rel);
      if (oc.ok) {
        result.n = n;
        result.cert = oc.cert;
        return result;
      }
      std::ostringstream os;
      os << "n=" << n << " eps=" << eps << ": condition " << oc.failure.condition
         << " (" << oc.failure.detail << ")";
      result.trace.push_back(os.str());
    }
  }

  std::ostringstream os;
  os << "find_power: exhausted n_max=" << opts.n_max << "; tightest failures:";
  const size_t keep = std::min<size_t>(result.trace.size(), 4);
  for (size_t i = result.trace.size() - keep; i < result.trace.size(); ++i)
    os << "\n  " << result.trace[i];
  throw std::domain_error(os.str());
}

QiBoundOutcome qi_bound_check(const Representation& rep, double c,
                              int max_length) {
  QiBoundOutcome out;
  out.pass = true;
  for (int n = 1; n <= max_length && out.pass; ++n) {
    enumerate(rep.rank(), n, [&](const Word& w) {
      if (!out.pass) return;
      ++out.words_checked;
      const double s1 = singular_values(rep.evaluate(w))[0];
      const double bound = std::pow(c, n - 1) * (1.0 - 1e-9);
      if (s1 < bound) {
        out.pass = false;
        out.violation = w;
        out.s1 = s1;
        out.bound = bound;
      }
    });
  }
  return out;
}

}  // namespace anosov
