#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosovforge/represent.hpp"

namespace anosov {

double chordal_distance(const Vec3d& a, const Vec3d& b);

/// Rigorous Lipschitz constant s1 s2 / s3^2 for the induced map on RP^2
/// in the chordal metric: |gv ^ gw| <= s1 s2 |v ^ w| and |gv| >= s3.
double projective_lipschitz_bound(const Mat3d& g);

struct Ball {
  Vec3d center{};  // unit, sign-normalized
  double radius = 0;  // chordal, in (0, 1)
  /// Exact rational direction of the center when the construction knows it;
  /// enables the exact invariant-ball containment rules.
  std::optional<RatVec3> exact_center;
};

struct Cone {
  std::vector<Ball> balls;
};

struct FamilyElement {
  std::string label;
  RatMat3 mat;
  size_t inverse = 0;  // index of the inverse element within the family
};

struct ConditionFailure {
  int condition = 0;  // 1..5 of condition (*)
  std::string detail;
  Vec3d witness{};
};

struct Certificate {
  std::vector<FamilyElement> family;
  std::vector<Cone> cones;  // parallel to family
  double c = 0;
  Vec3d L0{};
  double net_step = 0;
  double margin_disjoint = 0;
  double margin_L0_outside = 0;
  double margin_maps_L0 = 0;
  double margin_containment = 0;
  double margin_expansion = 0;
  std::vector<double> lipschitz_global;     // per element, s1 s2 / s3^2
  std::vector<double> lipschitz_effective;  // per element, refined per-ball bound
};

struct CertifyOutcome {
  bool ok = false;
  Certificate cert;          // populated with margins when ok
  ConditionFailure failure;  // populated when !ok
};

/// Verifies conditions (1)-(5) of the cone system:
///  (1) cones of distinct elements are pairwise disjoint,
///  (2) L0 lies outside every cone,
///  (3) g maps L0 into its own cone,
///  (4) g . C_h is contained in C_g whenever g != h^-1,
///  (5) ||g|_L|| >= c on the union of C_h over h != g^-1.
/// (4) and (5) are checked on tangent-grid nets with covering radius
/// net_step; containments use the per-ball refined Lipschitz bound
/// s1 s2 / beta^2 where beta lower-bounds |gv| on the ball, and two exact
/// rules for conformal block maps whose invariant-ball containments touch
/// the boundary (see the implementation notes).
CertifyOutcome certify_condition_star(const std::vector<FamilyElement>& family,
                                      const std::vector<Cone>& cones, double c,
                                      const Vec3d& L0, double net_step);

CertifyOutcome certify_certificate(const Certificate& cert);

struct FabricaqiReport {
  bool ok = false;
  std::string failed_hypothesis;  // names the failing hypothesis when !ok
  long m = 0;
  Rat mu;
  RatVec3 L0{};                  // eigenline of g for mu^-2 (exact)
  std::array<RatVec3, 2> P0{};   // rational basis of the scalar plane of g^m
  RatVec3 P0_normal{};
  std::vector<RatVec3> X;        // the invariant line set in P0, deduplicated
  std::array<RatVec3, 3> f_lines{};  // E^u, E^c, E^s of f (exact)
  std::array<Rat, 3> f_eigs{};
  double min_margin = 0;  // smallest chordal clearance among the hypotheses
};

/// Finds the least m <= m_max with g^m scalar (factor mu > 1) on its
/// invariant plane and mu^-2 on the complementary eigenline, then checks
/// the remaining hypotheses exactly on rational eigendata. Requires f to
/// have rational eigenvalues; inputs without them are rejected.
FabricaqiReport check_fabricaqi(const RatMat3& f, const RatMat3& g, long m_max);

/// Arc on the circle of directions of the invariant plane (angles mod 2pi;
/// arcs come in antipodal pairs so they describe sets of lines).
struct Arc {
  double center_angle = 0;
  double half_width = 0;
  RatVec2 exact_dir{};
};

struct PreparedNbhd {
  RatMat3 g;
  long m = 0;
  Rat mu;
  std::vector<Arc> arcs;
  bool saturated = true;  // the set is a union of full lines x + L0
  double eps0 = 0;        // chordal clearance from the avoid set

  bool contains_direction(double angle) const;
  bool contains_line(const Vec3d& line) const;
};

/// Saturated arc neighborhood of a g-invariant line set X inside the
/// coordinate plane span(e1, e2). g must preserve that plane and the
/// e3-axis, g^m must restrict to mu * id on the plane, and the arcs must
/// stay clear of the `avoid` directions (the radius is otherwise too
/// large). Invariance of the arc system is certified exactly when the
/// plane block of g is conformal.
PreparedNbhd prepared_neighborhood(const RatMat3& g, long m, const Rat& mu,
                                   const std::vector<RatVec3>& X, double radius,
                                   const std::vector<RatVec3>& avoid = {});

struct FindPowerOptions {
  bool odd_only = true;
  long n_max = 64;
  long m_max = 16;
  int eps_levels = 4;
  double net_rel = 1.0 / 12.0;  // net_step = net_rel * cone radius
  /// The g-cone balls are wider than the f-cone balls by this factor: the
  /// projection of a ball at a line tilted off the plane spreads over the
  /// direction circle by 1/|plane component|, which equal radii cannot
  /// absorb.
  double g_radius_factor = 1.4;
};

struct FindPowerResult {
  long n = 0;
  Certificate cert;
  std::vector<std::string> trace;  // per-(n, eps) failure summaries
};

/// Builds the cone family of the invariant-plane construction (balls at
/// the X-lines and at L0 for g, balls at the attracting and repelling
/// lines for f) over a decreasing-radius schedule and returns the least
/// admissible power of the requested parity with a full certificate at
/// c = 2. Throws std::domain_error when n_max is exhausted, reporting the
/// tightest failing condition.
FindPowerResult find_power(const RatMat3& f, const RatMat3& g,
                           const FindPowerOptions& opts = {});

struct QiBoundOutcome {
  bool pass = false;
  Word violation;
  double s1 = 0;
  double bound = 0;
  long words_checked = 0;
};

/// Exhaustively verifies s1(rho(w)) >= c^(|w|-1) * (1 - 1e-9) for all
/// reduced words up to max_length over the certified alphabet.
QiBoundOutcome qi_bound_check(const Representation& rep, double c,
                              int max_length);

}  // namespace anosov
