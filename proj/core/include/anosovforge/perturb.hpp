#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosovforge/represent.hpp"

namespace anosov {

/// A representation together with the scalar-plane data of omega = a^m b^n:
/// P0 is the mu-eigenplane of rho(omega^q) and L0 the mu^-2 eigenline.
struct IncidenceInstance {
  Representation rep;
  int a_index = 0;
  int b_index = 1;
  long m = 1, n = 1, q = 1;
  Rat mu;
  RatVec3 L0{};
  std::array<RatVec3, 2> P0{};

  Word omega_word() const;  // a^m b^n
};

/// Exact rank-2 instance with the incidence zero of the p = 1 functional
/// planted inside the default path domain; used by the tests and as the
/// CLI demonstration input.
IncidenceInstance make_incidence_testbed();

struct GenericityResult {
  FloatRep rep;             // adjusted representation (float layer)
  double margin_Ec_L0 = 0;  // chordal distance of E^c(rho'(a)) from L0
  double margin_Es_P0 = 0;  // sin of the angle of E^s(rho'(a)) to P0
  double omega_drift = 0;   // relative drift of rho'(omega)
  bool adjusted = false;    // false when the input was already generic
};

/// Ensures E^c(rho(a)) != L0 and E^s(rho(a)) not in P0 with margins at
/// least eta/10, moving only rho(a) and recompensating rho(b) through the
/// n-th root so that rho'(omega) = rho(omega). Throws std::domain_error on
/// parity failures of the root or when the margins cannot be obtained.
GenericityResult genericity_adjust(const IncidenceInstance& inst, double eta);

/// One-parameter family rotating E^u(rho_t(a)) across E^cu(rho(a)),
/// transverse at t = 0, with eigenvalues frozen and rho_t(b) compensated
/// so that rho_t(omega) is constant.
class DeformationPath {
 public:
  DeformationPath(const IncidenceInstance& inst, const FloatRep& base,
                  double amplitude);

  Mat3d a_at(double t) const;
  Mat3d b_at(double t) const;  // n-th root compensation
  Mat3d omega_at(double t) const;

  double t_minus() const { return -amplitude_; }
  double t_plus() const { return amplitude_; }
  double omega_drift() const { return omega_drift_; }
  /// Functional with kernel E^cu(rho_t(a)) evaluated on L0 (continuous,
  /// unit-scaled but not sign-normalized).
  double theta_cu(double t) const;
  /// Functional with kernel rho_t(a^p) . P0 evaluated on L0.
  double theta_p(double t, long p) const;

  const IncidenceInstance& instance() const { return *inst_; }
  const Mat3d& omega_matrix() const { return rho_omega_; }

 private:
  const IncidenceInstance* inst_;
  double amplitude_ = 0;
  long m_ = 1, n_ = 1;
  Mat3d rho_omega_{};     // constant along the path
  Vec3d u0_{}, ec_{}, es_{}, w_{};  // eigenframe of rho(a) and the moving dir
  std::array<double, 3> eigs_{};
  Vec3d L0_{};
  Vec3d P0_normal_{};
  double omega_drift_ = 0;
};

DeformationPath compensated_path(const IncidenceInstance& inst,
                                 const FloatRep& base, double amplitude);

struct IncidenceResult {
  double t0 = 0;
  long p = 0;
  double theta_residual = 0;
  int bisection_steps = 0;
  std::vector<std::string> trace;  // endpoint values for the skipped p
};

/// Least p <= p_max whose functional changes sign on the domain, bisected
/// to |theta| <= tol. Throws std::invalid_argument for tol <= 0 and
/// std::domain_error when p_max is exhausted (the trace is in the message).
IncidenceResult solve_incidence(const DeformationPath& path, long p_max,
                                double tol);

struct UnipotentWitness {
  Word word;
  Mat3d matrix{};
  double residual = 0;          // ||(M-I)^3|| / ||M||^3
  double charpoly_distance = 0; // coefficient distance to (x-1)^3
  FloatRep snapshot;            // the perturbed representation at t0
  double t0 = 0;
  long p = 0, q = 1;
};

/// Evaluates rho_t0([omega^q, a^p omega^q a^-p]) and accepts when the
/// residual is at most `accept`. Throws std::domain_error with diagnostics
/// otherwise.
UnipotentWitness unipotent_commutator(const DeformationPath& path, double t0,
                                      long p, double accept = 1e-6);

/// Input data for the finite-index destabilization: the rank-k catalog
/// representation with its defining words over the two-letter base group.
struct RhoKInput {
  Representation rep;         // images of c_1..c_k
  std::vector<Word> c_words;  // c_i over the rank-2 alphabet
  RatMat3 G, F;               // images of the base generators a and b
  long p = 1;                 // exponent in c3 = b a^p b^-1
};

struct RhoKWitness {
  Word word;           // [c3^q, gamma c1 gamma^-1] in the rank-k alphabet
  RatMat3 matrix;      // exact image under the perturbed representation
  double residual = 0; // float residual of the exact matrix (~0)
  double approach_distance = 0;  // chordal plane distance reached by the search
  double correction_size = 0;    // ||T - I||_F of the c3 correction
  Word gamma;                    // the approach word over {c1, c2}
  long q = 0;
  std::vector<RatMat3> perturbed_images;
};

/// The two-step destabilization: replace the c1-block by the same-modulus
/// rotation through an angle that is an irrational multiple of pi (kept
/// rational entrywise so the witness stays exact), search <c1, c2> for the
/// best plane approach to the scalar plane of c3^q, then conjugate c3 by
/// the projection-correction mapping that plane onto the approached one.
/// The returned commutator is exactly unipotent in rational arithmetic.
RhoKWitness rho_k_destabilize(const RhoKInput& in, long q, int n_max,
                              double approach_tol = 1e-6);

}  // namespace anosov
