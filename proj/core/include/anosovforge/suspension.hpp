#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosovforge/represent.hpp"

namespace anosov {

/// Normal form of a plane-preserving representation: per generator c a
/// plane part with det +/-1, an exact positive multiplier t(c) = e^{phi(c)},
/// a sign, and a translation part kappa(c). The assembled 3x3 image is
///   [ t^{-1/2} * plane_part   kappa ]
///   [ 0                       s * t ]
/// so exact assembly needs every multiplier to be a rational square.
struct Suspension {
  int rank = 2;
  std::vector<RatMat2> plane_parts;
  std::vector<Rat> multipliers;        // t(c) > 0
  std::vector<int> signs;              // +/-1, must equal det(plane_part)
  std::vector<std::array<Rat, 2>> kappas;

  void validate() const;  // throws std::invalid_argument with the defect named

  /// Exact plane-part product along a word.
  RatMat2 plane_word(const Word& w) const;
  /// Exact multiplier product t(w); phi(w) = log t(w).
  Rat multiplier_word(const Word& w) const;
  int sign_word(const Word& w) const;
};

struct LambdaTriple {
  double lambda1 = 0, lambda2 = 0;  // eigenvalue moduli on the plane
  Rat lambda_perp;                  // exact; multiplicative in the word
};

/// Block upper-triangular representation with invariant plane span(e1,e2).
/// Throws when a multiplier is not a rational square (exact assembly is
/// impossible) or when sign data is inconsistent with det = 1.
Representation assemble(const Suspension& susp);

/// Inverse of assemble for representations preserving the given plane.
/// The plane normal is rationalized (tolerance 1e-10); invariance is then
/// verified exactly in the conjugated coordinates.
Suspension extract(const Representation& rep, const PlaneR3& plane);

LambdaTriple lambda_triple(const Suspension& susp, const Word& w);

/// pass = std::nullopt; otherwise the first violating word in lexicographic
/// order. det +1 plane parts must have |tr| > 2 exactly; det -1 parts must
/// have nonzero trace.
std::optional<Word> hyperbolicity_scan(const Suspension& susp, int max_length);

struct LahnResult {
  double inf_ratio = 0;
  Word witness;
  bool anosov_consistent = false;  // inf_ratio > 3/2
  long words_considered = 0;
};

/// inf over reduced words 1 <= |w| <= N with phi(w) != 0 of
/// log(lambda_u(plane part)) / |phi(w)|. Requires the hyperbolicity scan
/// to pass at depth N (throws std::domain_error naming the witness) and at
/// least one word with phi != 0 (throws std::domain_error otherwise).
LahnResult lahn_ratio(const Suspension& susp, int max_length);

struct DfbEvidence {
  std::optional<Word> hyperbolicity_witness;
  GrowthProfile plane_profile;  // qi profile of the embedded plane action
  bool slope_positive = false;
  std::vector<Word> unipotent_witnesses;
  bool pass = false;
};

/// Finite-depth evidence that the suspension is derived from Barbot; never
/// a proof.
DfbEvidence dfb_evidence(const Suspension& susp, int max_length);

/// Float overlay scaling one generator slot: t(c0) <- t(c0) * e^eps with
/// the plane part rescaled by e^{-eps/2}. The base stays exact; evaluation
/// happens in doubles.
struct ScaledSuspension {
  Suspension base;
  int scaled_generator = 0;  // 0-based
  double eps = 0;

  /// lambda data by the closed-form scaling laws.
  double lambda1(const Word& w) const;
  double lambda_perp(const Word& w) const;
  /// lambda data recomputed from scratch (letter-by-letter double products).
  double lambda1_recomputed(const Word& w) const;
  double lambda_perp_recomputed(const Word& w) const;
  /// Assembled double image of a word (kappa included).
  Mat3d evaluate(const Word& w) const;
};

ScaledSuspension scale_generator(const Suspension& susp, int generator,
                                 double eps);

enum class VClass { V, V_inverse, Neither, Boundary };

/// Compares lambda1 (float) against lambda_perp (exact) at relative
/// tolerance 1e-9; ties surface as Boundary instead of a silent verdict.
VClass v_class(const Suspension& susp, const Word& w);

struct TauStep {
  long p = 0;               // 0 marks a bookkeeping step (inversion/swap)
  std::string kind;         // "invert_b", "swap", "substitute"
  Word a, b;                // pair after the step
  Rat tau_a, tau_b;
  std::array<std::array<long, 2>, 2> pair_matrix;  // on abelianized (a,b)
  long det = 0;                                    // +/-1, checked
};

struct TauResult {
  std::vector<TauStep> steps;
  Word a_final, b_final;
  bool terminated = false;  // v_class(b_final) == Neither
  std::string reason;
};

/// The substitution loop: normalize b into V, order tau(a) <= tau(b) < 1,
/// then repeatedly replace (a, b) by (b, a b^{-p}) for the least positive p
/// with tau(a b^{-p}) in (tau(b), 1]. Stops when b leaves V union V^{-1}.
TauResult tau_iteration(const Suspension& susp, const Word& a, const Word& b,
                        int max_iter, long p_cap = 1'000'000);

struct BalanceResult {
  double eps_star = 0;
  double log_ratio_residual = 0;  // |log(lambda1/lambda_perp)| recomputed
  double lambda1 = 0;             // at the balanced point
  Vec3d L0{};                     // eigenline of lambda2, embedded in the plane
  double containment_residual = 0;  // angular distance of L0 to E^cs(rho'(a))
  ScaledSuspension scaled;
};

/// Closed-form balancing eps* = (2 / (3 p)) log(lambda1/lambda_perp) at
/// eps = 0, where p is the abelianization coordinate of a^m b^n at the
/// scaled generator slot. When `a` is a single generator the slot is that
/// generator (the stated contract); otherwise pass `slot` >= 0 explicitly
/// or the first generator with nonzero coordinate is used.
BalanceResult balance_scaling(const Suspension& susp, const Word& a,
                              const Word& b, long m, long n, int slot = -1);

struct BalancedWordResult {
  long m = 0, n = 0;
  double ratio = 0;
  std::vector<std::array<double, 3>> trajectory;  // (m, n, ratio)
};

/// Smallest (m + n) with lambda1/lambda_perp of a^m b^n inside [1/C, C].
/// Preconditions v_class(a) == V and v_class(b) == Neither; violations and
/// exhausted bounds throw std::domain_error carrying the ratio trajectory
/// in the message.
BalancedWordResult find_balanced_word(const Suspension& susp, const Word& a,
                                      const Word& b, double C, long m_max,
                                      long n_max);

}  // namespace anosov
