#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosovforge/perturb.hpp"
#include "anosovforge/represent.hpp"
#include "anosovforge/suspension.hpp"

namespace anosov {

/// Reproducible constructor output: the object plus the checks the
/// acceptance suite runs against it. Constructors are deterministic, so
/// serialized entries are bit-identical across runs.
struct CatalogEntry {
  std::string name;
  std::string provenance;
  std::vector<std::string> expected;  // named checks with tolerances

  std::optional<Suspension> suspension;
  std::optional<Representation> representation;
  std::optional<FloatRep> float_representation;

  // Extra data for the power-pair entries.
  std::optional<RatMat3> f, g;
  long power_n = 0;           // certified odd power of the free pair
  std::vector<Word> c_words;  // defining words over the two-letter base
  long p = 0;                 // exponent in c3 = b a^p b^-1
  unsigned long long search_seed = 0;
};

/// Suspension with Schottky plane parts and a small multiplier; validated
/// to have generator Lahn ratio above 3/2.
CatalogEntry barbot_anosov(const Rat& gap, const Rat& multiplier);

/// Derived-from-Barbot suspension with a generator of Lahn ratio 2/3.
CatalogEntry lahn_qi_non_anosov();

/// The two-generator power pair: the explicit conformal-block matrix g,
/// a frozen rational loxodromic f (fixed once by a seeded random search
/// over rational conjugates of diag(4,1,1/4) and shipped as data), and
/// the certified odd power. The stored representation maps the first
/// generator to g^n and the second to f^n.
CatalogEntry rho2();

/// Restriction of the power pair to the index-(k-1) subgroup, images of
/// the covering-graph basis under a -> g^n, b -> f^n.
CatalogEntry rho_k(int k);

/// The power pair with the g-block replaced by a same-modulus rotation by
/// one radian: no power of the block is scalar, so the induced projective
/// action mixes the plane directions. Float-valued by nature.
CatalogEntry rho2_minimal();

CatalogEntry catalog_by_name(const std::string& name, int k = 3);

RhoKInput rho_k_input(const CatalogEntry& entry);

/// Exact certified data of the frozen pair (used by tests and pipelines).
RatMat3 rho2_g();
RatMat3 rho2_f();
long rho2_certified_power();

/// Burnside-style rank certificate: the matrix algebra generated by the
/// adjoint actions of the two images spans all of End(sl3) (exact rank 64),
/// so the pair admits no common invariant subspace.
bool adjoint_irreducibility_rank_test(const RatMat3& x, const RatMat3& y);

}  // namespace anosov
