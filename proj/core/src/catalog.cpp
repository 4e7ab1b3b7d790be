#include "anosovforge/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace anosov {

namespace {

constexpr long kRho2CertifiedPower = 3;
constexpr unsigned long long kRho2SearchSeed = 20250811ull;

RatMat2 schottky_conjugator() {
  RatMat2 s;
  s.at(0, 0) = 1;
  s.at(0, 1) = 1;
  s.at(1, 0) = 1;
  s.at(1, 1) = 2;
  return s;
}

RatMat2 diag2(const Rat& x, const Rat& y) {
  RatMat2 d;
  d.at(0, 0) = x;
  d.at(1, 1) = y;
  return d;
}

// 8x8 exact matrices for the adjoint action on traceless 3x3 matrices.
using Mat8 = std::array<Rat, 64>;

Mat8 mul8(const Mat8& x, const Mat8& y) {
  Mat8 r{};
  for (int i = 0; i < 8; ++i)
    for (int l = 0; l < 8; ++l) {
      const Rat& f = x[static_cast<size_t>(8 * i + l)];
      if (sgn(f) == 0) continue;
      for (int j = 0; j < 8; ++j)
        r[static_cast<size_t>(8 * i + j)] += f * y[static_cast<size_t>(8 * l + j)];
    }
  return r;
}

// Basis: E11-E22, E22-E33, E12, E13, E21, E23, E31, E32.
std::array<Rat, 8> sl3_coords(const RatMat3& m) {
  return {m.at(0, 0), m.at(0, 0) + m.at(1, 1), m.at(0, 1), m.at(0, 2),
          m.at(1, 0), m.at(1, 2), m.at(2, 0), m.at(2, 1)};
}

RatMat3 sl3_basis_element(int j) {
  RatMat3 b;
  switch (j) {
    case 0: b.at(0, 0) = 1; b.at(1, 1) = -1; break;
    case 1: b.at(1, 1) = 1; b.at(2, 2) = -1; break;
    case 2: b.at(0, 1) = 1; break;
    case 3: b.at(0, 2) = 1; break;
    case 4: b.at(1, 0) = 1; break;
    case 5: b.at(1, 2) = 1; break;
    case 6: b.at(2, 0) = 1; break;
    default: b.at(2, 1) = 1; break;
  }
  return b;
}

Mat8 adjoint_matrix(const RatMat3& g) {
  const RatMat3 g_inv = inv3(g);
  Mat8 ad{};
  for (int j = 0; j < 8; ++j) {
    const RatMat3 image = mul3(mul3(g, sl3_basis_element(j)), g_inv);
    const auto coords = sl3_coords(image);
    for (int i = 0; i < 8; ++i) ad[static_cast<size_t>(8 * i + j)] = coords[static_cast<size_t>(i)];
  }
  return ad;
}

// Incremental exact span of flattened 8x8 matrices.
struct Span64 {
  std::vector<std::pair<size_t, std::vector<Rat>>> rows;  // (pivot, row)

  bool insert(const Mat8& m) {
    std::vector<Rat> v(m.begin(), m.end());
    for (const auto& [piv, row] : rows) {
      if (sgn(v[piv]) == 0) continue;
      const Rat f = v[piv];
      for (size_t j = 0; j < 64; ++j) v[j] -= f * row[j];
    }
    for (size_t j = 0; j < 64; ++j) {
      if (sgn(v[j]) != 0) {
        const Rat inv = 1 / v[j];
        for (size_t l = 0; l < 64; ++l) v[l] *= inv;
        rows.emplace_back(j, std::move(v));
        return true;
      }
    }
    return false;
  }
};

}  // namespace

bool adjoint_irreducibility_rank_test(const RatMat3& x, const RatMat3& y) {
  const Mat8 ad_x = adjoint_matrix(x), ad_y = adjoint_matrix(y);
  Mat8 id{};
  for (int i = 0; i < 8; ++i) id[static_cast<size_t>(9 * i)] = 1;

  Span64 span;
  std::vector<Mat8> frontier;
  for (const Mat8& seed : {id, ad_x, ad_y})
    if (span.insert(seed)) frontier.push_back(seed);

  while (!frontier.empty() && span.rows.size() < 64) {
    std::vector<Mat8> next;
    for (const Mat8& f : frontier) {
      for (const Mat8* gen : {&ad_x, &ad_y}) {
        Mat8 prod = mul8(*gen, f);
        if (span.insert(prod)) next.push_back(std::move(prod));
      }
    }
    frontier = std::move(next);
  }
  return span.rows.size() == 64;
}

CatalogEntry barbot_anosov(const Rat& gap, const Rat& multiplier) {
  if (!(gap > 1)) throw std::invalid_argument("barbot_anosov: gap must exceed 1");
  if (sgn(multiplier) <= 0)
    throw std::invalid_argument("barbot_anosov: multiplier must be positive");
  if (multiplier != 1) {
    const double ratio =
        std::log(rat_d(gap)) / std::abs(std::log(rat_d(multiplier)));
    if (ratio <= 1.5)
      throw std::invalid_argument(
          "barbot_anosov: generator ratio log(gap)/|log(multiplier)| must "
          "exceed 3/2");
  }

  CatalogEntry e;
  e.name = "barbot_anosov";
  e.provenance = "reducible suspension with Schottky plane parts";
  const RatMat2 a = diag2(gap, 1 / gap);
  const RatMat2 s = schottky_conjugator();
  const RatMat2 b = mul2(mul2(s, a), inv2(s));
  Suspension susp;
  susp.rank = 2;
  susp.plane_parts = {a, b};
  susp.multipliers = {multiplier, multiplier};
  susp.signs = {1, 1};
  susp.kappas = {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}};
  susp.validate();
  e.suspension = susp;
  e.expected = {"hyperbolicity_scan pass at depth 6",
                "lahn_ratio inf > 3/2 + 0.1 at depth 8",
                "anosov_gap_profile slope positive"};
  return e;
}

CatalogEntry lahn_qi_non_anosov() {
  CatalogEntry e;
  e.name = "lahn_qi_non_anosov";
  e.provenance =
      "derived-from-Barbot suspension whose first generator has ratio 2/3";
  const RatMat2 a = diag2(Rat(4), rat(1, 4));
  const RatMat2 s = schottky_conjugator();
  const RatMat2 b = mul2(mul2(s, a), inv2(s));
  Suspension susp;
  susp.rank = 2;
  susp.plane_parts = {a, b};
  susp.multipliers = {Rat(8), Rat(32)};
  susp.signs = {1, 1};
  susp.kappas = {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}};
  susp.validate();
  e.suspension = susp;
  e.expected = {"dfb_evidence pass at depth 6",
                "lahn_ratio witness = generator a, ratio 2/3",
                "tau_iteration terminates with b outside V and V^-1"};
  return e;
}

RatMat3 rho2_g() {
  RatMat3 g;
  g.at(0, 0) = 2;
  g.at(0, 1) = -2;
  g.at(1, 0) = 2;
  g.at(1, 1) = 2;
  g.at(2, 2) = rat(1, 8);
  return g;
}

RatMat3 rho2_f() {
  // Frozen conjugate Q diag(4, 1, 1/4) Q^-1; Q fixed by the seeded search
  // so that every hypothesis margin of the cone construction is healthy.
  RatMat3 q;
  q.at(0, 0) = 2;
  q.at(0, 1) = 0;
  q.at(0, 2) = 3;
  q.at(1, 0) = 1;
  q.at(1, 1) = 1;
  q.at(1, 2) = 1;
  q.at(2, 0) = 1;
  q.at(2, 1) = 1;
  q.at(2, 2) = -1;
  RatMat3 d;
  d.at(0, 0) = 4;
  d.at(1, 1) = 1;
  d.at(2, 2) = rat(1, 4);
  return mul3(mul3(q, d), inv3(q));
}

long rho2_certified_power() { return kRho2CertifiedPower; }

CatalogEntry rho2() {
  CatalogEntry e;
  e.name = "rho2";
  e.provenance =
      "free pair (g^n, f^n): g the conformal-block matrix, f a frozen "
      "rational loxodromic conjugate of diag(4,1,1/4)";
  e.g = rho2_g();
  e.f = rho2_f();
  e.power_n = kRho2CertifiedPower;
  e.search_seed = kRho2SearchSeed;
  GeneratorSet gens;
  gens.rank = 2;
  gens.names = {"g", "f"};
  e.representation = Representation(
      gens, {pow3(*e.g, e.power_n), pow3(*e.f, e.power_n)});
  e.expected = {"nonreal_spectrum_witness(g) true",
                "check_fabricaqi(f, g) returns m = 8, mu = 4096",
                "find_power certifies an odd n <= 64 at c = 2",
                "adjoint irreducibility rank test passes"};
  return e;
}

CatalogEntry rho_k(int k) {
  if (k < 3) throw std::invalid_argument("rho_k: k must exceed 2");
  const CatalogEntry base = rho2();
  const FiniteIndexGenerators fig = finite_index_generators(k);

  const Representation& pair = *base.representation;
  std::vector<RatMat3> images;
  for (const Word& c : fig.generators) images.push_back(pair.evaluate(c));

  GeneratorSet gens;
  gens.rank = k;
  for (int i = 1; i <= k; ++i) gens.names.push_back("c" + std::to_string(i));

  CatalogEntry e;
  e.name = "rho" + std::to_string(k);
  e.provenance = "restriction of the power pair to the index-" +
                 std::to_string(k - 1) + " covering subgroup";
  e.representation = Representation(gens, std::move(images));
  e.c_words = fig.generators;
  e.p = fig.p;
  e.f = base.f;
  e.g = base.g;
  e.power_n = base.power_n;
  e.expected = {"nonreal_spectrum_witness at c1 true",
                "qi_profile slope positive at depth 4",
                "rho_k_destabilize produces an exact unipotent witness"};
  return e;
}

CatalogEntry rho2_minimal() {
  const CatalogEntry base = rho2();
  CatalogEntry e;
  e.name = "rho2_minimal";
  e.provenance =
      "power pair with the g-block replaced by the same-modulus rotation by "
      "one radian";
  e.f = base.f;
  e.g = base.g;
  e.power_n = base.power_n;

  const Representation& pair = *base.representation;
  FloatRep rep;
  rep.gens = pair.generators();
  Mat3d g_img = to_double(pair.image(0));
  const double block_det = g_img.at(0, 0) * g_img.at(1, 1) -
                           g_img.at(0, 1) * g_img.at(1, 0);
  const double modulus = std::sqrt(block_det);
  g_img.at(0, 0) = modulus * std::cos(1.0);
  g_img.at(0, 1) = -modulus * std::sin(1.0);
  g_img.at(1, 0) = modulus * std::sin(1.0);
  g_img.at(1, 1) = modulus * std::cos(1.0);
  rep.images = {g_img, to_double(pair.image(1))};
  e.float_representation = rep;
  e.expected = {"no power of the block up to 100 is scalar within 1e-6",
                "coverage exceeds the unperturbed pair at equal depth"};
  return e;
}

CatalogEntry catalog_by_name(const std::string& name, int k) {
  if (name == "barbot_anosov") return barbot_anosov(Rat(4), rat(9, 8));
  if (name == "lahn_qi_non_anosov") return lahn_qi_non_anosov();
  if (name == "rho2") return rho2();
  if (name == "rho_k" || name == "rhok") return rho_k(k);
  if (name == "rho2_minimal") return rho2_minimal();
  throw std::invalid_argument("catalog: unknown entry '" + name + "'");
}

RhoKInput rho_k_input(const CatalogEntry& entry) {
  if (!entry.representation || entry.c_words.empty())
    throw std::invalid_argument("rho_k_input: not a finite-index entry");
  RhoKInput in{*entry.representation, entry.c_words,
               pow3(*entry.g, entry.power_n), pow3(*entry.f, entry.power_n),
               entry.p};
  return in;
}

}  // namespace anosov
