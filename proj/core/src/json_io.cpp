#include "anosovforge/json_io.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace anosov {

using nlohmann::json;

namespace {

json rat_j(const Rat& r) { return rat_str(r); }

json mat3_j(const RatMat3& m) {
  json a = json::array();
  for (const Rat& x : m.a) a.push_back(rat_str(x));
  return a;
}

RatMat3 mat3_from(const json& a) {
  if (!a.is_array() || a.size() != 9)
    throw std::invalid_argument("json: 3x3 matrix needs 9 entries");
  RatMat3 m;
  for (size_t i = 0; i < 9; ++i) m.a[i] = rat_parse(a[i].get<std::string>());
  return m;
}

json mat2_j(const RatMat2& m) {
  json a = json::array();
  for (const Rat& x : m.a) a.push_back(rat_str(x));
  return a;
}

RatMat2 mat2_from(const json& a) {
  if (!a.is_array() || a.size() != 4)
    throw std::invalid_argument("json: 2x2 matrix needs 4 entries");
  RatMat2 m;
  for (size_t i = 0; i < 4; ++i) m.a[i] = rat_parse(a[i].get<std::string>());
  return m;
}

json mat3d_j(const Mat3d& m) {
  json a = json::array();
  for (double x : m.a) a.push_back(x);
  return a;
}

json vec3_j(const Vec3d& v) { return json::array({v[0], v[1], v[2]}); }

json word_j(const Word& w) {
  json a = json::array();
  for (int32_t x : w) a.push_back(x);
  return a;
}

Word word_from(const json& a) {
  Word w;
  for (const auto& x : a) w.push_back(x.get<int32_t>());
  return w;
}

}  // namespace

std::string to_json(const Word& w) { return word_j(w).dump(); }

Word word_from_json(const std::string& text) {
  return word_from(json::parse(text));
}

std::string to_json(const Representation& rep) {
  json j;
  j["rank"] = rep.rank();
  j["names"] = rep.generators().names;
  json images = json::array();
  for (const RatMat3& m : rep.images()) images.push_back(mat3_j(m));
  j["images"] = images;
  return j.dump(2);
}

Representation representation_from_json(const std::string& text) {
  const json j = json::parse(text);
  GeneratorSet gens;
  gens.rank = j.at("rank").get<int>();
  if (j.contains("names"))
    gens.names = j.at("names").get<std::vector<std::string>>();
  else
    gens = GeneratorSet::standard(gens.rank);
  std::vector<RatMat3> images;
  for (const auto& m : j.at("images")) images.push_back(mat3_from(m));
  return Representation(gens, std::move(images));
}

std::string to_json(const Suspension& susp) {
  json j;
  j["rank"] = susp.rank;
  json parts = json::array(), mults = json::array(), signs = json::array(),
       kappas = json::array();
  for (int i = 0; i < susp.rank; ++i) {
    parts.push_back(mat2_j(susp.plane_parts[static_cast<size_t>(i)]));
    mults.push_back(rat_j(susp.multipliers[static_cast<size_t>(i)]));
    signs.push_back(susp.signs[static_cast<size_t>(i)]);
    kappas.push_back(json::array({rat_str(susp.kappas[static_cast<size_t>(i)][0]),
                                  rat_str(susp.kappas[static_cast<size_t>(i)][1])}));
  }
  j["plane_parts"] = parts;
  j["multipliers"] = mults;
  j["signs"] = signs;
  j["kappas"] = kappas;
  return j.dump(2);
}

Suspension suspension_from_json(const std::string& text) {
  const json j = json::parse(text);
  Suspension s;
  s.rank = j.at("rank").get<int>();
  for (const auto& m : j.at("plane_parts")) s.plane_parts.push_back(mat2_from(m));
  for (const auto& m : j.at("multipliers"))
    s.multipliers.push_back(rat_parse(m.get<std::string>()));
  for (const auto& x : j.at("signs")) s.signs.push_back(x.get<int>());
  for (const auto& k : j.at("kappas"))
    s.kappas.push_back({rat_parse(k[0].get<std::string>()),
                        rat_parse(k[1].get<std::string>())});
  s.validate();
  return s;
}

std::string to_json(const GrowthProfile& p) {
  json j;
  j["max_length"] = p.max_length;
  j["exhaustive"] = p.exhaustive;
  j["min_log_s1"] = p.min_log_s1;
  j["min_gap"] = p.min_gap;
  json ws1 = json::array(), wgap = json::array();
  for (const Word& w : p.witness_s1) ws1.push_back(word_j(w));
  for (const Word& w : p.witness_gap) wgap.push_back(word_j(w));
  j["witness_s1"] = ws1;
  j["witness_gap"] = wgap;
  j["slope_s1"] = p.slope_s1;
  j["intercept_s1"] = p.intercept_s1;
  j["slope_gap"] = p.slope_gap;
  j["intercept_gap"] = p.intercept_gap;
  return j.dump(2);
}

std::string to_tsv(const GrowthProfile& p) {
  std::string out = "length\tmin_log_s1\tmin_gap\twitness_s1\twitness_gap\n";
  for (size_t n = 0; n < p.min_log_s1.size(); ++n) {
    out += std::to_string(n) + "\t" + std::to_string(p.min_log_s1[n]) + "\t" +
           std::to_string(p.min_gap[n]) + "\t" + word_j(p.witness_s1[n]).dump() +
           "\t" + word_j(p.witness_gap[n]).dump() + "\n";
  }
  return out;
}

std::string to_json(const Certificate& cert) {
  json j;
  j["c"] = cert.c;
  j["L0"] = vec3_j(cert.L0);
  j["net_step"] = cert.net_step;
  json family = json::array();
  for (const FamilyElement& e : cert.family) {
    json fe;
    fe["label"] = e.label;
    fe["matrix"] = mat3_j(e.mat);
    fe["inverse"] = e.inverse;
    family.push_back(fe);
  }
  j["family"] = family;
  json cones = json::array();
  for (const Cone& cone : cert.cones) {
    json balls = json::array();
    for (const Ball& b : cone.balls) {
      json bj;
      bj["center"] = vec3_j(b.center);
      bj["radius"] = b.radius;
      if (b.exact_center) {
        json ec = json::array();
        for (const Rat& x : *b.exact_center) ec.push_back(rat_str(x));
        bj["exact_center"] = ec;
      }
      balls.push_back(bj);
    }
    cones.push_back(balls);
  }
  j["cones"] = cones;
  j["margins"] = {{"disjoint", cert.margin_disjoint},
                  {"L0_outside", cert.margin_L0_outside},
                  {"maps_L0", cert.margin_maps_L0},
                  {"containment", cert.margin_containment},
                  {"expansion", cert.margin_expansion}};
  j["lipschitz_global"] = cert.lipschitz_global;
  j["lipschitz_effective"] = cert.lipschitz_effective;
  return j.dump(2);
}

Certificate certificate_from_json(const std::string& text) {
  const json j = json::parse(text);
  Certificate cert;
  cert.c = j.at("c").get<double>();
  const auto l0 = j.at("L0");
  cert.L0 = {l0[0].get<double>(), l0[1].get<double>(), l0[2].get<double>()};
  cert.net_step = j.at("net_step").get<double>();
  for (const auto& fe : j.at("family")) {
    FamilyElement e;
    e.label = fe.at("label").get<std::string>();
    e.mat = mat3_from(fe.at("matrix"));
    e.inverse = fe.at("inverse").get<size_t>();
    cert.family.push_back(e);
  }
  for (const auto& cj : j.at("cones")) {
    Cone cone;
    for (const auto& bj : cj) {
      Ball b;
      const auto c = bj.at("center");
      b.center = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()};
      b.radius = bj.at("radius").get<double>();
      if (bj.contains("exact_center")) {
        RatVec3 ec;
        for (size_t i = 0; i < 3; ++i)
          ec[i] = rat_parse(bj.at("exact_center")[i].get<std::string>());
        b.exact_center = ec;
      }
      cone.balls.push_back(b);
    }
    cert.cones.push_back(cone);
  }
  return cert;
}

std::string to_json(const CatalogEntry& entry) {
  json j;
  j["name"] = entry.name;
  j["provenance"] = entry.provenance;
  j["expected"] = entry.expected;
  if (entry.suspension) j["suspension"] = json::parse(to_json(*entry.suspension));
  if (entry.representation)
    j["representation"] = json::parse(to_json(*entry.representation));
  if (entry.float_representation) {
    json fr;
    fr["rank"] = entry.float_representation->gens.rank;
    fr["names"] = entry.float_representation->gens.names;
    json images = json::array();
    for (const Mat3d& m : entry.float_representation->images)
      images.push_back(mat3d_j(m));
    fr["images"] = images;
    j["float_representation"] = fr;
  }
  if (entry.f) j["f"] = mat3_j(*entry.f);
  if (entry.g) j["g"] = mat3_j(*entry.g);
  if (entry.power_n) j["power_n"] = entry.power_n;
  if (!entry.c_words.empty()) {
    json words = json::array();
    for (const Word& w : entry.c_words) words.push_back(word_j(w));
    j["c_words"] = words;
    j["p"] = entry.p;
  }
  if (entry.search_seed) j["search_seed"] = entry.search_seed;
  return j.dump(2);
}

std::string to_json(const UnipotentWitness& w) {
  json j;
  j["word"] = word_j(w.word);
  j["matrix"] = mat3d_j(w.matrix);
  j["residual"] = w.residual;
  j["charpoly_distance"] = w.charpoly_distance;
  j["t0"] = w.t0;
  j["p"] = w.p;
  j["q"] = w.q;
  json images = json::array();
  for (const Mat3d& m : w.snapshot.images) images.push_back(mat3d_j(m));
  j["snapshot_images"] = images;
  return j.dump(2);
}

std::string to_json(const RhoKWitness& w) {
  json j;
  j["word"] = word_j(w.word);
  j["matrix"] = mat3_j(w.matrix);
  j["residual"] = w.residual;
  j["approach_distance"] = w.approach_distance;
  j["correction_size"] = w.correction_size;
  j["gamma"] = word_j(w.gamma);
  j["q"] = w.q;
  json images = json::array();
  for (const RatMat3& m : w.perturbed_images) images.push_back(mat3_j(m));
  j["perturbed_images"] = images;
  return j.dump(2);
}

std::string to_json(const TauResult& r) {
  json j;
  json steps = json::array();
  for (const TauStep& s : r.steps) {
    json sj;
    sj["kind"] = s.kind;
    sj["p"] = s.p;
    sj["a"] = word_j(s.a);
    sj["b"] = word_j(s.b);
    sj["tau_a"] = rat_str(s.tau_a);
    sj["tau_b"] = rat_str(s.tau_b);
    sj["pair_matrix"] = {{s.pair_matrix[0][0], s.pair_matrix[0][1]},
                         {s.pair_matrix[1][0], s.pair_matrix[1][1]}};
    sj["det"] = s.det;
    steps.push_back(sj);
  }
  j["steps"] = steps;
  j["a_final"] = word_j(r.a_final);
  j["b_final"] = word_j(r.b_final);
  j["terminated"] = r.terminated;
  j["reason"] = r.reason;
  return j.dump(2);
}

std::string to_json(const LahnResult& r) {
  json j;
  j["inf_ratio"] = r.inf_ratio;
  j["witness"] = word_j(r.witness);
  j["anosov_consistent"] = r.anosov_consistent;
  j["words_considered"] = r.words_considered;
  return j.dump(2);
}

std::string to_json(const DfbEvidence& e) {
  json j;
  j["pass"] = e.pass;
  if (e.hyperbolicity_witness)
    j["hyperbolicity_witness"] = word_j(*e.hyperbolicity_witness);
  j["plane_slope"] = e.plane_profile.slope_s1;
  j["slope_positive"] = e.slope_positive;
  json uw = json::array();
  for (const Word& w : e.unipotent_witnesses) uw.push_back(word_j(w));
  j["unipotent_witnesses"] = uw;
  return j.dump(2);
}

std::string to_json(const CoverageReport& r) {
  json j;
  j["eta"] = r.eta;
  j["delta"] = r.delta;
  j["max_length"] = r.max_length;
  j["grid_size"] = r.grid_size;
  j["covered"] = r.covered;
  j["fraction"] = r.fraction;
  return j.dump(2);
}

std::string to_json(const FiniteIndexGenerators& fig) {
  json j;
  j["k"] = fig.k;
  json gens = json::array();
  for (const Word& w : fig.generators) gens.push_back(word_j(w));
  j["generators"] = gens;
  j["p"] = fig.p;
  j["index"] = fig.index;
  j["spanning_tree"] = fig.spanning_tree;
  j["a_perm"] = fig.automaton.a_perm;
  j["b_perm"] = fig.automaton.b_perm;
  return j.dump(2);
}

std::string to_json(const BalanceResult& r) {
  json j;
  j["eps_star"] = r.eps_star;
  j["log_ratio_residual"] = r.log_ratio_residual;
  j["lambda1"] = r.lambda1;
  j["L0"] = vec3_j(r.L0);
  j["containment_residual"] = r.containment_residual;
  j["scaled_generator"] = r.scaled.scaled_generator;
  j["eps"] = r.scaled.eps;
  return j.dump(2);
}

}  // namespace anosov
