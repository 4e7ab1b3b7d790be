#include "anosovforge/rat.hpp"

#include <stdexcept>

namespace anosov {

Rat rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_parse: empty string");
  mpq_class r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("rat_parse: malformed rational '" + s + "'");
  if (r.get_den() == 0)
    throw std::invalid_argument("rat_parse: zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double rat_d(const Rat& r) { return r.get_d(); }

std::optional<Rat> rat_sqrt_exact(const Rat& r) {
  if (sgn(r) < 0) return std::nullopt;
  const mpz_class num = r.get_num(), den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  Rat out(sn, sd);
  out.canonicalize();
  return out;
}

int sign(const Rat& r) { return sgn(r); }

}  // namespace anosov
