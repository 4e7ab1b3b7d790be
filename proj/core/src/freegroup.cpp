#include "anosovforge/freegroup.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace anosov {

GeneratorSet GeneratorSet::standard(int rank) {
  GeneratorSet g;
  g.rank = rank;
  for (int i = 0; i < rank; ++i) {
    if (i < 26)
      g.names.push_back(std::string(1, static_cast<char>('a' + i)));
    else
      g.names.push_back("x" + std::to_string(i + 1));
  }
  g.validate();
  return g;
}

void GeneratorSet::validate() const {
  if (rank < 2) throw std::invalid_argument("GeneratorSet: rank must be >= 2");
  if (names.size() != static_cast<size_t>(rank))
    throw std::invalid_argument("GeneratorSet: names/rank mismatch");
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size())
    throw std::invalid_argument("GeneratorSet: duplicate names");
}

Word reduce(const std::vector<int32_t>& letters, int rank) {
  Word out;
  out.reserve(letters.size());
  for (int32_t x : letters) {
    if (x == 0 || x > rank || x < -rank)
      throw std::out_of_range("reduce: letter out of range");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word concat(const Word& w1, const Word& w2) {
  Word out = w1;
  for (int32_t x : w2) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int32_t& x : out) x = -x;
  return out;
}

Word power(const Word& w, long e) {
  const Word base = e < 0 ? invert(w) : w;
  Word out;
  for (long i = 0, n = e < 0 ? -e : e; i < n; ++i) out = concat(out, base);
  return out;
}

Word commutator(const Word& w1, const Word& w2) {
  return concat(concat(w1, w2), concat(invert(w1), invert(w2)));
}

std::vector<long> abelianize(const Word& w, int rank) {
  std::vector<long> v(static_cast<size_t>(rank), 0);
  for (int32_t x : w) {
    const int idx = (x > 0 ? x : -x) - 1;
    if (idx < 0 || idx >= rank)
      throw std::out_of_range("abelianize: letter out of range");
    v[static_cast<size_t>(idx)] += x > 0 ? 1 : -1;
  }
  return v;
}

unsigned long long reduced_word_count(int rank, int length) {
  if (length < 0) throw std::invalid_argument("reduced_word_count: length < 0");
  if (length == 0) return 1;
  const unsigned long long k2 = 2ull * static_cast<unsigned long long>(rank);
  unsigned long long count = k2;
  for (int i = 1; i < length; ++i) {
    if (count > (~0ull) / (k2 - 1)) throw std::overflow_error("word count overflow");
    count *= k2 - 1;
  }
  return count;
}

namespace {

// Letters in lexicographic order: -k,...,-1,1,...,k.
void letters_in_order(int rank, std::vector<int32_t>& out) {
  out.clear();
  for (int i = -rank; i <= rank; ++i)
    if (i != 0) out.push_back(i);
}

void enumerate_rec(int rank, int remaining, Word& prefix,
                   const std::vector<int32_t>& letters,
                   const std::function<void(const Word&)>& fn) {
  if (remaining == 0) {
    fn(prefix);
    return;
  }
  for (int32_t x : letters) {
    if (!prefix.empty() && prefix.back() == -x) continue;
    prefix.push_back(x);
    enumerate_rec(rank, remaining - 1, prefix, letters, fn);
    prefix.pop_back();
  }
}

}  // namespace

void enumerate(int rank, int length,
               const std::function<void(const Word&)>& fn) {
  if (rank < 1) throw std::invalid_argument("enumerate: rank < 1");
  if (length < 0) throw std::invalid_argument("enumerate: length < 0");
  std::vector<int32_t> letters;
  letters_in_order(rank, letters);
  Word prefix;
  enumerate_rec(rank, length, prefix, letters, fn);
}

std::vector<Word> enumerate_all(int rank, int length) {
  std::vector<Word> out;
  enumerate(rank, length, [&](const Word& w) { out.push_back(w); });
  return out;
}

bool word_lex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string word_str(const Word& w, const GeneratorSet& gens) {
  if (w.empty()) return "1";
  std::string s;
  for (int32_t x : w) {
    const int idx = (x > 0 ? x : -x) - 1;
    s += gens.names.at(static_cast<size_t>(idx));
    if (x < 0) s += "^-1";
    s += " ";
  }
  s.pop_back();
  return s;
}

int CosetAutomaton::walk(const Word& w, int from) const {
  // Permutation inverses, computed once per call; automata here are tiny.
  const int n = states();
  std::vector<int> a_inv(static_cast<size_t>(n)), b_inv(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    a_inv[static_cast<size_t>(a_perm[static_cast<size_t>(s)])] = s;
    b_inv[static_cast<size_t>(b_perm[static_cast<size_t>(s)])] = s;
  }
  int s = from;
  for (int32_t x : w) {
    switch (x) {
      case 1: s = a_perm[static_cast<size_t>(s)]; break;
      case -1: s = a_inv[static_cast<size_t>(s)]; break;
      case 2: s = b_perm[static_cast<size_t>(s)]; break;
      case -2: s = b_inv[static_cast<size_t>(s)]; break;
      default:
        throw std::out_of_range("CosetAutomaton: alphabet is {a,b}");
    }
  }
  return s;
}

bool CosetAutomaton::transitive() const {
  const int n = states();
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int t : {a_perm[static_cast<size_t>(s)], b_perm[static_cast<size_t>(s)]}) {
      if (!seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = true;
        stack.push_back(t);
        ++visited;
      }
    }
  }
  return visited == n;
}

FiniteIndexGenerators finite_index_generators(int k) {
  if (k < 3) throw std::invalid_argument("finite_index_generators: k must be >= 3");

  // Covering graph with k-1 sheets over the wedge of two circles: the
  // a-edges fix the base sheet 0 and cycle the sheets 1..k-2; the b-edges
  // swap sheets 0 and 1 and fix the rest.
  const int sheets = k - 1;
  CosetAutomaton aut;
  aut.a_perm.resize(static_cast<size_t>(sheets));
  aut.b_perm.resize(static_cast<size_t>(sheets));
  aut.a_perm[0] = 0;
  for (int s = 1; s < sheets; ++s)
    aut.a_perm[static_cast<size_t>(s)] = s == sheets - 1 ? 1 : s + 1;
  for (int s = 0; s < sheets; ++s) aut.b_perm[static_cast<size_t>(s)] = s;
  aut.b_perm[0] = 1;
  if (sheets > 1) aut.b_perm[1] = 0;

  FiniteIndexGenerators out;
  out.k = k;
  out.index = sheets;
  out.p = k - 2;
  out.automaton = aut;
  out.spanning_tree =
      "b-edge from sheet 0 to sheet 1, then the a-edge chain through sheets 2.." +
      std::to_string(sheets - 1);

  // Basis read off the non-tree edges: c1 = a, c2 = b^2, c3 = b a^p b^-1,
  // and one b-loop generator per sheet j >= 2.
  const Word a{1}, b{2};
  out.generators.push_back(a);
  out.generators.push_back(concat(b, b));
  out.generators.push_back(concat(concat(b, power(a, out.p)), invert(b)));
  for (int j = 2; j <= sheets - 1; ++j) {
    const Word t = concat(b, power(a, j - 1));  // tree path to sheet j
    out.generators.push_back(concat(concat(t, b), invert(t)));
  }

  if (out.generators.size() != static_cast<size_t>(k))
    throw std::logic_error("finite_index_generators: basis size mismatch");

  // Nielsen-Schreier for a rank-2 base: rank = 1 + index * (2 - 1).
  if (k != 1 + out.index)
    throw std::logic_error("finite_index_generators: rank identity violated");
  if (!aut.transitive())
    throw std::logic_error("finite_index_generators: cover is not connected");
  for (const Word& c : out.generators)
    if (!aut.stabilizes_base(c))
      throw std::logic_error("finite_index_generators: generator leaves the subgroup");

  return out;
}

}  // namespace anosov
