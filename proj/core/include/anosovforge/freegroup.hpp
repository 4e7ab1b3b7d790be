#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace anosov {

/// A reduced word in a free group. Letter i > 0 is generator i, letter
/// -i is its inverse; the empty vector is the identity.
using Word = std::vector<int32_t>;

struct GeneratorSet {
  int rank = 2;
  std::vector<std::string> names;  // size == rank, unique

  static GeneratorSet standard(int rank);  // names "a","b","c",...
  void validate() const;                   // rank >= 2, names unique
};

/// Free reduction of an arbitrary letter sequence. Throws on letters
/// outside [-rank, rank] \ {0}.
Word reduce(const std::vector<int32_t>& letters, int rank);

Word concat(const Word& w1, const Word& w2);
Word invert(const Word& w);
Word power(const Word& w, long e);
/// Reduced form of w1 w2 w1^-1 w2^-1.
Word commutator(const Word& w1, const Word& w2);

/// Signed letter counts per generator.
std::vector<long> abelianize(const Word& w, int rank);

/// Number of reduced words of length exactly n: 2k(2k-1)^(n-1), n >= 1.
/// Throws std::overflow_error if the count exceeds 2^63-1.
unsigned long long reduced_word_count(int rank, int length);

/// Visit all reduced words of length exactly n once, in lexicographic
/// order of the signed letter sequences (-k < ... < -1 < 1 < ... < k).
void enumerate(int rank, int length, const std::function<void(const Word&)>& fn);

/// All reduced words of length exactly n, lexicographic order.
std::vector<Word> enumerate_all(int rank, int length);

bool word_lex_less(const Word& a, const Word& b);

std::string word_str(const Word& w, const GeneratorSet& gens);

/// Deterministic coset automaton on a two-letter alphabet {a=1, b=2}:
/// states are cosets, transitions are permutations.
struct CosetAutomaton {
  std::vector<int> a_perm;  // state -> state under a
  std::vector<int> b_perm;  // state -> state under b

  int states() const { return static_cast<int>(a_perm.size()); }
  /// Walk from `from`; letters +/-1 act by a_perm, +/-2 by b_perm.
  int walk(const Word& w, int from = 0) const;
  bool stabilizes_base(const Word& w) const { return walk(w) == 0; }
  bool transitive() const;
};

/// Free generators of the standard index-(k-1) subgroup of <a,b> read off
/// the (k-1)-sheeted cover of the wedge of two circles.
struct FiniteIndexGenerators {
  int k = 0;                     // rank of the subgroup
  std::vector<Word> generators;  // k words over the rank-2 alphabet
  long p = 0;                    // exponent in c3 = b a^p b^-1
  int index = 0;                 // subgroup index, = k-1
  CosetAutomaton automaton;
  std::string spanning_tree;     // which tree was used to read the basis
};

/// Requires k >= 3. The result is verified against the coset automaton
/// (membership of every generator, transitivity, Nielsen-Schreier count).
FiniteIndexGenerators finite_index_generators(int k);

}  // namespace anosov
