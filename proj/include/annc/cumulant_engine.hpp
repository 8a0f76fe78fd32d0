#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "annc/noncrossing.hpp"
#include "annc/rational.hpp"

namespace annc {

struct Letter {
  char symbol = 'a';
  bool transposed = false;
  bool centred = false;  // x − φ₁(x)1, expanded on evaluation
  int algebra = 0;       // subalgebra tag, not part of the key

  Letter t() const {
    Letter l = *this;
    l.transposed = !l.transposed;
    return l;
  }
  friend bool operator==(const Letter& a, const Letter& b) {
    return a.symbol == b.symbol && a.transposed == b.transposed && a.centred == b.centred;
  }
};

using Word = std::vector<Letter>;

// "ab'c": letters a–z, ' marks a transpose, ~ before a letter centres it
Word parse_word(const std::string& text);
std::string word_str(const Word& w);
Word transpose(const Word& w);  // (x₁⋯xₙ)ᵗ = xₙᵗ⋯x₁ᵗ

// canonical keys: α₁ up to rotation and reverse-transpose, α₂ up to rotation of each side and swap
std::string key1(const Word& w);
std::string key2(const Word& a, const Word& b);

using Fill1 = std::function<Rational(const Word&)>;
using Fill2 = std::function<Rational(const Word&, const Word&)>;

// Tables of first- and second-order values on canonical keys. A missing key throws
// std::out_of_range unless fill functions were installed; filled values are memoised,
// so a filled table must not be shared between threads.
class WordTable {
 public:
  void set1(const Word& w, Rational v) {
    v.canonicalize();
    t1_[key1(w)] = v;
  }
  void set2(const Word& a, const Word& b, Rational v) {
    v.canonicalize();
    t2_[key2(a, b)] = v;
  }
  void set_fill(Fill1 f1, Fill2 f2) {
    fill1_ = std::move(f1);
    fill2_ = std::move(f2);
  }
  const Rational& get1(const Word& w) const;
  const Rational& get2(const Word& a, const Word& b) const;
  const std::map<std::string, Rational>& table1() const { return t1_; }
  const std::map<std::string, Rational>& table2() const { return t2_; }

  std::string to_json(const char* name1, const char* name2) const;
  void load_json(const std::string& text, const char* name1, const char* name2);

 private:
  mutable std::map<std::string, Rational> t1_, t2_;
  Fill1 fill1_;
  Fill2 fill2_;
};

// α₁ = φ₁ on cyclic words, α₂ = φ₂ on pairs; centred letters are expanded multilinearly
class MomentOracle : public WordTable {
 public:
  Rational alpha1(const Word& w) const;
  Rational alpha2(const Word& a, const Word& b) const;
  std::string to_json() const { return WordTable::to_json("alpha1", "alpha2"); }
  static MomentOracle from_json(const std::string& text);
};

class CumulantTable : public WordTable {
 public:
  const Rational& kappa1(const Word& w) const { return get1(w); }
  const Rational& kappa2(const Word& a, const Word& b) const { return get2(a, b); }
  std::string to_json() const { return WordTable::to_json("kappa1", "kappa2"); }
  static CumulantTable from_json(const std::string& text);
};

// moments computed on demand from a cumulant table (which must outlive the oracle)
MomentOracle lazy_moments(const CumulantTable& k);
// deterministic pseudo-random entries in [−range, range] with small denominators, per key and seed;
// words touching two algebras get 0 when zero_mixed is set
CumulantTable random_cumulants(unsigned long seed, bool zero_mixed, int range = 5);

inline constexpr int kMaxFreeLength = 8;
inline constexpr int kMaxSecondOrder = 7;

// first order
Rational free_cumulant(const MomentOracle& m, const Word& w);
Rational free_moment(const CumulantTable& k, const Word& w);

// second order
Rational kappa_pq(const MomentOracle& m, const Word& xs, const Word& ys);
Rational alpha_pq(const CumulantTable& k, const Word& xs, const Word& ys);

// whole-table transforms over every key present
CumulantTable cumulants_from_moments(const MomentOracle& m);
MomentOracle moments_from_cumulants(const CumulantTable& k);

// (𝒰,π) ∈ PS′(p,q) forms
Rational alpha_upi_direct(const MomentOracle& m, const PsPair& up, const Word& xs, const Word& ys);
Rational kappa_upi_direct(const CumulantTable& k, const PsPair& up, const Word& xs, const Word& ys);
// sum over annular and PS′ terms below 𝒰
Rational alpha_upi(const CumulantTable& k, const PsPair& up, const Word& xs, const Word& ys);
// κ over the rest of π times κ_{r,s} on the nontrivial block, evaluated from moments
Rational kappa_upi(const MomentOracle& m, const PsPair& up, const Word& xs, const Word& ys);

enum class SpokeReading {
  Printed,  // y index τ^{∓k}(i) as written, no transposes
  Diagram   // spokes of the annulus: x_i y_{k−i} plus x_i y_{k+i}ᵗ
};
Rational spoke_formula(const MomentOracle& m, const Word& xs, const Word& ys,
                       SpokeReading reading = SpokeReading::Printed);

// the word pairs of a cyclically alternating battery over the given letters
struct FreenessFailure {
  Word xs, ys;
  Rational moment, spoke;
};
struct FreenessReport {
  int checked_first = 0, checked_second = 0, checked_converse = 0;
  std::vector<FreenessFailure> failures;       // second-order moment vs spoke formula
  std::vector<std::string> first_order_failures;
  std::vector<std::string> converse_failures;  // mixed κ that did not vanish
};
// letters carry their algebra tag; joint moments come from the cumulant table with mixed entries zero
FreenessReport freeness_roundtrip_test(const std::vector<Letter>& alphabet, const CumulantTable& within,
                                       int max_len, SpokeReading reading);

// every canonical key up to max_len letters (pairs: total length), values from gen(key)
MomentOracle make_moment_oracle(const std::vector<Letter>& alphabet, int max_len,
                                const std::function<Rational(const std::string&)>& gen);

std::vector<Word> all_words(const std::vector<Letter>& alphabet, int len);  // letters and their transposes

}  // namespace annc

