#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annc/noncrossing.hpp"
#include "annc/rational.hpp"

namespace annc {

enum class SdTag { Disc, Annular, DiscHat };
const char* to_string(SdTag t);

struct SdElement {
  SdTag tag = SdTag::Disc;
  Permutation perm;
  AnnulusShape shape;

  std::string str() const;  // "(1,2)(3)", hatted elements get a trailing '^'
  friend bool operator==(const SdElement& a, const SdElement& b) {
    return a.tag == b.tag && a.perm == b.perm && a.shape == b.shape;
  }
};

SdElement sd_zero(const AnnulusShape& s);
SdElement sd_one(const AnnulusShape& s);
SdElement make_sd(SdTag tag, const Permutation& perm, const AnnulusShape& s);  // validates membership

// operational order: annular/disc below a hatted element via restriction and bridge containment
bool sd_leq(const SdElement& a, const SdElement& b);
// literal order: π ⪯ ρ̂ iff Kr(π) ⪰ Kr(ρ) in the unhatted poset
bool sd_leq_definitional(const SdElement& a, const SdElement& b);

SdElement kr_hat(const SdElement& a);
SdElement kr_hat_inverse(const SdElement& a);

// all elements in a linear extension (Disc, Annular, DiscHat; more cycles first)
std::vector<SdElement> sd_elements(const AnnulusShape& s);

struct MobiusTable {
  AnnulusShape shape;
  std::vector<SdElement> elements;
  std::map<std::pair<std::size_t, std::size_t>, Rational> mu;  // comparable pairs only
  std::size_t index_of(const SdElement& e) const;
  Rational at(std::size_t a, std::size_t b) const;  // 0 for incomparable
};

// guard for full tables (default p+q ≤ 7)
MobiusTable mobius_recursive(const AnnulusShape& s);

// μ(x, 1_{p,q}) for every element, by recursion from the top; cached, safe to share
struct TopColumn {
  std::vector<SdElement> elements;
  std::vector<Rational> mu;
  std::map<std::pair<int, Permutation>, std::size_t> index;  // (tag, perm) → position
  Rational get(SdTag tag, const Permutation& perm) const;
};
const TopColumn& mobius_to_top(const AnnulusShape& s);

// closed forms. Throws std::domain_error for incomparable pairs.
Rational mobius_closed(const SdElement& a, const SdElement& b);
// hatted case including the μ(π̂,ρ̂) and top-element terms of the inclusion–exclusion argument
Rational mobius_closed_completed(const SdElement& a, const SdElement& b);

struct MobiusDiscrepancy {
  SdElement a, b;
  Rational recursive, closed;
};
std::vector<MobiusDiscrepancy> mobius_discrepancies(const MobiusTable& t, bool completed = false);

Rational f_coefficient(int r, int s);
Rational f_bruteforce(int r, int s);

// (−1)^{k−1} C_{k−1} product over the blocks of a permutation
Rational catalan_sign_product(const Permutation& pi);

}  // namespace annc
