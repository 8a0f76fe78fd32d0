#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "annc/noncrossing.hpp"
#include "annc/partition.hpp"
#include "annc/permutation.hpp"

namespace annc {

struct PremapError : std::invalid_argument {
  PremapError(const std::string& what, int k) : std::invalid_argument(what), k(k) {}
  int k;  // offending point
};

// Signed permutation on ±I with π(k) = −π⁻¹(−k) and no cycle holding both k and −k.
class Premap {
 public:
  Premap() = default;
  explicit Premap(Permutation map);  // validates, throws PremapError

  // one representative cycle per mirror pair; mirrors are added
  static Premap from_half(const std::vector<std::vector<int>>& cycles);
  // σ on positives, its mirror on negatives
  static Premap from_permutation(const Permutation& sigma);
  static Premap identity(const std::vector<int>& support);
  static Premap parse(const std::string& text);  // full or half cycle notation

  const Permutation& map() const { return map_; }
  int operator()(int x) const { return map_(x); }
  const std::vector<int>& support() const { return support_; }  // I, positive
  int n() const { return static_cast<int>(support_.size()); }
  Premap inverse() const;
  Premap restrict_to(const std::vector<int>& J) const;  // π|_J; J a union of blocks of Π(π)
  std::string str() const;

  friend bool operator==(const Premap& a, const Premap& b) { return a.map_ == b.map_; }
  friend auto operator<=>(const Premap& a, const Premap& b) { return a.map_ <=> b.map_; }

 private:
  Permutation map_;
  std::vector<int> support_;
};

// first k violating an axiom, if any
std::optional<int> premap_violation(const Permutation& m);
bool validate(const Permutation& m);

SetPartition pairing_partition(const Premap& m);  // Π(m)
Permutation fd(const Premap& m);                  // signed ground, one of ±k each

// Kr with respect to σ ∈ S(I), or FD(ρ) for a premap base ρ
Premap premap_kreweras(const Premap& m, const Permutation& tau);
Premap premap_kreweras(const Premap& m, const Premap& rho);
int premap_euler(const Premap& m, const Permutation& rho);
int premap_euler(const Premap& m, const Premap& rho);

// PM(I) via pairings of ±I; |PM(n)| = (2n−1)!!
std::vector<Premap> all_premaps(const std::vector<int>& support);
const std::vector<Premap>& all_premaps(int n);  // cached

bool is_pm_nc(const Premap& m, const Permutation& tau);
std::vector<Premap> enumerate_pm_nc(const Permutation& tau);

struct PpmPair {
  SetPartition partition;
  Premap premap;
};
bool is_ppm_prime(const PpmPair& pair, const Permutation& tau);
std::vector<PpmPair> enumerate_ppm_prime(const Permutation& tau);

enum class PremapFamily { DiscLike, AnnLike, FlippedAnnLike };
const char* to_string(PremapFamily f);

struct Trisection {
  PremapFamily family;
  Permutation perm;  // π′ ∈ S(p+q)
};
// throws std::invalid_argument when m fits no family
Trisection trisect(const Premap& m, const AnnulusShape& s);
Premap untrisect(const Trisection& t, const AnnulusShape& s);

}  // namespace annc
