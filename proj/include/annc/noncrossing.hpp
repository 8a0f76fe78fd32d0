#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "annc/partition.hpp"
#include "annc/permutation.hpp"

namespace annc {

struct AnnulusShape {
  int p = 1;
  int q = 1;
  int n() const { return p + q; }
  Permutation tau() const { return tau_pq(p, q); }
  bool first(int x) const { return x <= p; }  // x on the circle [p]
  friend bool operator==(const AnnulusShape&, const AnnulusShape&) = default;
};

// exhaustive-enumeration guard; ANNULAR_CUMULANTS_MAX_N overrides (capped at 12)
int enumeration_bound(int fallback = 10);

Permutation kreweras(const Permutation& pi, const Permutation& rho);          // π⁻¹ρ
Permutation kreweras_inverse(const Permutation& pi, const Permutation& rho);  // ρπ⁻¹
int euler_char(const Permutation& pi, const Permutation& rho);
int connected_components(const Permutation& pi, const Permutation& rho);  // #(Π(π)∨Π(ρ))

bool is_noncrossing_chi(const Permutation& pi, const Permutation& rho);
// Biane conditions for one-cycle ρ, annular conditions for two-cycle ρ
bool is_noncrossing_conditions(const Permutation& pi, const Permutation& rho);

bool is_disc_nc(const Permutation& pi, const AnnulusShape& s);
bool is_ann_nc(const Permutation& pi, const AnnulusShape& s);

std::vector<Permutation> enumerate_nc(const Permutation& rho);  // S_nc(ρ), canonical order
std::vector<Permutation> enumerate_nc(int n);
const std::vector<Permutation>& enumerate_disc_nc(const AnnulusShape& s);  // cached
const std::vector<Permutation>& enumerate_ann_nc(const AnnulusShape& s);   // cached

struct PsPair {
  SetPartition partition;
  Permutation perm;
};
std::vector<PsPair> enumerate_ps(const AnnulusShape& s);
std::vector<PsPair> enumerate_ps_prime(const AnnulusShape& s);
bool is_ps_prime(const PsPair& pair, const AnnulusShape& s);

// π|_τ: restriction to each circle
Permutation restrict_to_circles(const Permutation& pi, const AnnulusShape& s);

std::vector<std::vector<int>> bridges(const Permutation& pi, const AnnulusShape& s);
// cycles of Kr⁻¹(π₀) covering the bridge elements of Kr⁻¹(π); first lies in [p]
std::pair<std::vector<int>, std::vector<int>> outside_faces(const Permutation& pi, const AnnulusShape& s);
// same with Kr in place of Kr⁻¹
std::pair<std::vector<int>, std::vector<int>> outside_faces_kr(const Permutation& pi, const AnnulusShape& s);

Permutation opposite(const Permutation& pi, const AnnulusShape& s);

// all permutations on a ∪ b, noncrossing on the two cycles (a)(b), with every cycle a bridge
std::vector<Permutation> all_bridge_permutations(const std::vector<int>& a, const std::vector<int>& b);

enum class SingletClass { HasAdjacentPair, HasTwoSinglets, Spoke, Other };
const char* to_string(SingletClass c);
// rho is τ_n (one cycle) or τ_{p,q}
SingletClass singlet_classify(const Permutation& pi, const Permutation& rho);

}  // namespace annc
