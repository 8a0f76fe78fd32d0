#pragma once

#include <map>
#include <vector>

#include "annc/partition.hpp"
#include "annc/rational.hpp"

namespace annc {

// perfect matching of {0,…,2n−1}: partner[i] is the point paired with i
using PairPartition = std::vector<int>;

std::vector<PairPartition> all_pairings(int n);  // (2n−1)!! of them
PairPartition identity_pairing(int n);           // {0,1}{2,3}…
int num_loops(const PairPartition& a, const PairPartition& b);  // #(a∨b)
// half block sizes of a∨b, descending
std::vector<int> coset_type(const PairPartition& a, const PairPartition& b);

std::vector<std::vector<Rational>> gram_matrix(int n, long N);  // N^{#(σ∨τ)}

// Orthogonal Weingarten values at fixed n and N, one per coset type.
class WgContext {
 public:
  WgContext(int n, long N);  // throws std::domain_error if the Gram matrix is singular

  int n() const { return n_; }
  long N() const { return N_; }
  const Rational& by_type(const std::vector<int>& type) const;
  Rational wg_std(const PairPartition& a, const PairPartition& b) const {
    return by_type(coset_type(a, b));
  }
  const std::map<std::vector<int>, Rational>& table() const { return table_; }

 private:
  int n_;
  long N_;
  std::map<std::vector<int>, Rational> table_;
};

const WgContext& wg_context(int n, long N);  // cached, thread-safe

// wg(𝒰) = N^{2n−#𝒰} Wg at coset type given by the block sizes of 𝒰
Rational wg_normalized(const SetPartition& u, long N);
Rational wg_normalized(const std::vector<int>& block_sizes, long N);

// Möbius-convolved cumulant over v ⪯ X ⪯ w; requires u ⪯ v ⪯ w
Rational wg_cumulant(const SetPartition& u, const SetPartition& v, const SetPartition& w, long N);
inline Rational wg_cumulant(const SetPartition& u, const SetPartition& w, long N) {
  return wg_cumulant(u, u, w, N);
}

Rational gamma(const SetPartition& u, const SetPartition& v);
Rational gamma_sp(const SetPartition& u, const SetPartition& v);

}  // namespace annc
