#pragma once

#include <compare>
#include <functional>
#include <string>
#include <vector>

#include "annc/rational.hpp"

namespace annc {

class Permutation;

class SetPartition {
 public:
  SetPartition() = default;
  explicit SetPartition(std::vector<std::vector<int>> blocks);

  static SetPartition singletons(const std::vector<int>& ground);
  static SetPartition one(const std::vector<int>& ground);
  static SetPartition of(const Permutation& pi);  // Π(π)
  static SetPartition parse(const std::string& text);  // "[[1,2],[3]]"

  const std::vector<int>& ground() const { return ground_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_of(int x) const;  // index into blocks()
  SetPartition restrict_to(const std::vector<int>& X) const;  // 𝒰|_X
  std::vector<int> block_sizes() const;  // sorted descending
  std::string str() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
  friend auto operator<=>(const SetPartition& a, const SetPartition& b) {
    return a.blocks_ <=> b.blocks_;
  }

 private:
  std::vector<int> ground_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> label_;  // block index per ground position
};

SetPartition join(const SetPartition& u, const SetPartition& v);
SetPartition meet(const SetPartition& u, const SetPartition& v);
bool leq(const SetPartition& u, const SetPartition& v);  // refinement

// μ_𝒫(u, v) via the closed product; throws std::domain_error when u ⋠ v
Rational mobius_partition(const SetPartition& u, const SetPartition& v);

// #u − #(u∨w) = #(u∨v) − #(u∨v∨w)
bool in_gamma_set(const SetPartition& u, const SetPartition& v, const SetPartition& w);

std::vector<SetPartition> all_partitions(const std::vector<int>& ground);
// all X with lo ⪯ X ⪯ hi
std::vector<SetPartition> interval(const SetPartition& lo, const SetPartition& hi);

}  // namespace annc
