#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace annc {

// Bijection on an explicit, sorted ground set of integers (may contain negatives).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> ground);  // identity on ground
  Permutation(std::vector<int> ground, std::vector<int> image);

  // ground must be sorted and image a bijection onto it; not checked
  static Permutation trusted(std::vector<int> ground, std::vector<int> image);
  static Permutation identity(int n);
  // ground defaults to the union of the cycle entries
  static Permutation from_cycles(const std::vector<std::vector<int>>& cycles,
                                 std::vector<int> ground = {});
  static Permutation parse(std::string_view text, std::vector<int> ground = {});

  int operator()(int x) const { return image_[index(x)]; }
  std::size_t index(int x) const;
  bool contains(int x) const;

  const std::vector<int>& ground() const { return ground_; }
  const std::vector<int>& images() const { return image_; }
  std::size_t size() const { return ground_.size(); }

  // canonical: each cycle starts at its smallest element, cycles sorted by that element
  std::vector<std::vector<int>> cycles() const;
  int num_cycles() const;
  Permutation inverse() const;
  bool is_identity() const;
  std::string str() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.ground_ == b.ground_ && a.image_ == b.image_;
  }
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    if (auto c = a.ground_ <=> b.ground_; c != 0) return c;
    return a.image_ <=> b.image_;
  }

 private:
  void setup();

  std::vector<int> ground_;
  std::vector<int> image_;
  int lo_ = 0;
  bool contiguous_ = true;
};

// (a∘b)(x) = a(b(x))
Permutation compose(const Permutation& a, const Permutation& b);
inline Permutation operator*(const Permutation& a, const Permutation& b) { return compose(a, b); }

// first return map of π on J
Permutation induced(const Permutation& pi, const std::vector<int>& J);

// extend to a larger ground set by fixing the new points
Permutation extend(const Permutation& pi, const std::vector<int>& ground);

Permutation tau_n(int n);
Permutation tau_pq(int p, int q);

std::vector<int> range(int lo, int hi);  // [lo, hi]

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const;
};

}  // namespace annc
