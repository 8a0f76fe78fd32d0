#include "annc/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "annc/permutation.hpp"

namespace annc {

SetPartition::SetPartition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  for (auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("empty block");
    std::sort(b.begin(), b.end());
    ground_.insert(ground_.end(), b.begin(), b.end());
  }
  std::sort(blocks_.begin(), blocks_.end());
  std::sort(ground_.begin(), ground_.end());
  if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end())
    throw std::invalid_argument("blocks are not disjoint");
  label_.resize(ground_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    for (int x : blocks_[k])
      label_[std::lower_bound(ground_.begin(), ground_.end(), x) - ground_.begin()] = static_cast<int>(k);
}

SetPartition SetPartition::singletons(const std::vector<int>& ground) {
  std::vector<std::vector<int>> b;
  for (int x : ground) b.push_back({x});
  return SetPartition(std::move(b));
}

SetPartition SetPartition::one(const std::vector<int>& ground) {
  if (ground.empty()) return SetPartition();
  return SetPartition({ground});
}

SetPartition SetPartition::of(const Permutation& pi) { return SetPartition(pi.cycles()); }

SetPartition SetPartition::parse(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.is_object()) j = j.at("blocks");
  return SetPartition(j.get<std::vector<std::vector<int>>>());
}

int SetPartition::block_of(int x) const {
  auto it = std::lower_bound(ground_.begin(), ground_.end(), x);
  if (it == ground_.end() || *it != x) throw std::out_of_range("element not in partition ground: " + std::to_string(x));
  return label_[it - ground_.begin()];
}

SetPartition SetPartition::restrict_to(const std::vector<int>& X) const {
  std::map<int, std::vector<int>> by;
  for (int x : X) by[block_of(x)].push_back(x);
  std::vector<std::vector<int>> b;
  for (auto& [k, v] : by) b.push_back(std::move(v));
  return SetPartition(std::move(b));
}

std::vector<int> SetPartition::block_sizes() const {
  std::vector<int> s;
  for (auto& b : blocks_) s.push_back(static_cast<int>(b.size()));
  std::sort(s.rbegin(), s.rend());
  return s;
}

std::string SetPartition::str() const { return nlohmann::json(blocks_).dump(); }

namespace {

void check_ground(const SetPartition& u, const SetPartition& v) {
  if (u.ground() != v.ground()) throw std::invalid_argument("partitions on different ground sets");
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

SetPartition from_labels(const std::vector<int>& ground, Dsu& d) {
  std::map<int, std::vector<int>> by;
  for (std::size_t i = 0; i < ground.size(); ++i) by[d.find(static_cast<int>(i))].push_back(ground[i]);
  std::vector<std::vector<int>> b;
  for (auto& [k, v] : by) b.push_back(std::move(v));
  return SetPartition(std::move(b));
}

}  // namespace

SetPartition join(const SetPartition& u, const SetPartition& v) {
  check_ground(u, v);
  const auto& g = u.ground();
  Dsu d(g.size());
  auto idx = [&](int x) { return static_cast<int>(std::lower_bound(g.begin(), g.end(), x) - g.begin()); };
  for (const auto* w : {&u, &v})
    for (const auto& b : w->blocks())
      for (std::size_t i = 1; i < b.size(); ++i) d.unite(idx(b[0]), idx(b[i]));
  return from_labels(g, d);
}

SetPartition meet(const SetPartition& u, const SetPartition& v) {
  check_ground(u, v);
  std::map<std::pair<int, int>, std::vector<int>> by;
  for (int x : u.ground()) by[{u.block_of(x), v.block_of(x)}].push_back(x);
  std::vector<std::vector<int>> b;
  for (auto& [k, w] : by) b.push_back(std::move(w));
  return SetPartition(std::move(b));
}

bool leq(const SetPartition& u, const SetPartition& v) {
  check_ground(u, v);
  for (const auto& b : u.blocks()) {
    int k = v.block_of(b[0]);
    for (int x : b)
      if (v.block_of(x) != k) return false;
  }
  return true;
}

Rational mobius_partition(const SetPartition& u, const SetPartition& v) {
  if (!leq(u, v)) throw std::domain_error("mobius_partition: not comparable");
  Rational r = 1;
  for (const auto& V : v.blocks()) {
    long k = u.restrict_to(V).num_blocks();
    r *= factorial(k - 1);
    if ((k - 1) % 2) r = -r;
  }
  return r;
}

bool in_gamma_set(const SetPartition& u, const SetPartition& v, const SetPartition& w) {
  int lhs = u.num_blocks() - join(u, w).num_blocks();
  auto uv = join(u, v);
  int rhs = uv.num_blocks() - join(uv, w).num_blocks();
  if (lhs < rhs) throw std::logic_error("in_gamma_set: geodesic inequality violated");
  return lhs == rhs;
}

std::vector<SetPartition> all_partitions(const std::vector<int>& ground) {
  std::vector<SetPartition> out;
  std::size_t n = ground.size();
  if (n == 0) return {SetPartition()};
  std::vector<int> a(n, 0), mx(n, 0);
  for (;;) {
    std::vector<std::vector<int>> b;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<std::size_t>(a[i]) >= b.size()) b.resize(a[i] + 1);
      b[a[i]].push_back(ground[i]);
    }
    out.emplace_back(std::move(b));
    // next restricted growth string
    std::size_t i = n - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    for (std::size_t j = i; j < n; ++j) {
      if (j > i) a[j] = 0;
      mx[j] = std::max(mx[j - 1], a[j]);
    }
  }
  return out;
}

std::vector<SetPartition> interval(const SetPartition& lo, const SetPartition& hi) {
  if (!leq(lo, hi)) return {};
  // for each hi-block, the lo-blocks it contains; partition those
  std::vector<std::vector<std::vector<std::vector<int>>>> choices;
  for (const auto& H : hi.blocks()) {
    std::vector<int> ids;
    auto sub = lo.restrict_to(H);
    for (int k = 0; k < sub.num_blocks(); ++k) ids.push_back(k);
    std::vector<std::vector<std::vector<int>>> opts;
    for (const auto& P : all_partitions(ids)) {
      std::vector<std::vector<int>> merged;
      for (const auto& pb : P.blocks()) {
        std::vector<int> m;
        for (int k : pb) m.insert(m.end(), sub.blocks()[k].begin(), sub.blocks()[k].end());
        merged.push_back(std::move(m));
      }
      opts.push_back(std::move(merged));
    }
    choices.push_back(std::move(opts));
  }
  std::vector<SetPartition> out;
  std::vector<std::size_t> at(choices.size(), 0);
  for (;;) {
    std::vector<std::vector<int>> b;
    for (std::size_t h = 0; h < choices.size(); ++h)
      b.insert(b.end(), choices[h][at[h]].begin(), choices[h][at[h]].end());
    out.emplace_back(std::move(b));
    std::size_t h = 0;
    while (h < choices.size() && ++at[h] == choices[h].size()) at[h++] = 0;
    if (h == choices.size()) break;
  }
  return out;
}

}  // namespace annc
