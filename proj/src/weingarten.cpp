#include "annc/weingarten.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace annc {

std::vector<PairPartition> all_pairings(int n) {
  if (n < 0 || n > 6) throw std::length_error("pairing enumeration supports n <= 6");
  std::vector<PairPartition> out;
  PairPartition cur(2 * n, -1);
  auto rec = [&](auto&& self) -> void {
    int a = 0;
    while (a < 2 * n && cur[a] >= 0) ++a;
    if (a == 2 * n) {
      out.push_back(cur);
      return;
    }
    for (int b = a + 1; b < 2 * n; ++b) {
      if (cur[b] >= 0) continue;
      cur[a] = b;
      cur[b] = a;
      self(self);
      cur[a] = cur[b] = -1;
    }
  };
  rec(rec);
  return out;
}

PairPartition identity_pairing(int n) {
  PairPartition p(2 * n);
  for (int i = 0; i < 2 * n; ++i) p[i] = i ^ 1;
  return p;
}

std::vector<int> coset_type(const PairPartition& a, const PairPartition& b) {
  std::vector<char> seen(a.size(), 0);
  std::vector<int> sizes;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    int x = static_cast<int>(s);
    do {
      seen[x] = 1;
      int y = a[x];
      seen[y] = 1;
      ++len;
      x = b[y];
    } while (x != static_cast<int>(s));
    sizes.push_back(len);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

int num_loops(const PairPartition& a, const PairPartition& b) {
  return static_cast<int>(coset_type(a, b).size());
}

std::vector<std::vector<Rational>> gram_matrix(int n, long N) {
  auto ps = all_pairings(n);
  std::vector<std::vector<Rational>> g(ps.size(), std::vector<Rational>(ps.size()));
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j) g[i][j] = rpow(Rational(N), num_loops(ps[i], ps[j]));
  return g;
}

namespace {

// exact Gaussian elimination; returns false on a zero pivot
bool solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

}  // namespace

WgContext::WgContext(int n, long N) : n_(n), N_(N) {
  if (n < 1 || n > 5) throw std::length_error("Weingarten supports 1 <= n <= 5");
  if (N < 1) throw std::invalid_argument("dimension must be positive");
  auto ps = all_pairings(n);
  auto id = identity_pairing(n);
  // rows: one pairing per coset type relative to id; unknowns: Wg per coset type
  std::map<std::vector<int>, std::size_t> col;
  std::vector<std::vector<int>> types;
  std::vector<std::size_t> rep;
  std::vector<std::size_t> type_of(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto t = coset_type(ps[i], id);
    auto [it, fresh] = col.emplace(t, types.size());
    if (fresh) {
      types.push_back(t);
      rep.push_back(i);
    }
    type_of[i] = it->second;
  }
  const std::size_t k = types.size();
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
  std::vector<Rational> b(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < ps.size(); ++j) a[r][type_of[j]] += rpow(Rational(N), num_loops(ps[rep[r]], ps[j]));
    if (types[r] == std::vector<int>(n, 1)) b[r] = 1;
  }
  std::vector<Rational> x;
  if (!solve(a, b, x))
    throw std::domain_error("singular Gram matrix at N=" + std::to_string(N) + ", n=" + std::to_string(n));
  for (std::size_t r = 0; r < k; ++r) table_[types[r]] = x[r];
}

const Rational& WgContext::by_type(const std::vector<int>& type) const {
  auto it = table_.find(type);
  if (it == table_.end()) throw std::invalid_argument("not a coset type of size n");
  return it->second;
}

const WgContext& wg_context(int n, long N) {
  static std::mutex mu;
  static std::map<std::pair<int, long>, std::unique_ptr<WgContext>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, N}];
  if (!slot) slot = std::make_unique<WgContext>(n, N);
  return *slot;
}

Rational wg_normalized(const std::vector<int>& block_sizes, long N) {
  std::vector<int> t(block_sizes);
  std::sort(t.rbegin(), t.rend());
  int n = 0;
  for (int s : t) n += s;
  long k = 2L * n - static_cast<long>(t.size());
  return rpow(Rational(N), k) * wg_context(n, N).by_type(t);
}

Rational wg_normalized(const SetPartition& u, long N) { return wg_normalized(u.block_sizes(), N); }

Rational wg_cumulant(const SetPartition& u, const SetPartition& v, const SetPartition& w, long N) {
  if (!leq(u, v) || !leq(v, w)) throw std::invalid_argument("wg_cumulant needs u <= v <= w");
  Rational total = 0;
  for (const auto& x : interval(v, w)) {
    Rational term = mobius_partition(x, w);
    for (const auto& blk : x.blocks()) term *= wg_normalized(u.restrict_to(blk), N);
    total += term;
  }
  return total;
}

namespace {

Rational gamma_impl(const SetPartition& u, const SetPartition& v, bool sp) {
  if (!leq(u, v)) throw std::invalid_argument("gamma needs u <= v");
  Rational g = 1;
  for (const auto& blk : v.blocks()) {
    auto r = u.restrict_to(blk);
    long V = static_cast<long>(blk.size()), k = r.num_blocks();
    Rational f = factorial(2 * V + k - 3) / factorial(2 * V);
    f *= sp ? Rational(2) : rpow(Rational(2), 2 * k - 1);
    if ((V - k) % 2) f = -f;
    for (const auto& b : r.blocks()) {
      long s = static_cast<long>(b.size());
      f *= factorial(2 * s - 1) / (factorial(s - 1) * factorial(s - 1));
    }
    g *= f;
  }
  return g;
}

}  // namespace

Rational gamma(const SetPartition& u, const SetPartition& v) { return gamma_impl(u, v, false); }
Rational gamma_sp(const SetPartition& u, const SetPartition& v) { return gamma_impl(u, v, true); }

}  // namespace annc
