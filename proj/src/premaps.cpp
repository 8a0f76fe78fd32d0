#include "annc/premaps.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace annc {

namespace {

std::vector<int> signed_ground(const std::vector<int>& support) {
  std::vector<int> g;
  for (auto it = support.rbegin(); it != support.rend(); ++it) g.push_back(-*it);
  g.insert(g.end(), support.begin(), support.end());
  return g;
}

std::vector<int> mirror(const std::vector<int>& c) {
  std::vector<int> m(c.rbegin(), c.rend());
  for (int& x : m) x = -x;
  return m;
}

// rotate so the entry of least absolute value comes first
std::vector<int> root_at_min_abs(std::vector<int> c) {
  auto it = std::min_element(c.begin(), c.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
  std::rotate(c.begin(), it, c.end());
  return c;
}

Premap unchecked(Permutation m) { return Premap(std::move(m)); }

// A∘m∘B with B = f on S, A = −f⁻¹ on −S
Permutation kr_face(const Permutation& m, const Permutation& f) {
  const auto& g = m.ground();
  const auto finv = f.inverse();
  std::vector<int> img(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    int x = g[i];
    int y = f.contains(x) ? f(x) : x;
    int z = m(y);
    img[i] = f.contains(-z) ? -finv(-z) : z;
  }
  return Permutation::trusted(g, std::move(img));
}

}  // namespace

std::optional<int> premap_violation(const Permutation& m) {
  std::vector<int> order = m.ground();
  std::sort(order.begin(), order.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b;
  });
  for (int k : order) {
    if (k == 0 || !m.contains(-k)) return k;
    if (m(-m(k)) != -k) return k;
  }
  for (const auto& c : m.cycles()) {
    std::set<int> s(c.begin(), c.end());
    int worst = 0;
    for (int x : c)
      if (s.count(-x) && (worst == 0 || std::abs(x) < std::abs(worst))) worst = std::abs(x);
    if (worst) return worst;
  }
  return std::nullopt;
}

bool validate(const Permutation& m) { return !premap_violation(m).has_value(); }

Premap::Premap(Permutation map) : map_(std::move(map)) {
  if (auto k = premap_violation(map_))
    throw PremapError("premap axiom fails at k=" + std::to_string(*k), *k);
  for (int x : map_.ground())
    if (x > 0) support_.push_back(x);
}

Premap Premap::from_half(const std::vector<std::vector<int>>& cycles) {
  std::vector<std::vector<int>> all;
  for (const auto& c : cycles) {
    all.push_back(c);
    all.push_back(mirror(c));
  }
  return Premap(Permutation::from_cycles(all));
}

Premap Premap::from_permutation(const Permutation& sigma) {
  return from_half(sigma.cycles());
}

Premap Premap::identity(const std::vector<int>& support) {
  return Premap(Permutation(signed_ground(support)));
}

Premap Premap::parse(const std::string& text) {
  auto p = Permutation::parse(text);
  const auto& g = p.ground();
  bool full = std::all_of(g.begin(), g.end(), [&](int x) { return p.contains(-x); });
  return full ? Premap(p) : from_half(p.cycles());
}

Premap Premap::inverse() const { return unchecked(map_.inverse()); }

Premap Premap::restrict_to(const std::vector<int>& J) const {
  std::vector<int> sj(J.begin(), J.end());
  std::sort(sj.begin(), sj.end());
  auto g = signed_ground(sj);
  std::vector<int> img;
  for (int x : g) {
    int y = map_(x);
    if (!std::binary_search(sj.begin(), sj.end(), std::abs(y)))
      throw std::invalid_argument("restriction set is not a union of blocks");
    img.push_back(y);
  }
  return unchecked(Permutation::trusted(g, img));
}

std::string Premap::str() const {
  std::vector<std::vector<int>> reps;
  for (const auto& c : fd(*this).cycles()) reps.push_back(root_at_min_abs(c));
  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  std::string out;
  for (const auto& r : reps) {
    for (const auto& cyc : {r, mirror(r)}) {
      out += '(';
      for (std::size_t i = 0; i < cyc.size(); ++i) out += (i ? "," : "") + std::to_string(cyc[i]);
      out += ')';
    }
  }
  return out;
}

SetPartition pairing_partition(const Premap& m) {
  std::set<std::vector<int>> blocks;
  for (const auto& c : m.map().cycles()) {
    std::vector<int> b;
    for (int x : c) b.push_back(std::abs(x));
    std::sort(b.begin(), b.end());
    blocks.insert(b);
  }
  return SetPartition({blocks.begin(), blocks.end()});
}

Permutation fd(const Premap& m) {
  std::vector<std::vector<int>> chosen;
  for (const auto& c : m.map().cycles()) {
    auto r = root_at_min_abs(c);
    if (r[0] > 0) chosen.push_back(r);
  }
  return Permutation::from_cycles(chosen);
}

Premap premap_kreweras(const Premap& m, const Permutation& tau) {
  if (tau.ground() != m.support()) throw std::invalid_argument("premap and base differ in size");
  return unchecked(kr_face(m.map(), tau));
}

Premap premap_kreweras(const Premap& m, const Premap& rho) {
  if (rho.support() != m.support()) throw std::invalid_argument("premap and base differ in size");
  return unchecked(kr_face(m.map(), fd(rho)));
}

namespace {

int checked_chi(int blocks_rho, const SetPartition& prho, const Premap& m, const Premap& kr) {
  auto pm = pairing_partition(m);
  int chi = blocks_rho + pm.num_blocks() + pairing_partition(kr).num_blocks() - m.n();
  if (chi > 2 * join(prho, pm).num_blocks())
    throw std::logic_error("Euler characteristic exceeds 2#(Π(ρ)∨Π(π))");
  return chi;
}

}  // namespace

int premap_euler(const Premap& m, const Permutation& rho) {
  return checked_chi(rho.num_cycles(), SetPartition::of(rho), m, premap_kreweras(m, rho));
}

int premap_euler(const Premap& m, const Premap& rho) {
  auto pr = pairing_partition(rho);
  return checked_chi(pr.num_blocks(), pr, m, premap_kreweras(m, rho));
}

std::vector<Premap> all_premaps(const std::vector<int>& support) {
  if (static_cast<int>(support.size()) > enumeration_bound(8))
    throw std::length_error("premap enumeration bound exceeded");
  std::vector<int> sup(support);
  std::sort(sup.begin(), sup.end());
  auto g = signed_ground(sup);
  const std::size_t n2 = g.size();
  std::vector<int> partner(n2, -1);
  std::vector<Premap> out;
  // ρ(k) = −π₁(k) for a pairing π₁ of ±I
  auto rec = [&](auto&& self) -> void {
    std::size_t a = 0;
    while (a < n2 && partner[a] >= 0) ++a;
    if (a == n2) {
      std::vector<int> img(n2);
      for (std::size_t i = 0; i < n2; ++i) img[i] = -g[partner[i]];
      out.push_back(unchecked(Permutation::trusted(g, std::move(img))));
      return;
    }
    for (std::size_t b = a + 1; b < n2; ++b) {
      if (partner[b] >= 0) continue;
      partner[a] = static_cast<int>(b);
      partner[b] = static_cast<int>(a);
      self(self);
      partner[a] = partner[b] = -1;
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<Premap>& all_premaps(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Premap>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, all_premaps(range(1, n))).first;
  return it->second;
}

bool is_pm_nc(const Premap& m, const Permutation& tau) {
  return premap_euler(m, tau) == 2 * join(SetPartition::of(tau), pairing_partition(m)).num_blocks();
}

std::vector<Premap> enumerate_pm_nc(const Permutation& tau) {
  std::vector<Premap> out;
  for (const auto& m : all_premaps(tau.ground()))
    if (is_pm_nc(m, tau)) out.push_back(m);
  return out;
}

bool is_ppm_prime(const PpmPair& pair, const Permutation& tau) {
  auto pt = SetPartition::of(tau);
  auto pm = pairing_partition(pair.premap);
  if (!leq(pm, pair.partition)) return false;
  if (!is_pm_nc(pair.premap, tau)) return false;
  if (join(pt, pair.partition).num_blocks() != 1) return false;
  return in_gamma_set(pm, pt, pair.partition);
}

std::vector<PpmPair> enumerate_ppm_prime(const Permutation& tau) {
  std::vector<PpmPair> out;
  auto one = SetPartition::one(tau.ground());
  for (const auto& m : enumerate_pm_nc(tau))
    for (auto& u : interval(pairing_partition(m), one)) {
      PpmPair pp{u, m};
      if (is_ppm_prime(pp, tau)) out.push_back(std::move(pp));
    }
  return out;
}

const char* to_string(PremapFamily f) {
  switch (f) {
    case PremapFamily::DiscLike: return "DiscLike";
    case PremapFamily::AnnLike: return "AnnLike";
    case PremapFamily::FlippedAnnLike: return "FlippedAnnLike";
  }
  return "?";
}

namespace {

// [p] fixed, −(p+j) ↦ p+q+1−j
int flip(int x, const AnnulusShape& s) { return x > 0 ? x : s.n() + 1 - (-x - s.p); }
int unflip(int y, const AnnulusShape& s) { return y <= s.p ? y : -(s.p + s.n() + 1 - y); }

}  // namespace

Trisection trisect(const Premap& m, const AnnulusShape& s) {
  if (m.support() != range(1, s.n())) throw std::invalid_argument("premap size does not match the annulus");
  auto inv = m.map().inverse();
  const int n = s.n();
  std::vector<int> img(n);
  bool positive = true;
  for (int k = 1; k <= n; ++k) {
    img[k - 1] = inv(k);
    if (img[k - 1] < 0) positive = false;
  }
  if (positive) {
    Permutation pi(range(1, n), img);
    if (is_disc_nc(pi, s)) return {PremapFamily::DiscLike, pi};
    if (is_ann_nc(pi, s)) return {PremapFamily::AnnLike, pi};
    throw std::invalid_argument("premap " + m.str() + " is not noncrossing on the annulus");
  }
  bool flipped = true;
  for (int y = 1; y <= n && flipped; ++y) {
    int x = unflip(y, s), z = inv(x);
    if ((z > 0) != (std::abs(z) <= s.p)) flipped = false;
    else img[y - 1] = flip(z, s);
  }
  if (flipped) {
    Permutation pi(range(1, n), img);
    if (is_ann_nc(pi, s)) return {PremapFamily::FlippedAnnLike, pi};
  }
  throw std::invalid_argument("premap " + m.str() + " fits no annular family");
}

Premap untrisect(const Trisection& t, const AnnulusShape& s) {
  if (t.family != PremapFamily::FlippedAnnLike) return Premap::from_permutation(t.perm.inverse());
  std::vector<std::vector<int>> cycles;
  for (const auto& c : t.perm.inverse().cycles()) {
    std::vector<int> d;
    for (int y : c) d.push_back(unflip(y, s));
    cycles.push_back(d);
  }
  return Premap::from_half(cycles);
}

}  // namespace annc
