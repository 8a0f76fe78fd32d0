#include "annc/noncrossing.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace annc {

int enumeration_bound(int fallback) {
  if (const char* env = std::getenv("ANNULAR_CUMULANTS_MAX_N")) {
    int v = std::atoi(env);
    if (v > 0) return std::min(v, 12);
  }
  return fallback;
}

namespace {

void same_ground(const Permutation& a, const Permutation& b) {
  if (a.ground() != b.ground()) throw std::invalid_argument("permutations on different ground sets");
}

// images as ground indices
std::vector<int> idx_map(const Permutation& p) {
  std::vector<int> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = static_cast<int>(p.index(p.images()[i]));
  return m;
}

int cycles_of(const std::vector<int>& m) {
  std::vector<char> seen(m.size(), 0);
  int c = 0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (seen[s]) continue;
    ++c;
    for (int x = static_cast<int>(s); !seen[x]; x = m[x]) seen[x] = 1;
  }
  return c;
}

int components_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> par(a.size());
  std::iota(par.begin(), par.end(), 0);
  auto find = [&](int x) {
    while (par[x] != x) x = par[x] = par[par[x]];
    return x;
  };
  int comp = static_cast<int>(a.size());
  for (const auto* m : {&a, &b})
    for (std::size_t i = 0; i < m->size(); ++i) {
      int r1 = find(static_cast<int>(i)), r2 = find((*m)[i]);
      if (r1 != r2) par[r1] = r2, --comp;
    }
  return comp;
}

int chi_of(const std::vector<int>& pi, const std::vector<int>& rho) {
  std::vector<int> inv(pi.size()), kr(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) inv[pi[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < pi.size(); ++i) kr[i] = inv[rho[i]];
  return cycles_of(rho) + cycles_of(pi) + cycles_of(kr) - static_cast<int>(pi.size());
}

// --- condition path, all on ground indices ---

// π|_S as an index map (entries outside S are -1)
void restrict_mask(const std::vector<int>& pi, unsigned mask, std::vector<int>& out) {
  out.assign(pi.size(), -1);
  for (std::size_t x = 0; x < pi.size(); ++x) {
    if (!(mask >> x & 1u)) continue;
    int y = pi[x];
    while (!(mask >> y & 1u)) y = pi[y];
    out[x] = y;
  }
}

// elements of T (mask) in the cyclic order of seq
std::vector<int> order_along(const std::vector<int>& seq, unsigned T) {
  std::vector<int> o;
  for (int x : seq)
    if (T >> x & 1u) o.push_back(x);
  return o;
}

// does r (restricted π) send each element of ord to the one k steps ahead?
bool shifts_by(const std::vector<int>& r, const std::vector<int>& ord, int k) {
  int m = static_cast<int>(ord.size());
  for (int i = 0; i < m; ++i)
    if (r[ord[i]] != ord[((i + k) % m + m) % m]) return false;
  return true;
}

std::vector<std::vector<int>> index_cycles(const std::vector<int>& m) {
  std::vector<std::vector<int>> cs;
  std::vector<char> seen(m.size(), 0);
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> c;
    for (int x = static_cast<int>(s); !seen[x]; x = m[x]) seen[x] = 1, c.push_back(x);
    cs.push_back(std::move(c));
  }
  return cs;
}

// cycle lengths of a restricted map over mask
std::vector<std::vector<int>> restricted_cycles(const std::vector<int>& r, unsigned mask) {
  std::vector<std::vector<int>> cs;
  unsigned seen = 0;
  for (std::size_t s = 0; s < r.size(); ++s) {
    if (!(mask >> s & 1u) || (seen >> s & 1u)) continue;
    std::vector<int> c;
    for (int x = static_cast<int>(s); !(seen >> x & 1u); x = r[x]) seen |= 1u << x, c.push_back(x);
    cs.push_back(std::move(c));
  }
  return cs;
}

bool biane_crossing(const std::vector<int>& pi, const std::vector<int>& seq) {
  unsigned full = 0;
  for (int x : seq) full |= 1u << x;
  std::vector<int> r;
  for (unsigned S = full; S; S = (S - 1) & full) {
    int k = std::popcount(S);
    if (k != 3 && k != 4) continue;
    restrict_mask(pi, S, r);
    auto ord = order_along(seq, S);
    if (k == 3 && shifts_by(r, ord, -1)) return true;
    if (k == 4 && shifts_by(r, ord, 2)) return true;
  }
  return false;
}

bool annular_violation(const std::vector<int>& pi, const std::vector<int>& c1, const std::vector<int>& c2) {
  const int n = static_cast<int>(pi.size());
  unsigned m1 = 0, m2 = 0;
  for (int x : c1) m1 |= 1u << x;
  for (int x : c2) m2 |= 1u << x;
  auto pos_in = [](const std::vector<int>& c, int x) {
    return static_cast<int>(std::find(c.begin(), c.end(), x) - c.begin());
  };
  // λ_{x,y}: τx,…,τ⁻¹x, τy,…,τ⁻¹y
  auto lambda_seq = [&](int x, int y) {
    std::vector<int> seq;
    const auto& cx = (m1 >> x & 1u) ? c1 : c2;
    const auto& cy = (m1 >> y & 1u) ? c1 : c2;
    int px = pos_in(cx, x), py = pos_in(cy, y);
    for (std::size_t i = 1; i < cx.size(); ++i) seq.push_back(cx[(px + i) % cx.size()]);
    for (std::size_t i = 1; i < cy.size(); ++i) seq.push_back(cy[(py + i) % cy.size()]);
    return seq;
  };
  std::vector<int> r;
  const unsigned full = (1u << n) - 1;
  for (unsigned S = full; S; S = (S - 1) & full) {
    int k = std::popcount(S);
    if (k < 3 || k > 6) continue;
    int a1 = std::popcount(S & m1), a2 = std::popcount(S & m2);
    restrict_mask(pi, S, r);
    if (k == 3 && (a1 == 3 || a2 == 3)) {  // ans1
      if (shifts_by(r, order_along(a1 == 3 ? c1 : c2, S), -1)) return true;
    }
    if (k == 4) {
      if (a1 == 4 || a2 == 4) {  // ac1
        if (shifts_by(r, order_along(a1 == 4 ? c1 : c2, S), 2)) return true;
      } else if (a1 == 2) {  // ans2: alternating 4-cycle
        auto cs = restricted_cycles(r, S);
        if (cs.size() == 1) {
          const auto& c = cs[0];
          bool alt = true;
          for (int i = 0; i < 4; ++i)
            if (((m1 >> c[i]) & 1u) == ((m1 >> c[(i + 1) % 4]) & 1u)) alt = false;
          if (alt) return true;
        }
      }
    }
    if (k == 5 || k == 6) {  // ac2, ac3
      auto cs = restricted_cycles(r, S);
      for (const auto& c : cs) {
        if (c.size() != 2) continue;
        int x = c[0], y = c[1];
        if (((m1 >> x) & 1u) == ((m1 >> y) & 1u)) continue;
        unsigned T = S & ~(1u << x) & ~(1u << y);
        auto ord = order_along(lambda_seq(x, y), T);
        // π|_T equals the restriction of π|_S to T when {x,y} is a cycle
        if (k == 5 && cs.size() == 2 && shifts_by(r, ord, -1)) return true;
        if (k == 6 && cs.size() == 3) {
          bool pairs = true;
          for (const auto& d : cs) pairs = pairs && d.size() == 2;
          if (pairs && shifts_by(r, ord, 2)) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

Permutation kreweras(const Permutation& pi, const Permutation& rho) {
  same_ground(pi, rho);
  return compose(pi.inverse(), rho);
}

Permutation kreweras_inverse(const Permutation& pi, const Permutation& rho) {
  same_ground(pi, rho);
  return compose(rho, pi.inverse());
}

int euler_char(const Permutation& pi, const Permutation& rho) {
  same_ground(pi, rho);
  auto a = idx_map(pi), b = idx_map(rho);
  int chi = chi_of(a, b);
  if (chi > 2 * components_of(a, b)) throw std::logic_error("Euler characteristic bound violated");
  return chi;
}

int connected_components(const Permutation& pi, const Permutation& rho) {
  same_ground(pi, rho);
  return components_of(idx_map(pi), idx_map(rho));
}

bool is_noncrossing_chi(const Permutation& pi, const Permutation& rho) {
  same_ground(pi, rho);
  auto a = idx_map(pi), b = idx_map(rho);
  return chi_of(a, b) == 2 * components_of(a, b);
}

bool is_noncrossing_conditions(const Permutation& pi, const Permutation& rho) {
  same_ground(pi, rho);
  if (pi.size() > 30) throw std::invalid_argument("conditions path limited to 30 points");
  auto a = idx_map(pi);
  auto cs = index_cycles(idx_map(rho));
  if (cs.size() == 1) return !biane_crossing(a, cs[0]);
  if (cs.size() == 2) return !annular_violation(a, cs[0], cs[1]);
  throw std::invalid_argument("conditions path needs a base permutation with one or two cycles");
}

bool is_disc_nc(const Permutation& pi, const AnnulusShape& s) {
  auto tau = s.tau();
  return leq(SetPartition::of(pi), SetPartition::of(tau)) && is_noncrossing_chi(pi, tau);
}

bool is_ann_nc(const Permutation& pi, const AnnulusShape& s) {
  auto tau = s.tau();
  return !leq(SetPartition::of(pi), SetPartition::of(tau)) && is_noncrossing_chi(pi, tau);
}

std::vector<Permutation> enumerate_nc(const Permutation& rho) {
  const int n = static_cast<int>(rho.size());
  if (n > enumeration_bound()) throw std::length_error("enumeration bound exceeded (n = " + std::to_string(n) + ")");
  auto b = idx_map(rho);
  std::vector<int> a(n);
  std::iota(a.begin(), a.end(), 0);
  std::vector<Permutation> out;
  do {
    if (chi_of(a, b) == 2 * components_of(a, b)) {
      std::vector<int> image(n);
      for (int i = 0; i < n; ++i) image[i] = rho.ground()[a[i]];
      out.push_back(Permutation::trusted(rho.ground(), std::move(image)));
    }
  } while (std::next_permutation(a.begin(), a.end()));
  return out;
}

std::vector<Permutation> enumerate_nc(int n) { return enumerate_nc(tau_n(n)); }

namespace {
std::mutex cache_mutex;
std::map<std::pair<int, int>, std::pair<std::vector<Permutation>, std::vector<Permutation>>> cache;

const std::pair<std::vector<Permutation>, std::vector<Permutation>>& split(const AnnulusShape& s) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_pair(s.p, s.q);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (s.p < 1 || s.q < 1) throw std::invalid_argument("annulus needs p, q >= 1");
  auto tau = s.tau();
  auto tp = SetPartition::of(tau);
  std::pair<std::vector<Permutation>, std::vector<Permutation>> v;
  for (auto& pi : enumerate_nc(tau)) {
    if (leq(SetPartition::of(pi), tp)) v.first.push_back(pi);
    else v.second.push_back(pi);
  }
  return cache.emplace(key, std::move(v)).first->second;
}
}  // namespace

const std::vector<Permutation>& enumerate_disc_nc(const AnnulusShape& s) { return split(s).first; }
const std::vector<Permutation>& enumerate_ann_nc(const AnnulusShape& s) { return split(s).second; }

std::vector<PsPair> enumerate_ps(const AnnulusShape& s) {
  std::vector<PsPair> out;
  for (const auto& pi : enumerate_disc_nc(s))
    for (auto& u : interval(SetPartition::of(pi), SetPartition::one(range(1, s.n())))) out.push_back({u, pi});
  return out;
}

bool is_ps_prime(const PsPair& pr, const AnnulusShape& s) {
  if (!is_disc_nc(pr.perm, s)) return false;
  auto pp = SetPartition::of(pr.perm);
  if (!leq(pp, pr.partition)) return false;
  int special = 0;
  for (const auto& U : pr.partition.blocks()) {
    auto sub = pp.restrict_to(U);
    if (sub.num_blocks() == 1) continue;
    if (sub.num_blocks() != 2) return false;
    const auto& b = sub.blocks();
    bool f0 = s.first(b[0][0]), f1 = s.first(b[1][0]);
    if (f0 == f1) return false;
    ++special;
  }
  return special == 1;
}

std::vector<PsPair> enumerate_ps_prime(const AnnulusShape& s) {
  std::vector<PsPair> out;
  for (auto& pr : enumerate_ps(s))
    if (is_ps_prime(pr, s)) out.push_back(std::move(pr));
  return out;
}

Permutation restrict_to_circles(const Permutation& pi, const AnnulusShape& s) {
  auto c = induced(pi, range(1, s.p)).cycles();
  auto d = induced(pi, range(s.p + 1, s.n())).cycles();
  c.insert(c.end(), d.begin(), d.end());
  return Permutation::from_cycles(c, range(1, s.n()));
}

std::vector<std::vector<int>> bridges(const Permutation& pi, const AnnulusShape& s) {
  if (!is_ann_nc(pi, s)) throw std::invalid_argument("bridges: permutation is not annular-noncrossing");
  std::vector<std::vector<int>> out;
  for (auto& c : pi.cycles()) {
    bool a = false, b = false;
    for (int x : c) (s.first(x) ? a : b) = true;
    if (a && b) out.push_back(c);
  }
  return out;
}

namespace {
std::pair<std::vector<int>, std::vector<int>> faces(const Permutation& pi, const AnnulusShape& s, bool use_inverse) {
  auto tau = s.tau();
  auto pi0 = restrict_to_circles(pi, s);
  auto k = use_inverse ? kreweras_inverse(pi, tau) : kreweras(pi, tau);
  auto k0 = use_inverse ? kreweras_inverse(pi0, tau) : kreweras(pi0, tau);
  std::vector<int> elems;
  for (auto& c : bridges(k, s)) elems.insert(elems.end(), c.begin(), c.end());
  std::pair<std::vector<int>, std::vector<int>> out;
  int found = 0;
  for (auto& c : k0.cycles()) {
    bool hit = std::any_of(c.begin(), c.end(), [&](int x) { return std::count(elems.begin(), elems.end(), x) > 0; });
    if (!hit) continue;
    ++found;
    (s.first(c[0]) ? out.first : out.second) = c;
  }
  if (found != 2 || out.first.empty() || out.second.empty())
    throw std::logic_error("outside faces: expected one face per circle");
  return out;
}
}  // namespace

std::pair<std::vector<int>, std::vector<int>> outside_faces(const Permutation& pi, const AnnulusShape& s) {
  return faces(pi, s, true);
}

std::pair<std::vector<int>, std::vector<int>> outside_faces_kr(const Permutation& pi, const AnnulusShape& s) {
  return faces(pi, s, false);
}

Permutation opposite(const Permutation& pi, const AnnulusShape& s) {
  auto r = [&](int x) { return x > s.p ? s.p + s.q + 1 - (x - s.p) : x; };
  auto cs = pi.cycles();
  for (auto& c : cs)
    for (auto& x : c) x = r(x);
  return Permutation::from_cycles(cs, pi.ground());
}

std::vector<Permutation> all_bridge_permutations(const std::vector<int>& a, const std::vector<int>& b) {
  const int r = static_cast<int>(a.size()), s = static_cast<int>(b.size());
  std::vector<int> ground = a;
  ground.insert(ground.end(), b.begin(), b.end());
  std::sort(ground.begin(), ground.end());
  std::vector<Permutation> out;
  auto subsets = [](int n, int k) {
    std::vector<std::vector<int>> res;
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - k, pick.end(), 1);
    do {
      std::vector<int> v;
      for (int i = 0; i < n; ++i)
        if (pick[i]) v.push_back(i);
      res.push_back(v);
    } while (std::next_permutation(pick.begin(), pick.end()));
    return res;
  };
  auto segment = [](const std::vector<int>& circle, const std::vector<int>& starts, int i) {
    int n = static_cast<int>(circle.size()), k = static_cast<int>(starts.size());
    int from = starts[i], to = starts[(i + 1) % k];
    int len = k == 1 ? n : ((to - from) % n + n) % n;
    std::vector<int> seg;
    for (int j = 0; j < len; ++j) seg.push_back(circle[(from + j) % n]);
    return seg;
  };
  for (int k = 1; k <= std::min(r, s); ++k)
    for (auto& A : subsets(r, k))
      for (auto& B : subsets(s, k))
        for (int c = 0; c < k; ++c) {
          std::vector<std::vector<int>> cycles;
          for (int i = 0; i < k; ++i) {
            auto cyc = segment(a, A, i);
            auto tail = segment(b, B, ((c - i) % k + k) % k);
            cyc.insert(cyc.end(), tail.begin(), tail.end());
            cycles.push_back(std::move(cyc));
          }
          out.push_back(Permutation::from_cycles(cycles, ground));
        }
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(SingletClass c) {
  switch (c) {
    case SingletClass::HasAdjacentPair: return "HasAdjacentPair";
    case SingletClass::HasTwoSinglets: return "HasTwoSinglets";
    case SingletClass::Spoke: return "Spoke";
    case SingletClass::Other: return "Other";
  }
  return "?";
}

SingletClass singlet_classify(const Permutation& pi, const Permutation& rho) {
  if (!is_noncrossing_chi(pi, rho)) throw std::invalid_argument("singlet_classify: input is not noncrossing");
  auto P = SetPartition::of(pi);
  for (int a : pi.ground())
    if (rho(a) != a && P.block_of(a) == P.block_of(rho(a))) return SingletClass::HasAdjacentPair;
  int singles = 0;
  for (auto& c : pi.cycles()) singles += c.size() == 1;
  if (singles >= 2) return SingletClass::HasTwoSinglets;
  auto rc = rho.cycles();
  if (rc.size() == 2 && rc[0].size() == rc[1].size()) {
    int a = rc[0][0], b = pi(a);
    bool spoke = std::find(rc[1].begin(), rc[1].end(), b) != rc[1].end();
    auto rinv = rho.inverse();
    for (std::size_t k = 0; spoke && k < rc[0].size(); ++k) {
      if (pi(a) != b || pi(b) != a) spoke = false;
      a = rho(a);
      b = rinv(b);
    }
    if (spoke) return SingletClass::Spoke;
  }
  return SingletClass::Other;
}

}  // namespace annc
