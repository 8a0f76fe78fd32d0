#include "annc/sd_poset.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace annc {

const char* to_string(SdTag t) {
  switch (t) {
    case SdTag::Disc: return "Disc";
    case SdTag::Annular: return "Annular";
    case SdTag::DiscHat: return "DiscHat";
  }
  return "?";
}

std::string SdElement::str() const { return perm.str() + (tag == SdTag::DiscHat ? "^" : ""); }

SdElement sd_zero(const AnnulusShape& s) { return {SdTag::Disc, Permutation::identity(s.n()), s}; }
SdElement sd_one(const AnnulusShape& s) { return {SdTag::DiscHat, s.tau(), s}; }

SdElement make_sd(SdTag tag, const Permutation& perm, const AnnulusShape& s) {
  bool ok = tag == SdTag::Annular ? is_ann_nc(perm, s) : is_disc_nc(perm, s);
  if (!ok) throw std::invalid_argument(std::string("not a valid ") + to_string(tag) + " element: " + perm.str());
  return {tag, perm, s};
}

namespace {

// index-array form of an element for fast comparisons
struct Node {
  SdTag tag;
  std::vector<int> img;   // 0-based
  std::vector<int> lab;   // cycle label per point
  std::vector<int> img0;  // restriction to the circles (annular only)
  std::vector<int> kr;    // Kr_{p,q}(perm), 0-based
  std::vector<int> krlab;
  int ncyc = 0;
  unsigned br1 = 0, br2 = 0;  // bridge points on each circle
};

std::vector<int> zero_based(const Permutation& p) {
  std::vector<int> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = p.images()[i] - 1;
  return v;
}

std::vector<int> labels(const std::vector<int>& m, int* count = nullptr) {
  std::vector<int> lab(m.size(), -1);
  int c = 0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (lab[s] >= 0) continue;
    for (int x = static_cast<int>(s); lab[x] < 0; x = m[x]) lab[x] = c;
    ++c;
  }
  if (count) *count = c;
  return lab;
}

// Π(π) ⪯ Π(ρ) and π noncrossing on ρ
bool unhatted_leq(const std::vector<int>& pi, const std::vector<int>& rho, const std::vector<int>& rholab, int rho_cycles) {
  const int n = static_cast<int>(pi.size());
  for (int i = 0; i < n; ++i)
    if (rholab[i] != rholab[pi[i]]) return false;
  int tmp[64], inv[64];
  for (int i = 0; i < n; ++i) inv[pi[i]] = i;
  for (int i = 0; i < n; ++i) tmp[i] = inv[rho[i]];
  int c_pi = 0, c_kr = 0;
  unsigned long long seen = 0;
  for (int s = 0; s < n; ++s)
    if (!(seen >> s & 1ull)) { ++c_pi; for (int x = s; !(seen >> x & 1ull); x = pi[x]) seen |= 1ull << x; }
  seen = 0;
  for (int s = 0; s < n; ++s)
    if (!(seen >> s & 1ull)) { ++c_kr; for (int x = s; !(seen >> x & 1ull); x = tmp[x]) seen |= 1ull << x; }
  return c_pi + c_kr == n + rho_cycles;
}

Node make_node(const SdElement& e) {
  const auto& s = e.shape;
  if (s.n() > 60) throw std::invalid_argument("annulus too large");
  Node nd;
  nd.tag = e.tag;
  nd.img = zero_based(e.perm);
  nd.lab = labels(nd.img, &nd.ncyc);
  nd.kr = zero_based(kreweras(e.perm, s.tau()));
  nd.krlab = labels(nd.kr);
  if (e.tag == SdTag::Annular) {
    nd.img0 = zero_based(restrict_to_circles(e.perm, s));
    for (auto& c : bridges(e.perm, s))
      for (int x : c) (s.first(x) ? nd.br1 : nd.br2) |= 1u << (x - 1);
  }
  return nd;
}

int count_cycles(const std::vector<int>& lab) { return lab.empty() ? 0 : *std::max_element(lab.begin(), lab.end()) + 1; }

bool node_leq(const Node& a, const Node& b) {
  if (b.tag != SdTag::DiscHat) {
    if (a.tag == SdTag::DiscHat) return false;
    return unhatted_leq(a.img, b.img, b.lab, b.ncyc);
  }
  if (a.tag != SdTag::Annular) return unhatted_leq(a.img, b.img, b.lab, b.ncyc);
  if (!unhatted_leq(a.img0, b.img, b.lab, b.ncyc)) return false;
  for (unsigned m : {a.br1, a.br2}) {
    int label = -1;
    for (int x = 0; m >> x; ++x)
      if (m >> x & 1u) {
        if (label >= 0 && b.lab[x] != label) return false;
        label = b.lab[x];
      }
  }
  return true;
}

bool node_leq_definitional(const Node& a, const Node& b) {
  if (b.tag != SdTag::DiscHat) {
    if (a.tag == SdTag::DiscHat) return false;
    return unhatted_leq(a.img, b.img, b.lab, b.ncyc);
  }
  return unhatted_leq(b.kr, a.kr, a.krlab, count_cycles(a.krlab));
}

void same_shape(const SdElement& a, const SdElement& b) {
  if (!(a.shape == b.shape)) throw std::invalid_argument("elements of different annuli");
}

}  // namespace

bool sd_leq(const SdElement& a, const SdElement& b) {
  same_shape(a, b);
  return node_leq(make_node(a), make_node(b));
}

bool sd_leq_definitional(const SdElement& a, const SdElement& b) {
  same_shape(a, b);
  return node_leq_definitional(make_node(a), make_node(b));
}

SdElement kr_hat(const SdElement& a) {
  auto k = kreweras(a.perm, a.shape.tau());
  SdTag t = a.tag == SdTag::Disc ? SdTag::DiscHat : a.tag == SdTag::DiscHat ? SdTag::Disc : SdTag::Annular;
  return {t, k, a.shape};
}

SdElement kr_hat_inverse(const SdElement& a) {
  auto k = kreweras_inverse(a.perm, a.shape.tau());
  SdTag t = a.tag == SdTag::Disc ? SdTag::DiscHat : a.tag == SdTag::DiscHat ? SdTag::Disc : SdTag::Annular;
  return {t, k, a.shape};
}

std::vector<SdElement> sd_elements(const AnnulusShape& s) {
  std::vector<SdElement> out;
  const auto& disc = enumerate_disc_nc(s);
  const auto& ann = enumerate_ann_nc(s);
  for (auto& p : disc) out.push_back({SdTag::Disc, p, s});
  for (auto& p : ann) out.push_back({SdTag::Annular, p, s});
  for (auto& p : disc) out.push_back({SdTag::DiscHat, p, s});
  std::stable_sort(out.begin(), out.end(), [](const SdElement& x, const SdElement& y) {
    if (x.tag != y.tag) return static_cast<int>(x.tag) < static_cast<int>(y.tag);
    return x.perm.num_cycles() > y.perm.num_cycles();
  });
  return out;
}

std::size_t MobiusTable::index_of(const SdElement& e) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == e) return i;
  throw std::out_of_range("element not in table: " + e.str());
}

Rational MobiusTable::at(std::size_t a, std::size_t b) const {
  auto it = mu.find({a, b});
  return it == mu.end() ? Rational(0) : it->second;
}

MobiusTable mobius_recursive(const AnnulusShape& s) {
  if (s.n() > enumeration_bound(7)) throw std::length_error("mobius_recursive: p+q exceeds the bound");
  MobiusTable t;
  t.shape = s;
  t.elements = sd_elements(s);
  const std::size_t N = t.elements.size();
  std::vector<Node> nodes;
  for (auto& e : t.elements) nodes.push_back(make_node(e));
  std::vector<std::vector<char>> le(N, std::vector<char>(N, 0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) le[i][j] = node_leq(nodes[i], nodes[j]);
  for (std::size_t a = 0; a < N; ++a) {
    std::vector<std::size_t> up;
    std::vector<Rational> val;
    for (std::size_t b = a; b < N; ++b) {
      if (!le[a][b]) continue;
      Rational m = 0;
      if (b == a) m = 1;
      else
        for (std::size_t k = 0; k < up.size(); ++k)
          if (le[up[k]][b]) m -= val[k];
      up.push_back(b);
      val.push_back(m);
      t.mu[{a, b}] = m;
    }
  }
  return t;
}

Rational TopColumn::get(SdTag tag, const Permutation& perm) const {
  auto it = index.find({static_cast<int>(tag), perm});
  if (it == index.end()) throw std::out_of_range("element not in poset: " + perm.str());
  return mu[it->second];
}

const TopColumn& mobius_to_top(const AnnulusShape& s) {
  static std::mutex m;
  static std::map<std::pair<int, int>, TopColumn> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(s.p, s.q);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  TopColumn col;
  col.elements = sd_elements(s);
  const std::size_t N = col.elements.size();
  std::vector<Node> nodes;
  for (auto& e : col.elements) nodes.push_back(make_node(e));
  col.mu.assign(N, 0);
  col.mu[N - 1] = 1;
  for (std::size_t i = N - 1; i-- > 0;) {
    Rational acc = 0;
    for (std::size_t j = i + 1; j < N; ++j)
      if (col.mu[j] != 0 && node_leq(nodes[i], nodes[j])) acc += col.mu[j];
    col.mu[i] = -acc;
  }
  for (std::size_t i = 0; i < N; ++i) col.index[{static_cast<int>(col.elements[i].tag), col.elements[i].perm}] = i;
  return cache.emplace(key, std::move(col)).first->second;
}

Rational catalan_sign_product(const Permutation& pi) {
  Rational r = 1;
  for (auto& c : pi.cycles()) {
    long k = static_cast<long>(c.size());
    r *= catalan(k - 1);
    if ((k - 1) % 2) r = -r;
  }
  return r;
}

namespace {

// Σ_{U1 ⊆ [p], U2 ⊆ [p+1,p+q]} f_{|U1|,|U2|} ∏_{other V} (−1)^{|V|−1} C_{|V|−1}
Rational hatted_sum(const Permutation& kr, const AnnulusShape& s) {
  auto cs = kr.cycles();
  Rational total = 0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (!s.first(cs[i][0]) || s.first(cs[j][0])) continue;
      Rational term = f_coefficient(static_cast<int>(cs[i].size()), static_cast<int>(cs[j].size()));
      for (std::size_t k = 0; k < cs.size(); ++k) {
        if (k == i || k == j) continue;
        long m = static_cast<long>(cs[k].size());
        term *= catalan(m - 1);
        if ((m - 1) % 2) term = -term;
      }
      total += term;
    }
  return total;
}

}  // namespace

Rational mobius_closed(const SdElement& a, const SdElement& b) {
  if (!sd_leq(a, b)) throw std::domain_error("mobius_closed: elements are not comparable");
  auto kr = kreweras(a.perm, b.perm);
  if (a.tag == SdTag::Disc && b.tag == SdTag::DiscHat) return hatted_sum(kr, a.shape);
  return catalan_sign_product(kr);
}

Rational mobius_closed_completed(const SdElement& a, const SdElement& b) {
  if (!sd_leq(a, b)) throw std::domain_error("mobius_closed_completed: elements are not comparable");
  auto kr = kreweras(a.perm, b.perm);
  if (!(a.tag == SdTag::Disc && b.tag == SdTag::DiscHat)) return catalan_sign_product(kr);
  // the printed sum plus the −μ(π̂,ρ̂) term coming from σ = π̂
  return hatted_sum(kr, a.shape) - catalan_sign_product(kr);
}

std::vector<MobiusDiscrepancy> mobius_discrepancies(const MobiusTable& t, bool completed) {
  std::vector<MobiusDiscrepancy> out;
  for (auto& [key, val] : t.mu) {
    const auto& a = t.elements[key.first];
    const auto& b = t.elements[key.second];
    Rational c = completed ? mobius_closed_completed(a, b) : mobius_closed(a, b);
    if (c != val) out.push_back({a, b, val, c});
  }
  return out;
}

Rational f_coefficient(int r, int s) {
  if (r < 1 || s < 1) throw std::invalid_argument("f_coefficient needs r, s >= 1");
  auto part = [](long k) -> Rational { return factorial(2 * k - 1) / (factorial(k - 1) * factorial(k - 1)); };
  Rational v = Rational(2, r + s) * part(r) * part(s);
  v.canonicalize();
  return (r + s) % 2 ? -v : v;
}

Rational f_bruteforce(int r, int s) {
  if (r < 1 || s < 1) throw std::invalid_argument("f_bruteforce needs r, s >= 1");
  if (r + s > 9) throw std::length_error("f_bruteforce limited to r+s <= 9");
  Rational total = 0;
  for (auto& sigma : all_bridge_permutations(range(1, r), range(r + 1, r + s))) total += catalan_sign_product(sigma);
  return -total;
}

}  // namespace annc
