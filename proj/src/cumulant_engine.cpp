#include "annc/cumulant_engine.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "annc/sd_poset.hpp"
#include "json.hpp"

namespace annc {

Word parse_word(const std::string& text) {
  Word w;
  bool centre = false;
  for (char c : text) {
    if (c == '~') {
      centre = true;
    } else if (c == '\'') {
      if (w.empty()) throw std::invalid_argument("transpose mark before any letter in '" + text + "'");
      w.back().transposed = !w.back().transposed;
    } else if (c >= 'a' && c <= 'z') {
      w.push_back({c, false, centre, 0});
      centre = false;
    } else if (c != ' ') {
      throw std::invalid_argument("bad character in word '" + text + "'");
    }
  }
  return w;
}

std::string word_str(const Word& w) {
  std::string s;
  for (const auto& l : w) {
    if (l.centred) s += '~';
    s += l.symbol;
    if (l.transposed) s += '\'';
  }
  return s;
}

Word transpose(const Word& w) {
  Word r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->t());
  return r;
}

namespace {

// plain letters sort before their transposes
bool key_less(const std::string& a, const std::string& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return (x == '\'' ? 127 : x) < (y == '\'' ? 127 : y);
  });
}

std::string min_rotation(const Word& w) {
  std::string best;
  Word r = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto s = word_str(r);
    if (i == 0 || key_less(s, best)) best = s;
    std::rotate(r.begin(), r.begin() + 1, r.end());
  }
  return best;
}

}  // namespace

std::string key1(const Word& w) {
  if (w.empty()) return "";
  return std::min(min_rotation(w), min_rotation(transpose(w)), key_less);
}

std::string key2(const Word& a, const Word& b) {
  auto ka = key1(a), kb = key1(b);
  if (key_less(kb, ka)) std::swap(ka, kb);
  return ka + "|" + kb;
}

const Rational& WordTable::get1(const Word& w) const {
  auto k = key1(w);
  auto it = t1_.find(k);
  if (it != t1_.end()) return it->second;
  if (!fill1_) throw std::out_of_range("no first-order entry for word '" + k + "'");
  Rational v = fill1_(w);
  v.canonicalize();
  return t1_.emplace(k, v).first->second;
}

const Rational& WordTable::get2(const Word& a, const Word& b) const {
  auto k = key2(a, b);
  auto it = t2_.find(k);
  if (it != t2_.end()) return it->second;
  if (!fill2_) throw std::out_of_range("no second-order entry for words '" + k + "'");
  Rational v = fill2_(a, b);
  v.canonicalize();
  return t2_.emplace(k, v).first->second;
}

std::string WordTable::to_json(const char* name1, const char* name2) const {
  nlohmann::ordered_json j;
  j[name1] = nlohmann::ordered_json::object();
  j[name2] = nlohmann::ordered_json::object();
  for (auto& [k, v] : t1_) j[name1][k] = v.get_str();
  for (auto& [k, v] : t2_) j[name2][k] = v.get_str();
  return j.dump(1);
}

void WordTable::load_json(const std::string& text, const char* name1, const char* name2) {
  auto j = nlohmann::json::parse(text);
  for (auto& [k, _] : j.items())
    if (k != name1 && k != name2) throw std::invalid_argument("unknown field '" + k + "'");
  auto value = [](const nlohmann::json& v) {
    return v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump());
  };
  if (j.contains(name1))
    for (auto& [k, v] : j[name1].items()) set1(parse_word(k), value(v));
  if (j.contains(name2))
    for (auto& [k, v] : j[name2].items()) {
      auto bar = k.find('|');
      if (bar == std::string::npos) throw std::invalid_argument("second-order key needs '|': " + k);
      set2(parse_word(k.substr(0, bar)), parse_word(k.substr(bar + 1)), value(v));
    }
}

MomentOracle MomentOracle::from_json(const std::string& text) {
  MomentOracle m;
  m.load_json(text, "alpha1", "alpha2");
  return m;
}

CumulantTable CumulantTable::from_json(const std::string& text) {
  CumulantTable k;
  k.load_json(text, "kappa1", "kappa2");
  return k;
}

namespace {

std::ptrdiff_t first_centred(const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].centred) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

Letter plain(Letter l) {
  l.centred = false;
  return l;
}

}  // namespace

Rational MomentOracle::alpha1(const Word& w) const {
  if (w.empty()) return 1;
  auto i = first_centred(w);
  if (i < 0) return get1(w);
  Word full = w, cut = w;
  full[i] = plain(w[i]);
  cut.erase(cut.begin() + i);
  return alpha1(full) - alpha1({full[i]}) * alpha1(cut);
}

Rational MomentOracle::alpha2(const Word& a, const Word& b) const {
  if (a.empty() || b.empty()) return 0;  // φ₂(1, ·) = 0
  auto i = first_centred(a);
  if (i >= 0) {
    Word full = a, cut = a;
    full[i] = plain(a[i]);
    cut.erase(cut.begin() + i);
    return alpha2(full, b) - alpha1({full[i]}) * alpha2(cut, b);
  }
  auto j = first_centred(b);
  if (j >= 0) {
    Word full = b, cut = b;
    full[j] = plain(b[j]);
    cut.erase(cut.begin() + j);
    return alpha2(a, full) - alpha1({full[j]}) * alpha2(a, cut);
  }
  return get2(a, b);
}

namespace {

Word sub(const Word& letters, const std::vector<int>& cycle) {
  Word w;
  for (int x : cycle) w.push_back(letters[x - 1]);
  return w;
}

struct OneCycleData {
  std::vector<std::vector<std::vector<int>>> cycles;  // per π ∈ S_nc(n)
  std::vector<Rational> mu;                          // μ(π, τ_n)
};

const OneCycleData& one_cycle(int n) {
  static std::mutex mu;
  static std::map<int, OneCycleData> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  OneCycleData d;
  auto t = tau_n(n);
  for (const auto& pi : enumerate_nc(n)) {
    d.cycles.push_back(pi.cycles());
    d.mu.push_back(catalan_sign_product(kreweras(pi, t)));
  }
  return cache.emplace(n, std::move(d)).first->second;
}

struct PsTerm {
  std::vector<std::vector<int>> rest;  // cycles of π outside the nontrivial block
  std::vector<int> c, d;               // the two cycles inside it, c ⊆ [p]
  Rational mu;                         // μ(π̂, 1)
  SetPartition partition;
  Permutation perm;
};

struct ShapeData {
  std::vector<std::pair<std::vector<std::vector<int>>, Rational>> disc;  // 2[μ(π,1)+μ(π̂,1)]
  std::vector<std::pair<Permutation, Rational>> ann;                     // μ(π,1)
  std::vector<PsTerm> ps;
};

PsTerm split_ps(const PsPair& pp, const AnnulusShape& s) {
  PsTerm t;
  t.partition = pp.partition;
  t.perm = pp.perm;
  for (const auto& blk : pp.partition.blocks()) {
    std::vector<std::vector<int>> inside;
    for (const auto& c : pp.perm.cycles())
      if (std::binary_search(blk.begin(), blk.end(), c[0])) inside.push_back(c);
    if (inside.size() == 1) {
      t.rest.push_back(inside[0]);
    } else if (inside.size() == 2 && s.first(inside[0][0]) != s.first(inside[1][0])) {
      t.c = s.first(inside[0][0]) ? inside[0] : inside[1];
      t.d = s.first(inside[0][0]) ? inside[1] : inside[0];
    } else {
      throw std::invalid_argument("not a PS' pair");
    }
  }
  if (t.c.empty()) throw std::invalid_argument("PS' pair without a joined block");
  return t;
}

const ShapeData& shape_data(const AnnulusShape& s) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ShapeData> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({s.p, s.q});
    if (it != cache.end()) return it->second;
  }
  const auto& top = mobius_to_top(s);
  ShapeData d;
  for (const auto& pi : enumerate_disc_nc(s))
    d.disc.emplace_back(pi.cycles(), 2 * (top.get(SdTag::Disc, pi) + top.get(SdTag::DiscHat, pi)));
  for (const auto& pi : enumerate_ann_nc(s)) d.ann.emplace_back(pi, top.get(SdTag::Annular, pi));
  for (const auto& pp : enumerate_ps_prime(s)) {
    auto t = split_ps(pp, s);
    t.mu = top.get(SdTag::DiscHat, pp.perm);
    d.ps.push_back(std::move(t));
  }
  std::lock_guard lock(mu);
  return cache.emplace(std::make_pair(s.p, s.q), std::move(d)).first->second;
}

template <class F>
Rational product_over(const std::vector<std::vector<int>>& cycles, const Word& letters, F f) {
  Rational r = 1;
  for (const auto& c : cycles) {
    r *= f(sub(letters, c));
    if (r == 0) break;
  }
  return r;
}

Word joined(const Word& xs, const Word& ys) {
  Word l = xs;
  l.insert(l.end(), ys.begin(), ys.end());
  return l;
}

// x₁…x_p, y_qᵗ…y₁ᵗ
Word joined_opposite(const Word& xs, const Word& ys) { return joined(xs, transpose(ys)); }

void check_second(const Word& xs, const Word& ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("second-order words must be nonempty");
  if (static_cast<int>(xs.size() + ys.size()) > kMaxSecondOrder)
    throw std::length_error("second-order transform supports p+q <= 7");
}

}  // namespace

Rational free_cumulant(const MomentOracle& m, const Word& w) {
  if (w.empty() || static_cast<int>(w.size()) > kMaxFreeLength)
    throw std::length_error("free cumulants need 1 <= n <= 8");
  const auto& d = one_cycle(static_cast<int>(w.size()));
  Rational total = 0;
  for (std::size_t i = 0; i < d.cycles.size(); ++i)
    total += d.mu[i] * product_over(d.cycles[i], w, [&](const Word& s) { return m.alpha1(s); });
  return total;
}

Rational free_moment(const CumulantTable& k, const Word& w) {
  if (w.empty()) return 1;
  if (static_cast<int>(w.size()) > kMaxFreeLength) throw std::length_error("free moments need n <= 8");
  const auto& d = one_cycle(static_cast<int>(w.size()));
  Rational total = 0;
  for (const auto& cyc : d.cycles) total += product_over(cyc, w, [&](const Word& s) { return k.kappa1(s); });
  return total;
}

Rational kappa_pq(const MomentOracle& m, const Word& xs, const Word& ys) {
  check_second(xs, ys);
  AnnulusShape s{static_cast<int>(xs.size()), static_cast<int>(ys.size())};
  const auto& d = shape_data(s);
  auto L = joined(xs, ys), Lt = joined_opposite(xs, ys);
  auto a1 = [&](const Word& w) { return m.alpha1(w); };
  Rational total = 0;
  for (const auto& [cyc, coef] : d.disc)
    if (coef != 0) total += coef * product_over(cyc, L, a1);
  for (const auto& [pi, mu] : d.ann) {
    if (mu == 0) continue;
    auto cyc = pi.cycles();
    total += mu * (product_over(cyc, L, a1) + product_over(cyc, Lt, a1));
  }
  for (const auto& t : d.ps)
    if (t.mu != 0) total += t.mu * product_over(t.rest, L, a1) * m.alpha2(sub(L, t.c), sub(L, t.d));
  return total;
}

Rational alpha_pq(const CumulantTable& k, const Word& xs, const Word& ys) {
  check_second(xs, ys);
  AnnulusShape s{static_cast<int>(xs.size()), static_cast<int>(ys.size())};
  const auto& d = shape_data(s);
  auto L = joined(xs, ys), Lt = joined_opposite(xs, ys);
  auto k1 = [&](const Word& w) { return k.kappa1(w); };
  Rational total = 0;
  for (const auto& [pi, mu] : d.ann) {
    auto cyc = pi.cycles();
    total += product_over(cyc, L, k1) + product_over(cyc, Lt, k1);
  }
  for (const auto& t : d.ps) total += product_over(t.rest, L, k1) * k.kappa2(sub(L, t.c), sub(L, t.d));
  return total;
}

namespace {

std::pair<Word, Word> split_key(const std::string& key) {
  auto bar = key.find('|');
  return {parse_word(key.substr(0, bar)), parse_word(key.substr(bar + 1))};
}

}  // namespace

CumulantTable cumulants_from_moments(const MomentOracle& m) {
  CumulantTable k;
  for (const auto& [key, _] : m.table1()) k.set1(parse_word(key), free_cumulant(m, parse_word(key)));
  for (const auto& [key, _] : m.table2()) {
    auto [a, b] = split_key(key);
    k.set2(a, b, kappa_pq(m, a, b));
  }
  return k;
}

MomentOracle moments_from_cumulants(const CumulantTable& k) {
  MomentOracle m;
  for (const auto& [key, _] : k.table1()) m.set1(parse_word(key), free_moment(k, parse_word(key)));
  for (const auto& [key, _] : k.table2()) {
    auto [a, b] = split_key(key);
    m.set2(a, b, alpha_pq(k, a, b));
  }
  return m;
}

MomentOracle lazy_moments(const CumulantTable& k) {
  MomentOracle m;
  m.set_fill([&k](const Word& w) { return free_moment(k, w); },
             [&k](const Word& a, const Word& b) { return alpha_pq(k, a, b); });
  return m;
}

namespace {

std::uint64_t fnv(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= h >> 29;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 32;
  return h;
}

Rational hashed_value(const std::string& key, unsigned long seed, int range) {
  auto h = fnv(key, seed);
  long num = static_cast<long>(h % (2 * range + 1)) - range;
  long den = static_cast<long>((h >> 20) % 4) + 1;
  return Rational(num) / den;
}

bool mixed_letters(const Word& w) {
  for (const auto& l : w)
    if (l.algebra != w.front().algebra) return true;
  return false;
}

}  // namespace

CumulantTable random_cumulants(unsigned long seed, bool zero_mixed, int range) {
  CumulantTable k;
  k.set_fill(
      [=](const Word& w) {
        return zero_mixed && mixed_letters(w) ? Rational(0) : hashed_value(key1(w), seed, range);
      },
      [=](const Word& a, const Word& b) {
        return zero_mixed && mixed_letters(joined(a, b)) ? Rational(0) : hashed_value(key2(a, b), seed, range);
      });
  return k;
}

std::vector<Word> all_words(const std::vector<Letter>& alphabet, int len) {
  std::vector<Letter> letters;
  for (const auto& l : alphabet) {
    letters.push_back(plain(l));
    letters.push_back(plain(l).t());
  }
  std::vector<Word> out{{}};
  for (int i = 0; i < len; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (const auto& l : letters) {
        auto v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

MomentOracle make_moment_oracle(const std::vector<Letter>& alphabet, int max_len,
                                const std::function<Rational(const std::string&)>& gen) {
  MomentOracle m;
  for (int n = 1; n <= max_len; ++n)
    for (const auto& w : all_words(alphabet, n)) {
      auto k = key1(w);
      if (!m.table1().count(k)) m.set1(w, gen(k));
    }
  for (int n = 2; n <= max_len; ++n)
    for (int p = 1; p < n; ++p)
      for (const auto& a : all_words(alphabet, p))
        for (const auto& b : all_words(alphabet, n - p)) {
          auto k = key2(a, b);
          if (!m.table2().count(k)) m.set2(a, b, gen(k));
        }
  return m;
}

namespace {

PsTerm ps_term(const PsPair& up, const Word& xs, const Word& ys) {
  check_second(xs, ys);
  AnnulusShape s{static_cast<int>(xs.size()), static_cast<int>(ys.size())};
  if (!is_ps_prime(up, s)) throw std::invalid_argument("not a PS' pair for this shape");
  return split_ps(up, s);
}

}  // namespace

Rational alpha_upi_direct(const MomentOracle& m, const PsPair& up, const Word& xs, const Word& ys) {
  auto t = ps_term(up, xs, ys);
  auto L = joined(xs, ys);
  return product_over(t.rest, L, [&](const Word& w) { return m.alpha1(w); }) * m.alpha2(sub(L, t.c), sub(L, t.d));
}

Rational kappa_upi_direct(const CumulantTable& k, const PsPair& up, const Word& xs, const Word& ys) {
  auto t = ps_term(up, xs, ys);
  auto L = joined(xs, ys);
  return product_over(t.rest, L, [&](const Word& w) { return k.kappa1(w); }) * k.kappa2(sub(L, t.c), sub(L, t.d));
}

Rational alpha_upi(const CumulantTable& k, const PsPair& up, const Word& xs, const Word& ys) {
  ps_term(up, xs, ys);
  AnnulusShape s{static_cast<int>(xs.size()), static_cast<int>(ys.size())};
  const auto& d = shape_data(s);
  auto L = joined(xs, ys), Lt = joined_opposite(xs, ys);
  auto k1 = [&](const Word& w) { return k.kappa1(w); };
  Rational total = 0;
  for (const auto& [rho, mu] : d.ann) {
    auto cyc = rho.cycles();
    if (leq(SetPartition::of(rho), up.partition)) total += product_over(cyc, L, k1);
    if (leq(SetPartition::of(opposite(rho, s)), up.partition)) total += product_over(cyc, Lt, k1);
  }
  for (const auto& t : d.ps)
    if (leq(t.partition, up.partition))
      total += product_over(t.rest, L, k1) * k.kappa2(sub(L, t.c), sub(L, t.d));
  return total;
}

Rational kappa_upi(const MomentOracle& m, const PsPair& up, const Word& xs, const Word& ys) {
  auto t = ps_term(up, xs, ys);
  auto L = joined(xs, ys);
  return product_over(t.rest, L, [&](const Word& w) { return free_cumulant(m, w); }) *
         kappa_pq(m, sub(L, t.c), sub(L, t.d));
}

Rational spoke_formula(const MomentOracle& m, const Word& xs, const Word& ys, SpokeReading reading) {
  const int p = static_cast<int>(xs.size()), q = static_cast<int>(ys.size());
  if (p != q || p == 0) return 0;
  auto pair = [&](const Letter& x, const Letter& y) { return m.alpha1({x, y}); };
  auto mod = [p](int v) { return ((v % p) + p) % p; };
  Rational total = 0;
  if (reading == SpokeReading::Printed) {
    auto tau = tau_pq(p, q), inv = tau.inverse();
    for (int k = 1; k <= p; ++k) {
      Rational back = 1, fwd = 1;
      for (int i = 1; i <= p; ++i) {
        int jb = i, jf = i;
        for (int r = 0; r < k; ++r) {
          jb = inv(jb);
          jf = tau(jf);
        }
        back *= pair(xs[i - 1], ys[jb - 1]);
        fwd *= pair(xs[i - 1], ys[jf - 1]);
      }
      total += back + fwd;
    }
  } else {
    for (int k = 0; k < p; ++k) {
      Rational straight = 1, twisted = 1;
      for (int i = 0; i < p; ++i) {
        straight *= pair(xs[i], ys[mod(k - i)]);
        twisted *= pair(xs[i], ys[mod(k + i)].t());
      }
      total += straight + twisted;
    }
  }
  return total;
}

namespace {

bool cyclically_alternating(const Word& w) {
  if (w.size() == 1) return true;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].algebra == w[(i + 1) % w.size()].algebra) return false;
  return true;
}

bool alternating(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].algebra == w[i + 1].algebra) return false;
  return true;
}

Word centred(Word w) {
  for (auto& l : w) l.centred = true;
  return w;
}

std::vector<Word> tagged_words(const std::vector<Letter>& alphabet, int len) {
  auto ws = all_words(alphabet, len);
  for (auto& w : ws)
    for (auto& l : w)
      for (const auto& a : alphabet)
        if (a.symbol == l.symbol) l.algebra = a.algebra;
  return ws;
}

}  // namespace

FreenessReport freeness_roundtrip_test(const std::vector<Letter>& alphabet, const CumulantTable& within,
                                       int max_len, SpokeReading reading) {
  FreenessReport rep;
  auto joint = lazy_moments(within);
  for (int n = 2; n <= 2 * max_len; ++n)
    for (const auto& w : tagged_words(alphabet, n)) {
      if (!alternating(w)) continue;
      ++rep.checked_first;
      auto v = joint.alpha1(centred(w));
      if (v != 0) rep.first_order_failures.push_back(word_str(w) + " -> " + v.get_str());
    }
  for (int p = 1; p <= max_len; ++p)
    for (int q = 1; q <= max_len; ++q)
      for (const auto& xs : tagged_words(alphabet, p)) {
        if (!cyclically_alternating(xs)) continue;
        for (const auto& ys : tagged_words(alphabet, q)) {
          if (!cyclically_alternating(ys)) continue;
          if (p == 1 && q == 1 && xs[0].algebra == ys[0].algebra) continue;  // lone letters must be free of each other
          ++rep.checked_second;
          auto cx = centred(xs), cy = centred(ys);
          auto lhs = joint.alpha2(cx, cy);
          auto rhs = spoke_formula(joint, cx, cy, reading);
          if (lhs != rhs) rep.failures.push_back({xs, ys, lhs, rhs});
        }
      }
  // converse: mixed cumulants recomputed from the joint moments vanish
  for (int n = 2; n <= 5; ++n)
    for (int p = 1; p < n; ++p)
      for (const auto& xs : tagged_words(alphabet, p))
        for (const auto& ys : tagged_words(alphabet, n - p)) {
          if (!mixed_letters(joined(xs, ys))) continue;
          if (key2(xs, ys) != key1(xs) + "|" + key1(ys)) continue;  // one per class
          ++rep.checked_converse;
          auto v = kappa_pq(joint, xs, ys);
          if (v != 0) rep.converse_failures.push_back(key2(xs, ys) + " -> " + v.get_str());
        }
  return rep;
}

}  // namespace annc
