#include "annc/matrix_cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "annc/weingarten.hpp"

namespace annc {

std::vector<std::vector<int>> trace_words(const Premap& pi) { return fd(pi).cycles(); }

namespace {

std::vector<int> canonical_word(const std::vector<int>& w) {
  std::vector<int> rev;
  for (auto it = w.rbegin(); it != w.rend(); ++it) rev.push_back(-*it);
  std::vector<int> best = w;
  for (const std::vector<int>* src : {&w, static_cast<const std::vector<int>*>(&rev)}) {
    auto r = *src;
    for (std::size_t i = 0; i < r.size(); ++i) {
      best = std::min(best, r);
      std::rotate(r.begin(), r.begin() + 1, r.end());
    }
  }
  return best;
}

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 31;
  h *= 0x7FB5D329728EA185ULL;
  h ^= h >> 27;
  h *= 0x81DADEF4BC2DD44DULL;
  h ^= h >> 33;
  return h;
}

std::uint64_t hash_string(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = mix(seed + 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : s) h = mix(h ^ c);
  return h;
}

// partitions of the blocks of base, merged
std::vector<SetPartition> coarsenings(const SetPartition& base) {
  const auto& blocks = base.blocks();
  std::vector<int> idx(blocks.size());
  std::iota(idx.begin(), idx.end(), 1);
  std::vector<SetPartition> out;
  for (const auto& p : all_partitions(idx)) {
    std::vector<std::vector<int>> merged;
    for (const auto& b : p.blocks()) {
      std::vector<int> m;
      for (int i : b) m.insert(m.end(), blocks[i - 1].begin(), blocks[i - 1].end());
      std::sort(m.begin(), m.end());
      merged.push_back(std::move(m));
    }
    out.emplace_back(std::move(merged));
  }
  return out;
}

Rational npow(long N, long k) { return rpow(Rational(N), k); }

}  // namespace

std::string canonical_trace_key(const Premap& pi) {
  std::vector<std::vector<int>> words;
  for (const auto& w : trace_words(pi)) words.push_back(canonical_word(w));
  std::sort(words.begin(), words.end());
  std::ostringstream os;
  for (const auto& w : words) {
    os << '(';
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ')';
  }
  return os.str();
}

TraceModel random_trace_model(unsigned long seed) {
  return [seed](const Premap& pi) -> Rational {
    auto h = hash_string(canonical_trace_key(pi), seed);
    return Rational(static_cast<long>(h % 15) - 7) / static_cast<long>((h >> 16) % 5 + 1);
  };
}

TraceModel diagonal_model(std::vector<std::vector<Rational>> diagonals) {
  if (diagonals.empty()) throw std::invalid_argument("diagonal_model needs at least one matrix");
  const std::size_t N = diagonals[0].size();
  for (const auto& d : diagonals)
    if (d.size() != N || N == 0) throw std::invalid_argument("diagonals must share a positive size");
  return [d = std::move(diagonals), N](const Premap& pi) {
    Rational r = 1;
    for (const auto& w : trace_words(pi)) {
      Rational tr = 0;
      for (std::size_t i = 0; i < N; ++i) {
        Rational prod = 1;
        for (int k : w) {
          auto at = static_cast<std::size_t>(std::abs(k) - 1);
          if (at >= d.size()) throw std::out_of_range("trace word uses a matrix outside the model");
          prod *= d[at][i];
        }
        tr += prod;
      }
      r *= tr / static_cast<long>(N);
    }
    return r;
  };
}

TraceModel spectrum_model(const std::vector<Rational>& diagonal, int copies) {
  return diagonal_model(std::vector<std::vector<Rational>>(copies, diagonal));
}

MatrixCumulants::MatrixCumulants(TraceModel model, long N) : model_(std::move(model)), N_(N) {
  if (N < 1) throw std::invalid_argument("dimension must be positive");
}

MatrixCumulants MatrixCumulants::from_cumulants(CumulantModel c, long N) {
  MatrixCumulants m(N);
  m.cfn_ = std::move(c);
  return m;
}

Rational MatrixCumulants::moment(const Premap& pi) const {
  auto it = moments_.find(pi);
  if (it != moments_.end()) return it->second;
  if (!model_) throw std::logic_error("no trace model: cumulants were supplied directly");
  return moments_.emplace(pi, model_(pi)).first->second;
}

Rational MatrixCumulants::c(const Premap& rho) const {
  auto it = cums_.find(rho);
  if (it != cums_.end()) return it->second;
  Rational total = 0;
  if (cfn_) {
    total = cfn_(rho);
  } else {
    const long shift = 2L * pairing_partition(rho).num_blocks();
    for (const auto& pi : all_premaps(rho.support())) {
      auto e = moment(pi);
      if (e == 0) continue;
      auto w = wg_normalized(pairing_partition(premap_kreweras(pi, rho)), N_);
      total += npow(N_, premap_euler(pi, rho) - shift) * w * e;
    }
  }
  return cums_.emplace(rho, total).first->second;
}

Rational MatrixCumulants::c(const SetPartition& v, const Premap& pi) const {
  Rational r = 1;
  for (const auto& b : v.blocks()) r *= c(pi.restrict_to(b));
  return r;
}

Rational MatrixCumulants::vertex(const SetPartition& u, const Premap& pi) const {
  auto base = pairing_partition(pi);
  if (!leq(base, u)) throw std::invalid_argument("vertex cumulant needs U above the cycles of the premap");
  Rational total = 0;
  for (const auto& v : coarsenings(base))
    if (leq(v, u)) total += mobius_partition(v, u) * c(v, pi);
  return total;
}

SetPartition one_block(const Premap& pi) { return SetPartition::one(pi.support()); }

Rational MatrixCumulants::vertex(const Premap& pi) const { return vertex(one_block(pi), pi); }

Rational MatrixCumulants::c_from_vertex(const SetPartition& u, const Premap& pi) const {
  Rational total = 0;
  for (const auto& v : coarsenings(pairing_partition(pi))) {
    if (!leq(v, u)) continue;
    Rational prod = 1;
    for (const auto& b : v.blocks()) {
      auto sub = pi.restrict_to(b);
      prod *= vertex(one_block(sub), sub);
    }
    total += prod;
  }
  return total;
}

Rational MatrixCumulants::moment_from_cumulants(const Premap& pi) const {
  const long shift = 2L * pairing_partition(pi).num_blocks();
  Rational total = 0;
  for (const auto& rho : all_premaps(pi.support())) total += npow(N_, premap_euler(rho, pi) - shift) * c(rho);
  return total;
}

Rational MatrixCumulants::classical(const SetPartition& v, const Premap& rho) const {
  Rational r = 1;
  for (const auto& b : v.blocks()) {
    auto sub = rho.restrict_to(b);
    auto cycles = pairing_partition(sub);
    Rational k = 0;
    for (const auto& p : coarsenings(cycles)) {
      const int s = p.num_blocks();
      Rational term = (s % 2 ? 1 : -1) * factorial(s - 1);
      for (const auto& blk : p.blocks()) term *= moment(sub.restrict_to(blk));
      k += term;
    }
    r *= k;
  }
  return r;
}

Rational MatrixCumulants::vertex_connected(const SetPartition& u, const Premap& pi) const {
  auto base = pairing_partition(pi);
  if (!leq(base, u)) throw std::invalid_argument("vertex cumulant needs U above the cycles of the premap");
  const long shift = 2L * base.num_blocks();
  Rational total = 0;
  for (const auto& rho : all_premaps(pi.support())) {
    auto prho = pairing_partition(rho);
    if (!leq(prho, u)) continue;
    auto pkr = pairing_partition(premap_kreweras(rho, pi));
    if (!leq(pkr, u)) continue;
    auto scale = npow(N_, premap_euler(rho, pi) - shift);
    std::vector<std::pair<SetPartition, Rational>> ws;
    for (const auto& w : coarsenings(pkr))
      if (leq(w, u)) ws.emplace_back(w, wg_cumulant(pkr, w, N_));
    for (const auto& v : coarsenings(prho)) {
      if (!leq(v, u)) continue;
      auto bv = join(base, v);
      Rational k;
      bool have = false;
      for (const auto& [w, wc] : ws) {
        if (join(bv, w) != u || wc == 0) continue;
        if (!have) {
          k = classical(v, rho);
          have = true;
        }
        total += scale * wc * k;
      }
    }
  }
  return total;
}

LogGeneratingReport log_generating_check(const MatrixCumulants& mc, const Premap& pi) {
  const auto part = pairing_partition(pi);
  const auto& blocks = part.blocks();
  const int r = static_cast<int>(blocks.size());
  if (r > 5) throw std::length_error("log-generating check supports at most 5 cycles");
  const int full = (1 << r) - 1;
  std::vector<Rational> g(full + 1, 0);
  for (int mask = 1; mask <= full; ++mask) {
    std::vector<int> sup;
    for (int i = 0; i < r; ++i)
      if (mask >> i & 1) sup.insert(sup.end(), blocks[i].begin(), blocks[i].end());
    g[mask] = mc.c(pi.restrict_to(sup));
  }
  // powers of g in the algebra where x_i² = 0
  std::vector<Rational> power = g, log(full + 1, 0);
  for (int k = 1; k <= r; ++k) {
    Rational coef = Rational(k % 2 ? 1 : -1) / k;
    for (int m = 0; m <= full; ++m) log[m] += coef * power[m];
    std::vector<Rational> next(full + 1, 0);
    for (int a = 1; a <= full; ++a) {
      if (power[a] == 0) continue;
      const int rest = full & ~a;
      for (int b = rest; b; b = (b - 1) & rest) next[a | b] += power[a] * g[b];
    }
    power = std::move(next);
  }
  return {r, log[full], mc.vertex(pi)};
}

Premap tau_inverse_premap(const std::vector<int>& r) {
  std::vector<std::vector<int>> cycles;
  int start = 1;
  for (int len : r) {
    if (len < 1) throw std::invalid_argument("cycle lengths must be positive");
    std::vector<int> c{start};
    for (int k = start + len - 1; k > start; --k) c.push_back(k);
    cycles.push_back(c);
    start += len;
  }
  return Premap::from_half(cycles);
}

ExpansionReport classical_to_vertex_expansion(const MatrixCumulants& mc, const std::vector<int>& r) {
  const int n = std::accumulate(r.begin(), r.end(), 0);
  if (n > 4) throw std::length_error("expansion supports r1+...+rm <= 4");
  auto tau = tau_inverse_premap(r).inverse();
  auto ptau = pairing_partition(tau);
  auto top = one_block(tau);
  ExpansionReport rep;
  rep.classical = mc.classical(top, tau);
  rep.moment = mc.moment(tau);
  const long shift = 2L * ptau.num_blocks();
  for (const auto& pi : all_premaps(tau.support())) {
    auto scale = npow(mc.N(), premap_euler(pi, tau) - shift);
    for (const auto& u : coarsenings(pairing_partition(pi))) {
      Rational k = scale * mc.vertex(u, pi);
      rep.unfiltered += k;
      if (join(ptau, u) == top) rep.expansion += k;
    }
  }
  return rep;
}

bool OrderSweep::ok(double tol) const { return std::abs(slope - expected) <= tol; }

OrderSweep asymptotic_order_sweep(const std::function<TraceModel(long)>& family, const std::vector<int>& r,
                                  const std::vector<long>& Ns) {
  if (Ns.size() < 2) throw std::invalid_argument("order sweep needs at least two dimensions");
  OrderSweep s;
  s.r = r;
  s.expected = 2.0 - 2.0 * static_cast<double>(r.size());
  auto pi = tau_inverse_premap(r);
  for (long N : Ns) {
    MatrixCumulants mc(family(N), N);
    s.points.push_back({N, std::abs(mc.vertex(pi).get_d())});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(s.points.size());
  for (const auto& p : s.points) {
    double x = std::log(static_cast<double>(p.N)), y = std::log(p.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  s.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return s;
}

LimitEstimate second_order_limit(const std::function<TraceModel(long)>& family, int p, int q,
                                 const std::vector<long>& Ns) {
  LimitEstimate est;
  auto pi = tau_inverse_premap({p, q});
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (i && Ns[i] != 2 * Ns[i - 1]) throw std::invalid_argument("dimensions must double successively");
    MatrixCumulants mc(family(Ns[i]), Ns[i]);
    est.scaled.emplace_back(Ns[i], Rational(Ns[i] * Ns[i]) * mc.vertex(pi));
  }
  std::vector<Rational> t;
  for (const auto& [N, v] : est.scaled) t.push_back(v);
  for (long k = 1; t.size() > 1; ++k) {
    Rational f = rpow(2, k);
    std::vector<Rational> next;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) next.push_back(Rational((f * t[i + 1] - t[i]) / (f - 1)));
    t = std::move(next);
  }
  est.extrapolated = t.at(0).get_d();
  return est;
}

std::vector<Rational> three_point_spectrum(long N) {
  if (N <= 0 || N % 4) throw std::invalid_argument("three-point spectrum needs N divisible by 4");
  std::vector<Rational> d(N, 0);
  for (long i = N / 2; i < N; ++i) d[i] = i < 3 * N / 4 ? 1 : 4;
  return d;
}

Rational three_point_moment(int r) {
  if (r == 0) return 1;
  return (1 + rpow(4, r)) / 4;
}

}  // namespace annc
