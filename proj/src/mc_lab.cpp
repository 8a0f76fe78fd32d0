#include "annc/mc_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "annc/weingarten.hpp"
#include "json.hpp"

namespace annc {

HaarSampler::HaarSampler(int N, std::uint64_t seed) : N_(N), rng_(seed) {
  if (N < 1) throw std::invalid_argument("Haar sampler needs N >= 1");
}

Eigen::MatrixXd HaarSampler::next() {
  Eigen::MatrixXd g(N_, N_);
  for (int j = 0; j < N_; ++j)
    for (int i = 0; i < N_; ++i) g(i, j) = gauss_(rng_);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < N_; ++j)
    if (r(j, j) < 0) q.col(j) *= -1;
  ++count_;
  return q;
}

Eigen::MatrixXd sample_haar(int N, std::uint64_t seed) { return HaarSampler(N, seed).next(); }

double orthogonality_defect(const Eigen::MatrixXd& q) {
  return (q * q.transpose() - Eigen::MatrixXd::Identity(q.rows(), q.cols())).norm();
}

TraceWord parse_trace_word(const std::string& text) {
  TraceWord w;
  for (char c : text) {
    if (c == '\'') {
      if (w.empty()) throw std::invalid_argument("transpose mark before any letter in '" + text + "'");
      w.back().transposed = !w.back().transposed;
    } else if (c >= 'A' && c <= 'Z') {
      w.push_back({c, false});
    } else if (c != ' ') {
      throw std::invalid_argument("bad character in trace word '" + text + "'");
    }
  }
  return w;
}

TraceTerm term(const std::vector<std::string>& words, const Rational& scale) {
  TraceTerm t;
  for (const auto& s : words) t.words.push_back(parse_trace_word(s));
  t.scale = scale;
  return t;
}

TraceQuantity quantity(const std::string& name, const std::vector<std::string>& words, const Rational& scale) {
  return {name, {term(words, scale)}};
}

ExactMatrix exact_identity(int N) {
  ExactMatrix m(N, std::vector<Rational>(N, 0));
  for (int i = 0; i < N; ++i) m[i][i] = 1;
  return m;
}

ExactMatrix exact_unit(int N, int i, int j) {
  ExactMatrix m(N, std::vector<Rational>(N, 0));
  m.at(i - 1).at(j - 1) = 1;
  return m;
}

Eigen::MatrixXd to_double(const ExactMatrix& m) {
  Eigen::MatrixXd d(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) d(i, j) = m[i][j].get_d();
  return d;
}

namespace {

ExactMatrix mul(const ExactMatrix& a, const ExactMatrix& b) {
  const std::size_t n = a.size();
  ExactMatrix c(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

ExactMatrix transposed(const ExactMatrix& a) {
  ExactMatrix t = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[i][j] = a[j][i];
  return t;
}

Rational trace(const ExactMatrix& a) {
  Rational t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

const ExactMatrix& lookup(const std::map<char, ExactMatrix>& fixed, char name) {
  auto it = fixed.find(name);
  if (it == fixed.end()) throw std::out_of_range(std::string("no matrix named ") + name);
  return it->second;
}

// Each Haar occurrence has a row end (node 2s) and a column end (node 2s+1).
// Segments of fixed matrices join the right end of one occurrence to the left end of the next.
struct Segment {
  int start, end;
  ExactMatrix m;
};

struct Network {
  std::vector<char> haar_of;  // per occurrence
  std::vector<Segment> segments;
  std::vector<int> seg_at;  // per node
  Rational constant = 1;    // words without Haar letters
};

Network build(const TraceTerm& t, const std::map<char, ExactMatrix>& fixed, int N) {
  Network net;
  for (const auto& w : t.words) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i].haar()) pos.push_back(i);
    auto product = [&](std::size_t from, std::size_t count) {
      ExactMatrix m = exact_identity(N);
      for (std::size_t k = 0; k < count; ++k) {
        const auto& l = w[(from + k) % w.size()];
        const auto& f = lookup(fixed, l.name);
        if (f.size() != static_cast<std::size_t>(N)) throw std::invalid_argument("matrix size differs from N");
        m = mul(m, l.transposed ? transposed(f) : f);
      }
      return m;
    };
    if (pos.empty()) {
      net.constant *= trace(product(0, w.size()));
      continue;
    }
    const int base = static_cast<int>(net.haar_of.size());
    for (auto p : pos) net.haar_of.push_back(w[p].name);
    auto left = [&](std::size_t j) { return 2 * (base + static_cast<int>(j)) + (w[pos[j]].transposed ? 1 : 0); };
    auto right = [&](std::size_t j) { return 2 * (base + static_cast<int>(j)) + (w[pos[j]].transposed ? 0 : 1); };
    for (std::size_t j = 0; j < pos.size(); ++j) {
      std::size_t nxt = (j + 1) % pos.size();
      std::size_t gap = (pos[nxt] + w.size() - pos[j] - 1) % w.size();
      net.segments.push_back({right(j), left(nxt), product(pos[j] + 1, gap)});
    }
  }
  net.seg_at.assign(2 * net.haar_of.size(), -1);
  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    net.seg_at[net.segments[s].start] = static_cast<int>(s);
    net.seg_at[net.segments[s].end] = static_cast<int>(s);
  }
  return net;
}

Rational loops_value(const Network& net, const std::vector<int>& partner) {
  const int N = static_cast<int>(net.segments.front().m.size());
  std::vector<char> seen(net.segments.size(), 0);
  Rational value = 1;
  for (std::size_t s0 = 0; s0 < net.segments.size(); ++s0) {
    if (seen[s0]) continue;
    ExactMatrix acc = exact_identity(N);
    int s = static_cast<int>(s0);
    int node = net.segments[s0].start;
    for (;;) {
      seen[s] = 1;
      const auto& seg = net.segments[s];
      bool forward = node == seg.start;
      acc = mul(acc, forward ? seg.m : transposed(seg.m));
      int out = forward ? seg.end : seg.start;
      node = partner[out];
      s = net.seg_at[node];
      if (s == static_cast<int>(s0) && node == net.segments[s0].start) break;
    }
    value *= trace(acc);
    if (value == 0) break;
  }
  return value;
}

}  // namespace

Rational exact_expectation(const TraceTerm& t, const std::map<char, ExactMatrix>& fixed, int N) {
  auto net = build(t, fixed, N);
  if (net.haar_of.empty()) return t.scale * net.constant;
  std::map<char, std::vector<int>> occ;
  for (std::size_t s = 0; s < net.haar_of.size(); ++s) occ[net.haar_of[s]].push_back(static_cast<int>(s));
  struct Group {
    std::vector<int> occ;
    std::vector<PairPartition> pairings;
    const WgContext* wg;
  };
  std::vector<Group> groups;
  for (auto& [h, list] : occ) {
    if (list.size() % 2) return 0;
    const int n = static_cast<int>(list.size() / 2);
    if (n > 5) throw std::length_error("at most 5 pairs of entries per Haar matrix");
    groups.push_back({list, all_pairings(n), &wg_context(n, N)});
  }
  std::vector<int> partner(2 * net.haar_of.size(), -1);
  Rational total = 0;
  // odometer over (σ, τ) per group
  std::vector<std::size_t> idx(2 * groups.size(), 0);
  for (;;) {
    Rational weight = 1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& G = groups[g];
      const auto& sigma = G.pairings[idx[2 * g]];
      const auto& tau = G.pairings[idx[2 * g + 1]];
      for (std::size_t i = 0; i < G.occ.size(); ++i) {
        partner[2 * G.occ[i]] = 2 * G.occ[sigma[i]];
        partner[2 * G.occ[i] + 1] = 2 * G.occ[tau[i]] + 1;
      }
      weight *= G.wg->wg_std(sigma, tau);
    }
    if (weight != 0) total += weight * loops_value(net, partner);
    std::size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < groups[k / 2].pairings.size()) break;
      idx[k] = 0;
    }
    if (k == idx.size()) break;
  }
  return t.scale * net.constant * total;
}

Rational exact_expectation(const TraceQuantity& q, const std::map<char, ExactMatrix>& fixed, int N) {
  Rational r = 0;
  for (const auto& t : q.terms) r += exact_expectation(t, fixed, N);
  return r;
}

double evaluate(const TraceQuantity& q, const std::map<char, Eigen::MatrixXd>& matrices) {
  double total = 0;
  for (const auto& t : q.terms) {
    double v = t.scale.get_d();
    for (const auto& w : t.words) {
      Eigen::MatrixXd acc;
      bool first = true;
      for (const auto& l : w) {
        auto it = matrices.find(l.name);
        if (it == matrices.end()) throw std::out_of_range(std::string("no matrix named ") + l.name);
        if (first) {
          acc = l.transposed ? Eigen::MatrixXd(it->second.transpose()) : it->second;
          first = false;
        } else {
          acc = l.transposed ? Eigen::MatrixXd(acc * it->second.transpose()) : Eigen::MatrixXd(acc * it->second);
        }
      }
      v *= acc.trace();
    }
    total += v;
  }
  return total;
}

TraceStatistics::TraceStatistics(std::size_t k) : mean_(k, 0.0), m2_(k * k, 0.0) {}

void TraceStatistics::add(const std::vector<double>& x) {
  const std::size_t k = mean_.size();
  if (x.size() != k) throw std::invalid_argument("sample size mismatch");
  ++n_;
  std::vector<double> before(k);
  for (std::size_t i = 0; i < k; ++i) {
    before[i] = x[i] - mean_[i];
    mean_[i] += before[i] / static_cast<double>(n_);
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m2_[i * k + j] += before[i] * (x[j] - mean_[j]);
}

void TraceStatistics::merge(const TraceStatistics& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const std::size_t k = mean_.size();
  const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_), n = na + nb;
  std::vector<double> d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = o.mean_[i] - mean_[i];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m2_[i * k + j] += o.m2_[i * k + j] + d[i] * d[j] * na * nb / n;
  for (std::size_t i = 0; i < k; ++i) mean_[i] += d[i] * nb / n;
  n_ += o.n_;
}

double TraceStatistics::covariance(std::size_t i, std::size_t j) const {
  if (n_ < 2) return 0;
  return m2_[i * mean_.size() + j] / static_cast<double>(n_ - 1);
}

double TraceStatistics::standard_error(std::size_t i) const {
  if (n_ < 2) return 0;
  return std::sqrt(covariance(i, i) / static_cast<double>(n_));
}

namespace {

std::map<char, ExactMatrix> standard_fixed(int N) {
  if (N < 2) throw std::invalid_argument("batteries need N >= 2");
  std::map<char, ExactMatrix> f;
  ExactMatrix a(N, std::vector<Rational>(N, 0)), b = exact_identity(N);
  for (int i = 0; i < N; ++i) a[i][i] = Rational(i + 1) / N;
  for (int i = 0; i + 1 < N; ++i) b[i][i + 1] = 1;
  f['A'] = a;
  f['B'] = b;  // not symmetric
  f['E'] = exact_unit(N, 1, 1);
  f['F'] = exact_unit(N, 1, 2);
  f['G'] = exact_unit(N, 2, 2);
  return f;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool uses(const Battery& b, char name) {
  for (const auto& q : b.quantities)
    for (const auto& t : q.terms)
      for (const auto& w : t.words)
        for (const auto& l : w)
          if (l.name == name) return true;
  return false;
}

constexpr std::uint64_t kChunk = 4096;

}  // namespace

Battery haar_basic_battery(int N) {
  Battery b{"haar-basic", N, standard_fixed(N), {}, true};
  const Rational inv = Rational(1) / N;
  b.quantities = {
      quantity("O11^2", {"EOEO'"}),
      quantity("O11*O12", {"EOF'O'"}),
      quantity("tr(OAO'B)", {"OAO'B"}, inv),
      quantity("tr(OBO'B)", {"OBO'B"}, inv),
      quantity("tr(OAOB)", {"OAOB"}, inv),
      quantity("tr(OA)tr(O'B)", {"OA", "O'B"}, inv * inv),
      quantity("tr(OAO'PBP')", {"OAO'PBP'"}, inv),
  };
  return b;
}

Battery two_vertex_battery(int N) {
  Battery b{"two-vertex", N, standard_fixed(N), {}, false};
  const Rational inv = Rational(1) / N;
  const Rational n2 = Rational(N) * N;
  b.quantities = {
      quantity("O11^4", {"EOEO'", "EOEO'"}),
      quantity("O11^2*O12^2", {"EOEO'", "EOGO'"}),
      quantity("O11^2*O22^2", {"EOEO'", "GOGO'"}),
      quantity("tr(OAO'B)^2", {"OAO'B", "OAO'B"}, inv * inv),
      quantity("tr(OAO'BOAO'B)", {"OAO'BOAO'B"}, inv),
      quantity("tr(OAO'B)tr(OBO'B')", {"OAO'B", "OBO'B'"}, inv * inv),
      quantity("tr(OAOB)tr(O'AO'B)", {"OAOB", "O'AO'B"}, inv * inv),
  };
  // centred at the exact mean, so the expectation is N² times the (co)variance
  auto mu = exact_expectation(quantity("", {"OAO'B"}, inv), b.fixed, N);
  auto centred_product = [&](const std::string& name, const std::string& x, const std::string& y) {
    TraceQuantity q{name, {}};
    q.terms.push_back(term({x, y}, n2 * inv * inv));
    q.terms.push_back(term({x}, -n2 * mu * inv));
    q.terms.push_back(term({y}, -n2 * mu * inv));
    q.terms.push_back(term({}, n2 * mu * mu));
    return q;
  };
  b.quantities.push_back(centred_product("N^2 var tr(OAO'B)", "OAO'B", "OAO'B"));
  b.quantities.push_back(centred_product("N^2 cov(tr(OAO'B),tr(PAP'B))", "OAO'B", "PAP'B"));
  return b;
}

Battery battery_by_name(const std::string& name, int N) {
  if (name == "haar-basic") return haar_basic_battery(N);
  if (name == "two-vertex") return two_vertex_battery(N);
  throw std::invalid_argument("unknown battery '" + name + "'");
}

TraceStatistics simulate(const Battery& b, std::uint64_t samples, std::uint64_t seed, int jobs) {
  const std::size_t k = b.quantities.size() + (b.with_det_sign ? 1 : 0);
  const bool need_p = uses(b, 'P');
  std::map<char, Eigen::MatrixXd> base;
  for (const auto& [name, m] : b.fixed) base[name] = to_double(m);
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<TraceStatistics> parts(chunks, TraceStatistics(k));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    auto mats = base;
    std::vector<double> x(k);
    for (std::uint64_t c; (c = next++) < chunks;) {
      HaarSampler sampler(b.N, splitmix(seed ^ splitmix(c + 1)));
      const std::uint64_t count = std::min(kChunk, samples - c * kChunk);
      for (std::uint64_t s = 0; s < count; ++s) {
        mats['O'] = sampler.next();
        if (need_p) mats['P'] = sampler.next();
        for (std::size_t i = 0; i < b.quantities.size(); ++i) x[i] = evaluate(b.quantities[i], mats);
        if (b.with_det_sign) x[k - 1] = mats['O'].determinant() > 0 ? 1.0 : -1.0;
        parts[c].add(x);
      }
    }
  };
  int threads = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(chunks, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  TraceStatistics total(k);
  for (const auto& p : parts) total.merge(p);
  return total;
}

BatteryReport validate_against_exact(const Battery& b, std::uint64_t samples, std::uint64_t seed, int jobs) {
  auto stats = simulate(b, samples, seed, jobs);
  BatteryReport rep{b.name, b.N, samples, seed, {}};
  auto line = [&](const std::string& name, double exact, std::size_t i) {
    BatteryLine l{name, exact, stats.mean(i), stats.standard_error(i), 0};
    double diff = l.estimate - exact;
    if (l.standard_error > 0)
      l.z = diff / l.standard_error;
    else
      l.z = std::abs(diff) < 1e-12 ? 0 : INFINITY;
    rep.lines.push_back(l);
  };
  for (std::size_t i = 0; i < b.quantities.size(); ++i)
    line(b.quantities[i].name, exact_expectation(b.quantities[i], b.fixed, b.N).get_d(), i);
  if (b.with_det_sign) line("det(O)", 0.0, b.quantities.size());
  return rep;
}

double BatteryReport::max_abs_z() const {
  double m = 0;
  for (const auto& l : lines) m = std::max(m, std::abs(l.z));
  return m;
}

std::string BatteryReport::to_json() const {
  nlohmann::ordered_json j;
  j["battery"] = battery;
  j["N"] = N;
  j["samples"] = samples;
  j["seed"] = seed;
  j["max_abs_z"] = max_abs_z();
  j["lines"] = nlohmann::ordered_json::array();
  for (const auto& l : lines)
    j["lines"].push_back({{"name", l.name}, {"exact", l.exact}, {"estimate", l.estimate},
                          {"standard_error", l.standard_error}, {"z", l.z}});
  return j.dump(1);
}

}  // namespace annc
