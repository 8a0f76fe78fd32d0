#include "doctest.h"

#include <cmath>

#include "annc/cumulant_engine.hpp"
#include "annc/matrix_cumulants.hpp"

using namespace annc;

namespace {

std::vector<int> range1(int n) {
  std::vector<int> v;
  for (int i = 1; i <= n; ++i) v.push_back(i);
  return v;
}

// every partition of the support lying above Π(π)
std::vector<SetPartition> above(const Premap& pi) {
  std::vector<SetPartition> out;
  for (const auto& u : all_partitions(pi.support()))
    if (leq(pairing_partition(pi), u)) out.push_back(u);
  return out;
}

TraceModel fixture(long N) { return spectrum_model(three_point_spectrum(N), 4); }

}  // namespace

TEST_CASE("trace keys are invariant under rotation and reversal") {
  auto a = Premap::parse("(1,2,-3)");
  auto b = Premap::parse("(2,-3,1)");
  auto c = Premap::parse("(3,-2,-1)");  // reversed with signs flipped
  CHECK(canonical_trace_key(a) == canonical_trace_key(b));
  CHECK(canonical_trace_key(a) == canonical_trace_key(c));
  CHECK(canonical_trace_key(a) != canonical_trace_key(Premap::parse("(1,2,3)")));
  CHECK(trace_words(Premap::parse("(1,5,-4)(6,-7)")).size() == 2);
}

TEST_CASE("one matrix: c equals the expected trace") {
  auto m = random_trace_model(3);
  MatrixCumulants mc(m, 6);
  auto pi = Premap::parse("(1)");
  CHECK(mc.c(pi) == mc.moment(pi));
  CHECK(mc.vertex(pi) == mc.c(pi));
}

TEST_CASE("moment-cumulant roundtrip for premaps") {
  for (unsigned long seed : {1UL, 2UL}) {
    MatrixCumulants mc(random_trace_model(seed), 7);
    for (int n = 1; n <= 3; ++n)
      for (const auto& pi : all_premaps(n)) CHECK(mc.moment_from_cumulants(pi) == mc.moment(pi));
  }
  MatrixCumulants mc(random_trace_model(9), 9);
  const auto& pm4 = all_premaps(4);
  for (std::size_t i = 0; i < pm4.size(); i += 13) CHECK(mc.moment_from_cumulants(pm4[i]) == mc.moment(pm4[i]));
}

TEST_CASE("matrix-vertex and vertex-matrix are inverse") {
  MatrixCumulants mc(random_trace_model(4), 8);
  int checked = 0;
  for (int n = 1; n <= 4; ++n)
    for (const auto& pi : all_premaps(n))
      for (const auto& u : above(pi)) {
        CHECK(mc.c_from_vertex(u, pi) == mc.c(u, pi));
        ++checked;
      }
  CHECK(checked > 105);
}

TEST_CASE("vertex cumulants are multiplicative over the blocks") {
  MatrixCumulants mc(random_trace_model(5), 8);
  auto pi = Premap::parse("(1,-2)(3)(4)");
  auto u = SetPartition::parse("[[1,2,3],[4]]");
  CHECK(mc.vertex(u, pi) == mc.vertex(pi.restrict_to({1, 2, 3})) * mc.vertex(pi.restrict_to({4})));
  CHECK(mc.vertex(pairing_partition(pi), pi) == mc.c(pairing_partition(pi), pi));
}

TEST_CASE("two-vertex cumulant of the gluing example") {
  MatrixCumulants mc(random_trace_model(6), 12);
  auto pi = Premap::parse("(1,5,-4)(6,-7)");
  CHECK(pi.support() == std::vector<int>{1, 4, 5, 6, 7});
  CHECK(mc.vertex(pi) == mc.c(pi) - mc.c(pi.restrict_to({1, 4, 5})) * mc.c(pi.restrict_to({6, 7})));
}

TEST_CASE("connected-diagram expansion of vertex cumulants") {
  MatrixCumulants mc(random_trace_model(8), 7);
  for (int n = 1; n <= 3; ++n)
    for (const auto& pi : all_premaps(n))
      for (const auto& u : above(pi)) CHECK(mc.vertex_connected(u, pi) == mc.vertex(u, pi));
}

TEST_CASE("log generating function") {
  MatrixCumulants mc(random_trace_model(10), 10);
  auto two = Premap::parse("(1,-2)(3)");
  auto r2 = log_generating_check(mc, two);
  CHECK(r2.r == 2);
  CHECK(r2.from_log == mc.c(two) - mc.c(two.restrict_to({1, 2})) * mc.c(two.restrict_to({3})));
  CHECK(r2.ok());
  for (const auto& pi : all_premaps(4)) CHECK(log_generating_check(mc, pi).ok());
  auto five = Premap::identity(range1(5));
  auto r5 = log_generating_check(mc, five);
  CHECK(r5.r == 5);
  CHECK(r5.ok());
  CHECK(r5.from_log != 0);
}

TEST_CASE("mixed vertex cumulants of a factorizing fixture vanish") {
  auto base = random_trace_model(11);
  auto factor = [base](const Premap& rho) {
    std::vector<int> in, out;
    for (int k : rho.support()) (k <= 2 ? in : out).push_back(k);
    auto part = pairing_partition(rho);
    for (const auto& b : part.blocks())
      if (b.front() <= 2 && b.back() > 2) return Rational(0);
    Rational v = 1;
    if (!in.empty()) v *= base(rho.restrict_to(in));
    if (!out.empty()) v *= base(rho.restrict_to(out));
    return v;
  };
  auto mc = MatrixCumulants::from_cumulants(factor, 8);
  int mixed = 0, pure = 0;
  for (const auto& pi : all_premaps(4)) {
    CHECK(mc.vertex(pi) == 0);
    ++mixed;
    auto part = pairing_partition(pi);
    for (const auto& b : part.blocks())
      if (b.back() <= 2) {
        auto sub = pi.restrict_to(b);
        if (mc.vertex(sub) != 0) ++pure;
      }
  }
  CHECK(mixed == 105);
  CHECK(pure > 0);
  CHECK_THROWS_AS(mc.moment(Premap::parse("(1)")), std::logic_error);
}

TEST_CASE("classical cumulants of traces from vertex cumulants") {
  MatrixCumulants mc(random_trace_model(12), 6);
  for (const auto& r : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {2, 1}, {1, 1, 1}, {2, 2}, {1, 3}, {1, 1, 2}, {4}}) {
    auto rep = classical_to_vertex_expansion(mc, r);
    CHECK(rep.ok());
    if (r.size() > 1) CHECK(rep.expansion != rep.unfiltered);
  }
  // deterministic traces: every classical cumulant of order ≥ 2 is zero
  MatrixCumulants det(fixture(8), 8);
  auto rep = classical_to_vertex_expansion(det, {1, 2});
  CHECK(rep.classical == 0);
  CHECK(rep.expansion == 0);
  CHECK_THROWS(classical_to_vertex_expansion(det, {2, 3}));
}

TEST_CASE("fixture spectrum") {
  auto d = three_point_spectrum(8);
  Rational sum = 0;
  for (const auto& x : d) sum += x;
  CHECK(sum / 8 == three_point_moment(1));
  CHECK(three_point_moment(2) == Rational(17, 4));
  CHECK_THROWS(three_point_spectrum(6));
}

TEST_CASE("order of vertex cumulants") {
  for (const auto& r : std::vector<std::vector<int>>{{2}, {1, 1}, {1, 2}, {1, 1, 1}}) {
    auto s = asymptotic_order_sweep(fixture, r, {8, 16, 32, 64});
    INFO("r size " << r.size() << " slope " << s.slope);
    CHECK(s.ok());
  }
}

TEST_CASE("two-vertex limit is the second-order cumulant") {
  MomentOracle lim;
  lim.set_fill([](const Word& w) { return three_point_moment(static_cast<int>(w.size())); },
               [](const Word&, const Word&) { return Rational(0); });
  auto x = parse_word("x")[0];
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}}) {
    auto est = second_order_limit(fixture, p, q, {8, 16, 32, 64});
    double kappa = kappa_pq(lim, Word(p, x), Word(q, x)).get_d();
    CHECK(std::abs(est.extrapolated - kappa) <= 0.02 * std::abs(kappa));
  }
  CHECK_THROWS(second_order_limit(fixture, 1, 1, {8, 12}));
}
