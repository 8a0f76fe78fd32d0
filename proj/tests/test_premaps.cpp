#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "annc/premaps.hpp"

using namespace annc;

namespace {

Premap gluing() { return Premap::parse("(1,5,-4)(4,-5,-1)(2)(-2)(3)(-3)(6,-7)(7,-6)"); }

long double_factorial(int n) {
  long r = 1;
  for (int k = 2 * n - 1; k > 1; k -= 2) r *= k;
  return r;
}

std::vector<int> cycle_type(const SetPartition& u) { return u.block_sizes(); }

std::vector<AnnulusShape> shapes(int maxn) {
  std::vector<AnnulusShape> v;
  for (int n = 2; n <= maxn; ++n)
    for (int p = 1; p < n; ++p) v.push_back({p, n - p});
  return v;
}

}  // namespace

TEST_CASE("premap axioms, Π and FD") {
  auto id = Premap::identity(range(1, 4));
  CHECK(pairing_partition(id) == SetPartition::singletons(range(1, 4)));
  CHECK(fd(id) == Permutation::identity(4));

  auto r = gluing();
  CHECK(r.str() == "(1,5,-4)(4,-5,-1)(2)(-2)(3)(-3)(6,-7)(7,-6)");
  CHECK(pairing_partition(r) == SetPartition::parse("[[1,4,5],[2],[3],[6,7]]"));
  CHECK(fd(r) == Permutation::from_cycles({{1, 5, -4}, {2}, {3}, {6, -7}}));
  CHECK(Premap::parse("(1,5,-4)(2)(3)(6,-7)") == r);

  auto bad = Permutation::from_cycles({{1, 2, -1, -2}});
  CHECK_FALSE(validate(bad));
  try {
    Premap{bad};
    FAIL("accepted");
  } catch (const PremapError& e) {
    CHECK(e.k == 1);
  }
  // right mirror shape but k and −k share a cycle
  CHECK(premap_violation(Permutation::from_cycles({{1, -1}})) == 1);
}

TEST_CASE("Kreweras complement and Euler characteristic of the gluing example") {
  auto r = gluing();
  auto t = tau_pq(3, 4);
  CHECK(premap_kreweras(r, t) == Premap::parse("(1,2,3,5,-6,7,-4)(4,-7,6,-5,-3,-2,-1)"));
  CHECK(premap_euler(r, t) == 0);
  CHECK_FALSE(is_pm_nc(r, t));
  CHECK_THROWS_AS(premap_kreweras(r, tau_n(3)), std::invalid_argument);
}

TEST_CASE("identity premap has χ = 2#Π(τ)") {
  for (int n = 1; n <= 5; ++n) {
    auto id = Premap::identity(range(1, n));
    auto perms = std::vector<int>(range(1, n));
    do {
      Permutation t(range(1, n), perms);
      CHECK(premap_euler(id, t) == 2 * t.num_cycles());
    } while (std::next_permutation(perms.begin(), perms.end()));
  }
}

TEST_CASE("PM(n) enumeration against filtered bijections") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> g;
    for (int k = n; k >= 1; --k) g.push_back(-k);
    for (int k = 1; k <= n; ++k) g.push_back(k);
    std::set<Permutation> brute;
    auto img = g;
    do {
      Permutation m(g, img);
      if (validate(m)) brute.insert(m);
    } while (std::next_permutation(img.begin(), img.end()));
    const auto& pm = all_premaps(n);
    CHECK(static_cast<long>(pm.size()) == double_factorial(n));
    std::set<Permutation> got;
    for (auto& m : pm) got.insert(m.map());
    CHECK(got == brute);
  }
  CHECK(all_premaps(5).size() == 945);
}

TEST_CASE("closure and the χ bound over all premaps and bases") {
  for (int n = 1; n <= 4; ++n) {
    const auto& pm = all_premaps(n);
    for (auto& m : pm) {
      CHECK(validate(m.inverse().map()));
      auto perms = range(1, n);
      do {
        Permutation t(range(1, n), perms);
        auto k = premap_kreweras(m, t);  // constructor validates
        CHECK(k.support() == m.support());
        CHECK_NOTHROW(premap_euler(m, t));
      } while (std::next_permutation(perms.begin(), perms.end()));
      if (n <= 3)
        for (auto& r : pm) CHECK_NOTHROW(premap_euler(m, r));
    }
  }
}

TEST_CASE("noncrossing premaps") {
  auto one = enumerate_pm_nc(tau_n(1));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Premap::identity({1}));
  // golden value from the exhaustive filter over PM(2)
  CHECK(enumerate_pm_nc(tau_n(2)).size() == 2);
  const int catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int n = 1; n <= 6; ++n) CHECK(enumerate_pm_nc(tau_n(n)).size() == static_cast<std::size_t>(catalan[n]));
}

TEST_CASE("K_{3,5} premaps") {
  AnnulusShape s{3, 5};
  auto disc = Premap::parse("(1,3)(-3,-1)(2)(-2)(4,7)(-7,-4)(5)(-5)(6)(-6)(8)(-8)");
  auto t1 = trisect(disc, s);
  CHECK(t1.family == PremapFamily::DiscLike);
  CHECK(t1.perm == Permutation::parse("(1,3)(2)(4,7)(5)(6)(8)", range(1, 8)));
  auto flipped = Premap::parse("(1,-6,2)(-2,6,-1)(3,-5)(5,-3)(4,7)(-7,-4)(8)(-8)");
  auto t3 = trisect(flipped, s);
  CHECK(t3.family == PremapFamily::FlippedAnnLike);
  CHECK(t3.perm == Permutation::parse("(1,2,6)(3,7)(4)(5,8)", range(1, 8)));
  CHECK(untrisect(t1, s) == disc);
  CHECK(untrisect(t3, s) == flipped);
  for (auto& m : {disc, flipped}) CHECK(is_pm_nc(m, s.tau()));
  CHECK_THROWS_AS(trisect(gluing(), {3, 4}), std::invalid_argument);
}

TEST_CASE("trisection is a bijection onto disc + annular + annular, p+q <= 6") {
  for (auto s : shapes(6)) {
    auto nc = enumerate_pm_nc(s.tau());
    std::map<PremapFamily, std::set<Permutation>> images;
    int type_bad = 0, roundtrip_bad = 0;
    for (auto& m : nc) {
      auto t = trisect(m, s);
      CHECK(images[t.family].insert(t.perm).second);
      roundtrip_bad += !(untrisect(t, s) == m);
      auto lhs = cycle_type(SetPartition::of(kreweras(t.perm, s.tau())));
      auto rhs = cycle_type(pairing_partition(premap_kreweras(m, s.tau())));
      type_bad += lhs != rhs;
    }
    CHECK(roundtrip_bad == 0);
    CHECK(type_bad == 0);
    CHECK(images[PremapFamily::DiscLike].size() == enumerate_disc_nc(s).size());
    CHECK(images[PremapFamily::AnnLike].size() == enumerate_ann_nc(s).size());
    CHECK(images[PremapFamily::FlippedAnnLike].size() == enumerate_ann_nc(s).size());
    for (auto& pi : enumerate_ann_nc(s))
      for (auto f : {PremapFamily::AnnLike, PremapFamily::FlippedAnnLike}) {
        auto m = untrisect({f, pi}, s);
        CHECK(is_pm_nc(m, s.tau()));
        CHECK(trisect(m, s).family == f);
      }
  }
}

TEST_CASE("PPM′ pairs on two cycles") {
  for (auto s : shapes(5)) {
    auto pairs = enumerate_ppm_prime(s.tau());
    std::size_t connected = 0, joined = 0;
    for (auto& pp : pairs) {
      CHECK(is_ppm_prime(pp, s.tau()));
      auto pm = pairing_partition(pp.premap);
      if (join(pm, SetPartition::of(s.tau())).num_blocks() == 1) {
        CHECK(pp.partition == pm);
        ++connected;
      } else {
        CHECK(pm.num_blocks() - pp.partition.num_blocks() == 1);
        ++joined;
      }
    }
    CHECK(connected == 2 * enumerate_ann_nc(s).size());
    CHECK(joined == enumerate_ps_prime(s).size());
  }
}

TEST_CASE("restriction to blocks") {
  auto r = gluing();
  CHECK(r.restrict_to({1, 4, 5}) == Premap::parse("(1,5,-4)"));
  CHECK(r.restrict_to({6, 7}).str() == "(6,-7)(7,-6)");
  CHECK_THROWS(r.restrict_to({1, 4}));
}
