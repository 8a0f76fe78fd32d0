#include "doctest.h"

#include <set>

#include "annc/cumulant_engine.hpp"
#include "annc/noncrossing.hpp"

using namespace annc;

namespace {

Word w(const char* s) { return parse_word(s); }

// semicircular x: κ₁(xx) = 1, every other cumulant zero
CumulantTable semicircle() {
  CumulantTable k;
  k.set_fill([](const Word& v) { return v.size() == 2 ? Rational(1) : Rational(0); },
             [](const Word&, const Word&) { return Rational(0); });
  return k;
}

Rational hashed(const std::string& key, int salt) {
  std::size_t h = std::hash<std::string>{}(key) ^ (0x9E3779B9u * static_cast<unsigned>(salt + 1));
  return Rational(static_cast<long>(h % 13) - 6) / static_cast<long>((h >> 8) % 3 + 1);
}

std::vector<Letter> letters(const char* s) {
  std::vector<Letter> out;
  for (int i = 0; s[i]; ++i) out.push_back({s[i], false, false, i});
  return out;
}

}  // namespace

TEST_CASE("word parsing and canonical keys") {
  auto v = w("ab'~c");
  REQUIRE(v.size() == 3);
  CHECK(v[1].transposed);
  CHECK(v[2].centred);
  CHECK(word_str(v) == "ab'~c");
  CHECK(word_str(transpose(w("ab'c"))) == "c'ba'");
  CHECK(key1(w("ba")) == key1(w("ab")));
  CHECK(key1(w("ab")) == key1(w("b'a'")));
  CHECK(key1(w("abc")) != key1(w("acb")));
  CHECK(key1(w("abc")) == key1(w("c'b'a'")));
  CHECK(key2(w("ba"), w("c")) == key2(w("c"), w("ab")));
  CHECK(key2(w("ab"), w("c")) == key2(w("b'a'"), w("c")));
  CHECK(key2(w("abc"), w("d")) != key2(w("acb"), w("d")));
  CHECK_THROWS(parse_word("'a"));
  CHECK_THROWS(parse_word("a1"));
}

TEST_CASE("tables throw on missing keys and roundtrip through json") {
  MomentOracle m;
  m.set1(w("a"), Rational(1) / 2);
  m.set1(w("ab'"), 3);
  m.set2(w("a"), w("b"), -2);
  CHECK_THROWS_AS(m.alpha1(w("b")), std::out_of_range);
  auto back = MomentOracle::from_json(m.to_json());
  CHECK(back.alpha1(w("ba'")) == 3);
  CHECK(back.alpha2(w("b"), w("a")) == -2);
  CHECK(back.alpha1(w("a")) == Rational(1) / 2);
  CHECK_THROWS(MomentOracle::from_json(R"({"alpha1":{},"bogus":{}})"));
}

TEST_CASE("centred letters expand multilinearly") {
  MomentOracle m;
  m.set1(w("a"), 2);
  m.set1(w("b"), 3);
  m.set1(w("ab"), 7);
  m.set2(w("a"), w("b"), 5);
  CHECK(m.alpha1(w("~a")) == 0);
  CHECK(m.alpha1(w("~a~b")) == 7 - 6);
  CHECK(m.alpha2(w("~a"), w("b")) == 5);
  CHECK(m.alpha2(w("~a"), w("~b")) == 5);
}

TEST_CASE("first-order free cumulants") {
  auto m = make_moment_oracle(letters("ab"), 4, [](const std::string& k) { return hashed(k, 1); });
  auto a = w("a"), b = w("b"), ab = w("ab");
  CHECK(free_cumulant(m, a) == m.alpha1(a));
  CHECK(free_cumulant(m, ab) == m.alpha1(ab) - m.alpha1(a) * m.alpha1(b));
  auto abc = w("aba'");
  Rational k3 = m.alpha1(abc) - m.alpha1(w("ab")) * m.alpha1(w("a'")) - m.alpha1(w("ba'")) * m.alpha1(a) -
                m.alpha1(w("aa'")) * m.alpha1(b) + 2 * m.alpha1(a) * m.alpha1(b) * m.alpha1(w("a'"));
  CHECK(free_cumulant(m, abc) == k3);
  // semicircle moments are Catalan numbers
  auto sc = semicircle();
  const long catalan[] = {1, 1, 2, 5, 14};
  for (int n = 1; n <= 4; ++n) CHECK(free_moment(sc, Word(2 * n, w("x")[0])) == catalan[n]);
  CHECK(free_moment(sc, w("xxx")) == 0);
}

TEST_CASE("second-order base case") {
  auto m = make_moment_oracle(letters("ab"), 3, [](const std::string& k) { return hashed(k, 2); });
  auto a = w("a"), b = w("b");
  Rational expect = m.alpha2(a, b) - m.alpha1(w("ab")) - m.alpha1(w("ab'")) + 2 * m.alpha1(a) * m.alpha1(b);
  CHECK(kappa_pq(m, a, b) == expect);
  CHECK_THROWS_AS(kappa_pq(m, Word{}, b), std::invalid_argument);
}

TEST_CASE("real Gaussian fluctuation moments") {
  // twice the complex counts: 1, 3, 2, 12
  auto sc = semicircle();
  auto x = [](int n) { return Word(n, parse_word("x")[0]); };
  CHECK(alpha_pq(sc, x(1), x(1)) == 2);
  CHECK(alpha_pq(sc, x(1), x(3)) == 6);
  CHECK(alpha_pq(sc, x(2), x(2)) == 4);
  CHECK(alpha_pq(sc, x(3), x(3)) == 24);
  CHECK(alpha_pq(sc, x(1), x(2)) == 0);
  CHECK(alpha_pq(sc, x(2), x(3)) == 0);
  auto m = lazy_moments(sc);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) CHECK(kappa_pq(m, x(p), x(q)) == 0);
}

TEST_CASE("only first-order cumulants give no second-order moments") {
  CumulantTable k;
  k.set_fill([](const Word& v) { return hashed(key1(v), 3); }, [](const Word&, const Word&) { return Rational(0); });
  auto m = lazy_moments(k);
  for (const auto& [xs, ys] : std::vector<std::pair<const char*, const char*>>{{"a", "b"}, {"ab", "c"}, {"ab'", "ca"}}) {
    CHECK(m.alpha2(w(xs), w(ys)) != 0);  // annular terms survive
    CHECK(kappa_pq(m, w(xs), w(ys)) == 0);
  }
}

TEST_CASE("moment-cumulant roundtrip on random oracles") {
  for (int seed = 0; seed < 6; ++seed) {
    auto m = make_moment_oracle(letters("ab"), 4, [seed](const std::string& k) { return hashed(k, seed); });
    auto k = cumulants_from_moments(m);
    auto back = moments_from_cumulants(k);
    CHECK(back.table1() == m.table1());
    CHECK(back.table2() == m.table2());
  }
  auto k = random_cumulants(11, false);
  auto m = lazy_moments(k);
  for (const auto& [xs, ys] : std::vector<std::pair<const char*, const char*>>{
           {"abc", "d"}, {"ab", "cd"}, {"a'b", "ca"}, {"abc", "da'"}, {"ab", "cde"}, {"abcd", "ab'c"}})
    CHECK(kappa_pq(m, w(xs), w(ys)) == k.kappa2(w(xs), w(ys)));
}

TEST_CASE("second-order values are cyclic and transpose invariant") {
  auto k = random_cumulants(5, false);
  auto m = lazy_moments(k);
  auto xs = w("abc"), ys = w("da'");
  auto base = alpha_pq(k, xs, ys);
  for (int r = 0; r < 3; ++r) {
    std::rotate(xs.begin(), xs.begin() + 1, xs.end());
    CHECK(alpha_pq(k, xs, ys) == base);
    CHECK(alpha_pq(k, ys, xs) == base);
  }
  CHECK(alpha_pq(k, transpose(xs), transpose(ys)) == base);
  CHECK(alpha_pq(k, transpose(xs), ys) == base);
  CHECK(alpha_pq(k, xs, transpose(ys)) == base);
}

TEST_CASE("PS' forms") {
  auto k = random_cumulants(3, false);
  auto m = lazy_moments(k);
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 3}, {2, 3}}) {
    auto xs = w("abcde"), ys = w("fgh");
    xs.resize(p);
    ys.resize(q);
    int mism = 0, n = 0;
    for (const auto& up : enumerate_ps_prime({p, q})) {
      ++n;
      if (alpha_upi(k, up, xs, ys) != alpha_upi_direct(m, up, xs, ys)) ++mism;
      CHECK(kappa_upi(m, up, xs, ys) == kappa_upi_direct(k, up, xs, ys));
    }
    CHECK(n > 0);
    CHECK(mism == 0);
  }
}

TEST_CASE("spoke formula readings") {
  auto m = make_moment_oracle(letters("ab"), 2, [](const std::string& k) { return hashed(k, 4); });
  auto a = w("a"), b = w("b");
  CHECK(spoke_formula(m, w("ab"), w("aba"), SpokeReading::Diagram) == 0);
  CHECK(spoke_formula(m, a, b, SpokeReading::Printed) == 2 * m.alpha1(w("ab")));
  CHECK(spoke_formula(m, a, b, SpokeReading::Diagram) == m.alpha1(w("ab")) + m.alpha1(w("ab'")));
  auto xs = w("ab"), ys = w("ba");
  Rational expect = m.alpha1(w("ab")) * m.alpha1(w("ba")) + m.alpha1(w("aa")) * m.alpha1(w("bb")) +
                    m.alpha1(w("ab'")) * m.alpha1(w("ba'")) + m.alpha1(w("aa'")) * m.alpha1(w("bb'"));
  CHECK(spoke_formula(m, xs, ys, SpokeReading::Diagram) == expect);
}

TEST_CASE("freeness battery") {
  auto within = random_cumulants(7, true);
  auto alpha = letters("ab");
  auto diag = freeness_roundtrip_test(alpha, within, 3, SpokeReading::Diagram);
  CHECK(diag.checked_first > 0);
  CHECK(diag.checked_second > 0);
  CHECK(diag.checked_converse > 0);
  CHECK(diag.first_order_failures.empty());
  CHECK(diag.failures.empty());
  CHECK(diag.converse_failures.empty());
  auto printed = freeness_roundtrip_test(alpha, within, 2, SpokeReading::Printed);
  CHECK(!printed.failures.empty());
}
