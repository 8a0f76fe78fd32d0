#include "annc/rational.hpp"

#include <stdexcept>

namespace annc {

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  r.canonicalize();
  return r;
}

Rational rpow(const Rational& x, long k) {
  if (k < 0) {
    if (x == 0) throw std::domain_error("rpow: zero to a negative power");
    Rational inv = 1 / x;
    return rpow(inv, -k);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(k));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of negative");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

Rational catalan(long n) { return binomial(2 * n, n) / (n + 1); }

}  // namespace annc
