#pragma once

#include <gmpxx.h>

#include <string>

namespace annc {

using Rational = mpq_class;

inline std::string to_string(const Rational& r) { return r.get_str(); }

Rational parse_rational(const std::string& text);

// x^k for any integer k (x must be nonzero when k < 0)
Rational rpow(const Rational& x, long k);

Rational factorial(long n);
Rational binomial(long n, long k);
Rational catalan(long n);

}  // namespace annc
