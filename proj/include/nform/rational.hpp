#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nform {

// Exact rational scalar. mpq_class keeps values canonical as long as every
// construction from raw numerator/denominator goes through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

// Accepts "p", "-p", "p/q". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

Integer factorial(unsigned n);

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace nform
