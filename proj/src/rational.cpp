#include "nform/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace nform {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

Integer parse_integer(std::string_view s, bool allow_sign) {
  std::size_t i = 0;
  bool neg = false;
  if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  Integer v(std::string(s.substr(i)), 10);
  return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, true));
  Integer num = parse_integer(text.substr(0, slash), true);
  Integer den = parse_integer(text.substr(slash + 1), false);
  return make_rational(num, den);
}

std::string to_string(const Rational& r) { return r.get_str(); }

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

}  // namespace nform
