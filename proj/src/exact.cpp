#include "tracegraph/exact.hpp"

#include <array>
#include <cctype>

namespace tracegraph {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer integer_from(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) {
      throw std::invalid_argument("malformed rational: " + std::string(text));
    }
    Integer d = integer_from(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    Rational q(integer_from(num), d);
    q.canonicalize();
    return q;
  }
  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
      negative = whole[0] == '-';
      whole.remove_prefix(1);
    }
    const bool whole_ok = whole.empty() || is_integer_literal(whole);
    const bool frac_ok = frac.empty() || is_integer_literal(frac);
    if (!whole_ok || !frac_ok || (whole.empty() && frac.empty()) ||
        (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))) {
      throw std::invalid_argument("malformed rational: " + std::string(text));
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits = integer_from(std::string(whole.empty() ? "0" : whole) + std::string(frac));
    Rational q(negative ? Integer(-digits) : digits, scale);
    q.canonicalize();
    return q;
  }
  if (!is_integer_literal(text)) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
  return Rational(integer_from(text));
}

double to_double(const Rational& q) { return q.get_d(); }

Rational ratio(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  static const std::array<Integer, 65> table = [] {
    std::array<Integer, 65> t;
    t[0] = 1;
    for (unsigned long i = 1; i < t.size(); ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < static_cast<long>(table.size())) return table[n];
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

}  // namespace tracegraph
