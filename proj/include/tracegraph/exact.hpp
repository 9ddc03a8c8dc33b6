#ifndef TRACEGRAPH_EXACT_HPP
#define TRACEGRAPH_EXACT_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracegraph {

using Integer = mpz_class;
using Rational = mpq_class;

/// Thrown when an enumeration would exceed its default size limit.
class CostGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serializes as "num/den" with den > 0, including integers ("4/1").
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "a", "a/b" or a finite decimal such as "-1.25".
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

/// num / den in canonical form; throws on a zero denominator.
Rational ratio(const Integer& num, const Integer& den);

/// n! for n >= 0; values up to 64! are memoized.
Integer factorial(long n);

}  // namespace tracegraph

#endif  // TRACEGRAPH_EXACT_HPP
