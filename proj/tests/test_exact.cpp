#include <gtest/gtest.h>

#include "tracegraph/exact.hpp"

using namespace tracegraph;

TEST(Exact, SerializesWithExplicitDenominator) {
  EXPECT_EQ(to_string(Rational(4)), "4/1");
  EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(to_string(Integer(12)), "12");
}

TEST(Exact, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("9/5"), Rational(9, 5));
}

TEST(Exact, RejectsMalformedRationals) {
  EXPECT_ANY_THROW(parse_rational(""));
  EXPECT_ANY_THROW(parse_rational("1/0"));
  EXPECT_ANY_THROW(parse_rational("abc"));
  EXPECT_ANY_THROW(parse_rational("1/2/3"));
}

TEST(Exact, RoundTripsThroughText) {
  for (long num = -7; num <= 7; ++num) {
    for (long den = 1; den <= 5; ++den) {
      const Rational q = ratio(num, den);
      EXPECT_EQ(parse_rational(to_string(q)), q);
    }
  }
}

TEST(Exact, RatioIsCanonicalAndRejectsZeroDenominator) {
  EXPECT_EQ(ratio(6, -4), Rational(-3, 2));
  EXPECT_THROW(ratio(1, 0), std::invalid_argument);
}

TEST(Exact, Factorials) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(5), 120);
  EXPECT_EQ(factorial(20), Integer("2432902008176640000"));
  EXPECT_EQ(factorial(70), factorial(69) * 70);
  EXPECT_ANY_THROW(factorial(-1));
}

TEST(Exact, ToDouble) {
  EXPECT_DOUBLE_EQ(to_double(Rational(7, 2)), 3.5);
  EXPECT_DOUBLE_EQ(to_double(Rational(-1, 3)), -1.0 / 3.0);
}
