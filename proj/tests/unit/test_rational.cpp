#include <gtest/gtest.h>

#include <limits>

#include "featmc/rational.hpp"

using featmc::Rational;

TEST(Rational, ParsesDecimalsExactly) {
    EXPECT_EQ(Rational::parse("0.59"), Rational(59, 100));
    EXPECT_EQ(Rational::parse("0.07"), Rational(7, 100));
    EXPECT_EQ(Rational::parse("7/20"), Rational(7, 20));
    EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
    EXPECT_EQ(Rational::parse("-2.50"), Rational(-5, 2));
    EXPECT_EQ(Rational::parse("3"), Rational(3));
}

TEST(Rational, RejectsMalformedText) {
    EXPECT_THROW(Rational::parse(""), std::invalid_argument);
    EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("1.2.3"), std::invalid_argument);
}

TEST(Rational, BranchSumsAreExact) {
    // 0.9 + 0.07 + 0.03 is not 1 in binary floating point, but is here
    Rational sum = Rational::parse("0.9") + Rational::parse("0.07") + Rational::parse("0.03");
    EXPECT_EQ(sum, Rational(1));
    EXPECT_EQ(Rational::parse("0.59") + Rational::parse("0.4") + Rational::parse("0.01"), Rational(1));
}

TEST(Rational, NormalizesSignAndGcd) {
    Rational r(6, -8);
    EXPECT_EQ(r.numerator(), -3);
    EXPECT_EQ(r.denominator(), 4);
    EXPECT_EQ(r.to_string(), "-3/4");
    EXPECT_EQ(Rational(4, 2).to_string(), "2");
}

TEST(Rational, Rounding) {
    EXPECT_EQ(Rational(9, 2).round(), 5);
    EXPECT_EQ(Rational(17, 2).round(), 9);
    EXPECT_EQ(Rational(-9, 2).round(), -5);
    EXPECT_EQ(Rational(7, 3).round(), 2);
    EXPECT_EQ(Rational(-7, 3).floor(), -3);
    EXPECT_EQ(Rational(-7, 3).ceil(), -2);
}

TEST(Rational, ArithmeticAndOrdering) {
    EXPECT_EQ(Rational(1, 3) * Rational(3, 4), Rational(1, 4));
    EXPECT_EQ(Rational(1, 3) - Rational(1, 2), Rational(-1, 6));
    EXPECT_EQ(Rational(1, 3) / Rational(2, 3), Rational(1, 2));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
    EXPECT_DOUBLE_EQ(Rational(3, 5).to_double(), 0.6);
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, DetectsOverflow) {
    Rational big(std::numeric_limits<std::int64_t>::max());
    EXPECT_THROW(big + Rational(1), std::overflow_error);
    EXPECT_THROW(big * Rational(2), std::overflow_error);
}
