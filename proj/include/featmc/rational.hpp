#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace featmc {

/**
 * Exact rational number over 64-bit integers, always kept in lowest terms
 * with a positive denominator. Arithmetic that does not fit raises
 * std::overflow_error instead of silently wrapping.
 */
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by intent
    Rational(std::int64_t num, std::int64_t den);

    /// Parses "3", "-2", "0.59", "1e-3", "2.5E2" or "7/20" exactly.
    static Rational parse(std::string_view text);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "1", "-3", "59/100".
    std::string to_string() const;

    std::int64_t floor() const;
    std::int64_t ceil() const;
    /// Nearest integer; ties go away from zero.
    std::int64_t round() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& other);
    Rational& operator-=(const Rational& other);
    Rational& operator*=(const Rational& other);
    Rational& operator/=(const Rational& other);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace featmc

template <>
struct std::hash<featmc::Rational> {
    std::size_t operator()(const featmc::Rational& r) const noexcept {
        return std::hash<std::int64_t>{}(r.numerator()) * 31u + std::hash<std::int64_t>{}(r.denominator());
    }
};
