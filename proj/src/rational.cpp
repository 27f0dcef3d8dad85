#include "featmc/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace featmc {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (den != 1) {
        __int128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    if (!fits(num) || !fits(den)) throw std::overflow_error("rational arithmetic overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational { throw std::invalid_argument("not a number: '" + std::string(text) + "'"); };
    if (text.empty()) return fail();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational a = parse(text.substr(0, slash));
        Rational b = parse(text.substr(slash + 1));
        if (b.is_zero()) return fail();
        return a / b;
    }

    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    __int128 mantissa = 0;
    int scale = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            any_digit = true;
            mantissa = mantissa * 10 + (c - '0');
            if (mantissa > (static_cast<__int128>(1) << 100)) throw std::overflow_error("numeric literal too long");
            if (seen_point) ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) return fail();
    int exponent = 0;
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') return fail();
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        if (i == text.size()) return fail();
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail();
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 40) throw std::overflow_error("numeric literal exponent too large");
        }
        if (exp_negative) exponent = -exponent;
    }
    int shift = exponent - scale;
    __int128 den = 1;
    for (; shift > 0; --shift) mantissa *= 10;
    for (; shift < 0; ++shift) den *= 10;
    if (negative) mantissa = -mantissa;
    return from_wide(mantissa, den);
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

std::int64_t Rational::round() const {
    // |x| + 1/2, floored, with the sign restored
    __int128 a = num_ < 0 ? -static_cast<__int128>(num_) : num_;
    __int128 r = (2 * a + den_) / (2 * static_cast<__int128>(den_));
    return static_cast<std::int64_t>(num_ < 0 ? -r : r);
}

Rational Rational::operator-() const {
    return from_wide(-static_cast<__int128>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
        std::int64_t out;
        if (!__builtin_add_overflow(num_, o.num_, &out)) {
            num_ = out;
            return *this;
        }
    }
    *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                      static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    return *this += -o;
}

Rational& Rational::operator*=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
        std::int64_t out;
        if (!__builtin_mul_overflow(num_, o.num_, &out)) {
            num_ = out;
            return *this;
        }
    }
    *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("division by zero");
    *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace featmc
