#pragma once

// Arbitrary-precision integers and rationals. Thin value types over GMP.

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace expderiv {

class ExactInt {
public:
    ExactInt() = default;
    ExactInt(long v) : v_(v) {}
    ExactInt(int v) : v_(v) {}
    ExactInt(unsigned long v) : v_(v) {}
    explicit ExactInt(mpz_class v) : v_(std::move(v)) {}

    /// Parses an optionally signed decimal string; throws std::invalid_argument.
    static ExactInt from_string(std::string_view s);

    std::string to_string() const { return v_.get_str(10); }
    double to_double() const;
    /// Correctly scaled even when the magnitude exceeds the binary64 range.
    long double to_long_double() const;
    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }

    const mpz_class& raw() const { return v_; }

    ExactInt& operator+=(const ExactInt& o) { v_ += o.v_; return *this; }
    ExactInt& operator-=(const ExactInt& o) { v_ -= o.v_; return *this; }
    ExactInt& operator*=(const ExactInt& o) { v_ *= o.v_; return *this; }

    friend ExactInt operator+(ExactInt a, const ExactInt& b) { return a += b; }
    friend ExactInt operator-(ExactInt a, const ExactInt& b) { return a -= b; }
    friend ExactInt operator*(ExactInt a, const ExactInt& b) { return a *= b; }
    friend ExactInt operator-(const ExactInt& a) { return ExactInt(mpz_class(-a.v_)); }

    friend bool operator==(const ExactInt& a, const ExactInt& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const ExactInt& a, const ExactInt& b) {
        return cmp(a.v_, b.v_) <=> 0;
    }

private:
    mpz_class v_;
};

/// Always held in lowest terms with a positive denominator.
class ExactRational {
public:
    ExactRational() = default;
    ExactRational(long v) : v_(v) {}
    ExactRational(int v) : v_(v) {}
    ExactRational(const ExactInt& v) : v_(v.raw()) {}
    ExactRational(const ExactInt& num, const ExactInt& den);
    explicit ExactRational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Accepts "p" or "p/q"; throws std::invalid_argument on malformed input or q = 0.
    static ExactRational from_string(std::string_view s);

    /// "p/q" in lowest terms, or "p" when the denominator is 1.
    std::string to_string() const { return v_.get_str(10); }
    double to_double() const;
    long double to_long_double() const;
    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }

    ExactInt numerator() const { return ExactInt(mpz_class(v_.get_num())); }
    ExactInt denominator() const { return ExactInt(mpz_class(v_.get_den())); }

    ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
    ExactRational& operator-=(const ExactRational& o) { v_ -= o.v_; return *this; }
    ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }
    ExactRational& operator/=(const ExactRational& o);

    friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
    friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
    friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
    friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
    friend ExactRational operator-(const ExactRational& a) { return ExactRational(mpq_class(-a.v_)); }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
        return cmp(a.v_, b.v_) <=> 0;
    }

private:
    mpq_class v_;
};

} // namespace expderiv
