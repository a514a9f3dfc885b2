#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "qbern/errors.hpp"

namespace qbern {

/// Arbitrary-precision rational, always reduced to lowest terms with a
/// positive denominator. Thin value wrapper around GMP's mpq_class.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long int>(n)) {} // NOLINT: implicit by design
    Rational(int n) : v_(n) {}
    Rational(long num, long den);
    Rational(const mpz_class& num, const mpz_class& den);
    explicit Rational(const mpz_class& n) : v_(n) {}
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Integer value when the rational is an integer that fits a long.
    std::optional<long> as_long() const;

    double to_double() const { return v_.get_d(); }

    /// "p/q", or "p" when the denominator is 1.
    std::string str() const;

    /// Accepts "p/q", plain integers, and decimal literals ("0.75" -> 3/4).
    static Rational parse(std::string_view text);

    /// this^e with an integer exponent; 0^0 = 1, negative e inverts.
    Rational pow_int(long e) const;

    /// this^(a/b) when the result is rational (exact integer roots);
    /// nullopt when it is irrational. Requires a nonnegative base unless
    /// the exponent is an integer.
    std::optional<Rational> pow_exact(const Rational& e) const;

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw DivisionByZero("Rational: division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class v_; // canonical at all times
};

/// n! as a big integer; n must be nonnegative.
mpz_class factorial_mpz(long n);

/// Binomial coefficient n over k for any integer n (falling-factorial form,
/// so negative n yields the usual signed values); k < 0 gives 0.
mpz_class binomial_mpz(long n, long k);

} // namespace qbern
