#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "qbern/errors.hpp"
#include "qbern/rational.hpp"

namespace qbern {

/// Variable-precision real backed by MPFR; precision set at runtime.
using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

/// Sets the working precision for BigFloat values created afterwards.
inline void set_bigfloat_precision_bits(unsigned bits) {
    if (bits < 2) throw InvalidArgument("bigfloat precision must be at least 2 bits");
    // boost tracks precision in decimal digits
    unsigned digits = static_cast<unsigned>(bits * 0.30103) + 1;
    BigFloat::default_precision(digits);
}

/// Shortest decimal representation of a double that round-trips exactly.
std::string double_str(double v);

// Numeric-domain traits. Every scalar domain used by the library (exact
// rational, f64, bigfloat) implements this surface; the math code is
// templated on it and never branches on the concrete type.
template <class T>
struct numeric_traits;

template <>
struct numeric_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_long(long v) { return Rational(v); }
    static Rational from_integer(const mpz_class& z) { return Rational(z); }
    static Rational from_rational(const Rational& r) { return r; }
    static Rational pow_int(const Rational& b, long e) { return b.pow_int(e); }
    static Rational pow_real(const Rational& b, const Rational& e) {
        if (auto r = b.pow_exact(e)) return *r;
        throw DomainUnsupported("q^x is irrational for q=" + b.str() + ", x=" + e.str() +
                                "; use a floating-point domain");
    }
    static Rational one_minus_pow(const Rational& b, const Rational& e) {
        return Rational(1) - pow_real(b, e);
    }
    static std::optional<long> as_integer(const Rational& v) { return v.as_long(); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static Rational abs(const Rational& v) { return v.abs(); }
    static std::string str(const Rational& v) { return v.str(); }
};

template <>
struct numeric_traits<double> {
    static constexpr bool exact = false;
    static double from_long(long v) { return static_cast<double>(v); }
    static double from_integer(const mpz_class& z) { return z.get_d(); }
    static double from_rational(const Rational& r) { return r.to_double(); }
    static double pow_int(double b, long e) { return std::pow(b, static_cast<double>(e)); }
    static double pow_real(double b, double e) { return std::pow(b, e); }
    // 1 - b^e without cancellation for b near 1
    static double one_minus_pow(double b, double e) { return -std::expm1(e * std::log(b)); }
    static std::optional<long> as_integer(double v) {
        if (!std::isfinite(v) || v != std::floor(v)) return std::nullopt;
        if (v < -9.0e15 || v > 9.0e15) return std::nullopt;
        return static_cast<long>(v);
    }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static std::string str(double v) { return double_str(v); }
};

template <>
struct numeric_traits<BigFloat> {
    static constexpr bool exact = false;
    static BigFloat from_long(long v) { return BigFloat(v); }
    static BigFloat from_integer(const mpz_class& z) {
        BigFloat r;
        mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    static BigFloat from_rational(const Rational& r) {
        return from_integer(r.num()) / from_integer(r.den());
    }
    static BigFloat pow_int(const BigFloat& b, long e) {
        if (e == 0) return BigFloat(1);
        if (b == 0) {
            if (e < 0) throw DivisionByZero("0 raised to a negative power");
            return BigFloat(0);
        }
        BigFloat r = boost::multiprecision::pow(b, static_cast<unsigned long>(e < 0 ? -e : e));
        return e < 0 ? BigFloat(1) / r : r;
    }
    static BigFloat pow_real(const BigFloat& b, const BigFloat& e) {
        if (auto ei = as_integer(e)) return pow_int(b, *ei);
        return boost::multiprecision::pow(b, e);
    }
    static BigFloat one_minus_pow(const BigFloat& b, const BigFloat& e) {
        return BigFloat(1) - pow_real(b, e);
    }
    static std::optional<long> as_integer(const BigFloat& v) {
        BigFloat f = boost::multiprecision::floor(v);
        if (f != v) return std::nullopt;
        if (f < -9.0e15 || f > 9.0e15) return std::nullopt;
        return static_cast<long>(f);
    }
    static double to_double(const BigFloat& v) { return v.convert_to<double>(); }
    static BigFloat abs(const BigFloat& v) { return boost::multiprecision::abs(v); }
    static std::string str(const BigFloat& v) { return v.str(); }
};

template <class T>
T from_rational(const Rational& r) {
    return numeric_traits<T>::from_rational(r);
}

template <class T>
T from_integer(const mpz_class& z) {
    return numeric_traits<T>::from_integer(z);
}

template <class T>
T pow_int(const T& base, long e) {
    return numeric_traits<T>::pow_int(base, e);
}

/// |a-b| / max(|a|,|b|) in double, 0 when both vanish. Reporting metric only.
template <class T>
double relative_error(const T& a, const T& b) {
    double da = numeric_traits<T>::to_double(a);
    double db = numeric_traits<T>::to_double(b);
    double scale = std::max(std::fabs(da), std::fabs(db));
    if (scale == 0.0) return 0.0;
    return std::fabs(da - db) / scale;
}

/// Equality up to the domain: exact compare for rationals, relative
/// tolerance otherwise.
template <class T>
bool values_close(const T& a, const T& b, double rel_tol) {
    if constexpr (numeric_traits<T>::exact) {
        (void)rel_tol;
        return a == b;
    } else {
        return relative_error(a, b) <= rel_tol;
    }
}

// Minimal complex arithmetic over any real scalar domain. Only what the
// interpolation function needs: ring operations plus w^s for w > 0 real.
template <class T>
struct Complex {
    T re{};
    T im{};

    Complex() = default;
    Complex(T r) : re(std::move(r)) {} // NOLINT: implicit by design
    Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const T& s, const Complex& a) { return {s * a.re, s * a.im}; }
    Complex operator-() const { return {-re, -im}; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
T cabs(const Complex<T>& z) {
    using std::sqrt;
    return sqrt(z.re * z.re + z.im * z.im);
}

template <class T>
Complex<T> cexp(const Complex<T>& z) {
    using std::cos;
    using std::exp;
    using std::sin;
    T m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

/// base^s = exp(s ln base) for a strictly positive real base (the branch
/// cut is unreachable).
template <class T>
Complex<T> cpow_positive_base(const T& base, const Complex<T>& s) {
    using std::log;
    if (!(base > T(0))) throw DomainUnsupported("complex power requires a positive real base");
    T lb = log(base);
    return cexp(Complex<T>{s.re * lb, s.im * lb});
}

template <class T>
double complex_relative_error(const Complex<T>& a, const Complex<T>& b) {
    double ar = numeric_traits<T>::to_double(a.re), ai = numeric_traits<T>::to_double(a.im);
    double br = numeric_traits<T>::to_double(b.re), bi = numeric_traits<T>::to_double(b.im);
    double diff = std::hypot(ar - br, ai - bi);
    double scale = std::max(std::hypot(ar, ai), std::hypot(br, bi));
    if (scale == 0.0) return 0.0;
    return diff / scale;
}

} // namespace qbern
