#include "qbern/rational.hpp"

#include <cctype>
#include <ostream>

namespace qbern {

Rational::Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw DivisionByZero("Rational: zero denominator");
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
    if (den == 0) throw DivisionByZero("Rational: zero denominator");
    v_.canonicalize();
}

std::optional<long> Rational::as_long() const {
    if (!is_integer()) return std::nullopt;
    mpz_class n = v_.get_num();
    if (!n.fits_slong_p()) return std::nullopt;
    return n.get_si();
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] { throw InvalidArgument("Rational: cannot parse \"" + std::string(text) + "\""); };
    if (text.empty()) fail();
    std::string s(text);
    if (s[0] == '+') s.erase(0, 1);
    if (s.empty()) fail();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty()) fail();
        try {
            mpz_class n(num), d(den);
            if (d == 0) throw DivisionByZero("Rational: zero denominator in \"" + s + "\"");
            return Rational(n, d);
        } catch (const std::invalid_argument&) {
            fail();
        }
    }

    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (negative) whole.erase(0, 1);
        if (!whole.empty() && whole[0] == '+') whole.erase(0, 1);
        if (whole.empty()) whole = "0";
        for (char c : whole)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        for (char c : frac)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        mpz_class scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        mpz_class n = mpz_class(whole) * scale + (frac.empty() ? mpz_class(0) : mpz_class(frac));
        if (negative) n = -n;
        return Rational(n, scale);
    }

    try {
        return Rational(mpz_class(s));
    } catch (const std::invalid_argument&) {
        fail();
    }
    return Rational(); // unreachable
}

Rational Rational::pow_int(long e) const {
    if (e == 0) return Rational(1);
    if (is_zero()) {
        if (e < 0) throw DivisionByZero("Rational: 0 raised to a negative power");
        return Rational(0);
    }
    unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), mag);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), mag);
    if (e < 0) n.swap(d);
    return Rational(n, d);
}

std::optional<Rational> Rational::pow_exact(const Rational& e) const {
    if (auto ei = e.as_long()) return pow_int(*ei);
    if (sign() < 0)
        throw DomainUnsupported("Rational: non-integer power of a negative base");
    if (is_zero()) {
        if (e.sign() < 0) throw DivisionByZero("Rational: 0 raised to a negative power");
        return Rational(0);
    }
    // this^(a/b): compute this^a, then extract an exact b-th root if one exists.
    mpz_class a = e.num(), b = e.den();
    if (!a.fits_slong_p() || !b.fits_ulong_p()) return std::nullopt;
    Rational base = pow_int(a.get_si());
    unsigned long root = b.get_ui();
    mpz_class rn, rd;
    bool exact_n = mpz_root(rn.get_mpz_t(), base.num().get_mpz_t(), root) != 0;
    bool exact_d = mpz_root(rd.get_mpz_t(), base.den().get_mpz_t(), root) != 0;
    if (!exact_n || !exact_d) return std::nullopt;
    return Rational(rn, rd);
}

mpz_class factorial_mpz(long n) {
    if (n < 0) throw InvalidArgument("factorial of a negative integer");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

mpz_class binomial_mpz(long n, long k) {
    if (k < 0) return 0;
    if (n >= 0) {
        if (k > n) return 0;
        mpz_class r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return r;
    }
    // Falling factorial n(n-1)...(n-k+1)/k! stays exact for negative n.
    mpz_class num = 1;
    for (long j = 0; j < k; ++j) num *= mpz_class(n - j);
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), factorial_mpz(k).get_mpz_t());
    return r;
}

} // namespace qbern
