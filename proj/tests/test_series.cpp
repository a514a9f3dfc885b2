#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "qbern/combin.hpp"
#include "qbern/series.hpp"

using namespace qbern;

namespace {
const QContext<Rational> kHalf{Rational(1, 2)};

EgfSeries<Rational> random_series(std::mt19937_64& rng, int order, bool unit) {
    EgfSeries<Rational> s(order);
    for (int n = 0; n <= order; ++n)
        s.set(n, Rational(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 6) + 1));
    if (unit && s[0].is_zero()) s.set(0, Rational(1));
    return s;
}

bool series_equal(const EgfSeries<Rational>& a, const EgfSeries<Rational>& b) {
    if (a.order() != b.order()) return false;
    for (int n = 0; n <= a.order(); ++n)
        if (!(a[n] == b[n])) return false;
    return true;
}
} // namespace

TEST_CASE("exponential series") {
    EgfSeries<Rational> z = egf_exp(Rational(0), 4);
    CHECK(z[0] == Rational(1));
    for (int n = 1; n <= 4; ++n) CHECK(z[n] == Rational(0));

    EgfSeries<Rational> e1 = egf_exp(Rational(1), 3);
    for (int n = 0; n <= 3; ++n) CHECK(e1[n] == Rational(1));

    EgfSeries<Rational> eh = egf_exp(Rational(1, 2), 2);
    CHECK(eh[0] == Rational(1));
    CHECK(eh[1] == Rational(1, 2));
    CHECK(eh[2] == Rational(1, 4));
}

TEST_CASE("product, identity, and the exponential law") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 25; ++rep) {
        EgfSeries<Rational> f = random_series(rng, 8, false);
        CHECK(series_equal(egf_mul(f, EgfSeries<Rational>::one(8)), f));

        EgfSeries<Rational> g = random_series(rng, 8, false);
        EgfSeries<Rational> h = random_series(rng, 8, false);
        CHECK(series_equal(egf_mul(f, g), egf_mul(g, f)));
        CHECK(series_equal(egf_mul(egf_mul(f, g), h), egf_mul(f, egf_mul(g, h))));

        Rational a(static_cast<long>(rng() % 13) - 6, static_cast<long>(rng() % 4) + 1);
        Rational b(static_cast<long>(rng() % 13) - 6, static_cast<long>(rng() % 4) + 1);
        CHECK(series_equal(egf_mul(egf_exp(a, 8), egf_exp(b, 8)), egf_exp(a + b, 8)));
    }
    CHECK_THROWS_AS(egf_mul(EgfSeries<Rational>::one(3), EgfSeries<Rational>::one(4)),
                    OrderMismatch);
}

TEST_CASE("(e^t - 1)^2 has c_2 = 2") {
    EgfSeries<Rational> em1 = egf_exp(Rational(1), 6) - EgfSeries<Rational>::one(6);
    EgfSeries<Rational> sq = egf_mul(em1, em1);
    CHECK(coeff_extract(sq, 2) == Rational(2));
    CHECK(coeff_extract(sq, 0) == Rational(0));
    CHECK(coeff_extract(sq, 1) == Rational(0));
    // cross-check against 2! S(n,2)
    for (int n = 0; n <= 6; ++n)
        CHECK(coeff_extract(sq, n) == Rational(2) * stirling2(n, 2));
}

TEST_CASE("series inversion") {
    EgfSeries<Rational> one = EgfSeries<Rational>::one(5);
    CHECK(series_equal(egf_invert(one), one));

    // (e^t-1)/t has coefficients 1/(n+1); its inverse starts 1, -1/2, 1/6
    EgfSeries<Rational> base(5);
    for (int n = 0; n <= 5; ++n) base.set(n, Rational(1, n + 1));
    EgfSeries<Rational> inv = egf_invert(base);
    CHECK(inv[0] == Rational(1));
    CHECK(inv[1] == Rational(-1, 2));
    CHECK(inv[2] == Rational(1, 6));

    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        EgfSeries<Rational> f = random_series(rng, 8, true);
        CHECK(series_equal(egf_mul(f, egf_invert(f)), EgfSeries<Rational>::one(8)));
    }

    EgfSeries<Rational> zero_const(4);
    zero_const.set(1, Rational(1));
    CHECK_THROWS_AS(egf_invert(zero_const), ZeroConstantTerm);
}

TEST_CASE("basis generating series") {
    // k = 0: pure exponential, c_n = v^n
    EgfSeries<Rational> g0 = bernstein_gf(0, Rational(1, 3), Rational(2, 3), 6);
    for (int n = 0; n <= 6; ++n) CHECK(g0[n] == Rational(2, 3).pow_int(n));

    // the k = n slot is u^n
    for (int n = 0; n <= 6; ++n) {
        EgfSeries<Rational> g = bernstein_gf(n, Rational(1, 3), Rational(2, 3), 6);
        CHECK(g[n] == Rational(1, 3).pow_int(n));
    }

    // k = 1, n = 2, u = v = 2/3: c_2 = 2 * (2/3) * (2/3) = 8/9
    EgfSeries<Rational> g1 = bernstein_gf(1, Rational(2, 3), Rational(2, 3), 4);
    CHECK(g1[2] == Rational(8, 9));
    CHECK(g1[0] == Rational(0)); // below the t-adic valuation

    CHECK_THROWS_AS(coeff_extract(g1, 9), OrderExceeded);
    // closed form across a grid of indices
    for (int k = 0; k <= 5; ++k) {
        EgfSeries<Rational> g = bernstein_gf(k, Rational(3, 8), Rational(5, 8), 10);
        for (int n = 0; n <= 10; ++n) {
            Rational expect = k > n ? Rational(0)
                                    : Rational(binomial_mpz(n, k)) * Rational(3, 8).pow_int(k) *
                                          Rational(5, 8).pow_int(n - k);
            CHECK(coeff_extract(g, n) == expect);
        }
    }
}

TEST_CASE("multivariate generating-series coefficient") {
    // w = 1 reduces to a plain coefficient extraction
    std::vector<Rational> z1{Rational(5, 8)};
    QContext<Rational> ctx = kHalf;
    QPoint<Rational> p1 = QPoint<Rational>::from_qpow(z1, ctx);
    EgfSeries<Rational> gf1 = bernstein_gf(1, p1.u(0), p1.v(0), 6);
    for (int N = 0; N <= 6; ++N)
        CHECK(multivariate_gf_coeff(N, MultiIndex{1}, p1, ctx) == coeff_extract(gf1, N));

    // w = 2, k = (0,0), N = 1: the coefficient is v_1 + v_2
    std::vector<Rational> z2{Rational(9, 16), Rational(3, 4)};
    QPoint<Rational> p2 = QPoint<Rational>::from_qpow(z2, ctx);
    CHECK(multivariate_gf_coeff(1, MultiIndex{0, 0}, p2, ctx) == p2.v(0) + p2.v(1));

    // below the t-adic valuation the coefficient vanishes
    CHECK(multivariate_gf_coeff(1, MultiIndex{1, 1}, p2, ctx) == Rational(0));

    // exact identity across w = 3 and N <= 8 (the function self-checks)
    std::vector<Rational> z3{Rational(9, 16), Rational(5, 8), Rational(7, 8)};
    QPoint<Rational> p3 = QPoint<Rational>::from_qpow(z3, ctx);
    for (int N = 0; N <= 8; ++N)
        CHECK_NOTHROW(multivariate_gf_coeff(N, MultiIndex{1, 0, 2}, p3, ctx));

    CHECK_THROWS_AS(multivariate_gf_coeff(2, MultiIndex{1}, p2, ctx), DimensionMismatch);
}

TEST_CASE("Stirling generating function through the series engine") {
    EgfSeries<Rational> em1 = egf_exp(Rational(1), 16) - EgfSeries<Rational>::one(16);
    for (long k = 0; k <= 6; ++k) {
        EgfSeries<Rational> p = em1.pow(k);
        for (int n = 0; n <= 12; ++n)
            CHECK(coeff_extract(p, n) == Rational(factorial_mpz(k)) * stirling2(n, k));
    }
}

TEST_CASE("shift monomial arithmetic") {
    EgfSeries<Rational> e = egf_exp(Rational(1, 2), 6);
    EgfSeries<Rational> shifted = e.shift_monomial(2, Rational(3));
    for (int n = 0; n <= 6; ++n) {
        Rational expect = n < 2 ? Rational(0)
                                : Rational(binomial_mpz(n, 2)) * Rational(3) *
                                      Rational(1, 2).pow_int(n - 2);
        CHECK(shifted[n] == expect);
    }
}
