#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qbern/interp.hpp"

using namespace qbern;

namespace {

const QContext<Rational> kQuarter{Rational(1, 4)};
const QContext<Rational> kHalf{Rational(1, 2)};

QPoint<Rational> canonical_point(int w) {
    std::vector<Rational> xs(static_cast<size_t>(w), Rational(1, 2));
    return QPoint<Rational>::from_x(xs, kQuarter);
}

QPoint<Rational> lattice_point(std::mt19937_64& rng, int w, const QContext<Rational>& ctx) {
    std::vector<Rational> zs(static_cast<size_t>(w));
    for (auto& z : zs)
        z = Rational(1) - (Rational(1) - ctx.q) * Rational(static_cast<long>(rng() % 7) + 1, 8);
    return QPoint<Rational>::from_qpow(zs, ctx);
}

} // namespace

TEST_CASE("interpolation function at integer arguments, exact path") {
    // w=1, k=1, s=-1, q=1/4, x=1/2: -(2/3)(2/3) = -4/9
    InterpSpec<Rational> spec{MultiIndex{1}, canonical_point(1)};
    CHECK(interp_q_int(-1, spec) == Rational(-4, 9));
    // s = 0: (-1)^k u^k / k!
    CHECK(interp_q_int(0, spec) == Rational(-2, 3));
    InterpSpec<Rational> spec2{MultiIndex{2}, canonical_point(1)};
    CHECK(interp_q_int(0, spec2) == Rational(4, 9) / Rational(2));

    // x_i = 1 makes v_i = 0 and the function diverges
    std::vector<Rational> xs{Rational(1)};
    QPoint<Rational> at_one = QPoint<Rational>::from_x(xs, kQuarter);
    CHECK_THROWS_AS((InterpSpec<Rational>{MultiIndex{1}, at_one}), PoleAtOne);
}

TEST_CASE("complex evaluation matches the exact path at integer s") {
    QContext<double> ctx{0.25};
    std::vector<double> xs{0.5};
    QPoint<double> pt = QPoint<double>::from_x(xs, ctx);
    InterpSpec<double> spec{MultiIndex{1}, pt};
    Complex<double> at_m1 = interp_q(Complex<double>{-1.0, 0.0}, spec);
    CHECK(at_m1.re == doctest::Approx(-4.0 / 9.0).epsilon(1e-12));
    CHECK(at_m1.im == doctest::Approx(0.0));
    Complex<double> at_i = interp_q(Complex<double>{0.0, 1.0}, spec);
    // |v^{-i}| = 1, and the prefactor is -u
    CHECK(std::hypot(at_i.re, at_i.im) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("special values recover basis polynomials up to factorial factors") {
    // n = 0 vector: both sides are the prefactor
    InterpSpec<Rational> spec{MultiIndex{1}, canonical_point(1)};
    auto [l0, r0] = special_value_check(MultiIndex{0}, spec);
    CHECK(l0 == r0);
    CHECK(l0 == Rational(-2, 3));

    // w=1, n=1, k=1: both sides -uv
    auto [l1, r1] = special_value_check(MultiIndex{1}, spec);
    CHECK(l1 == r1);
    CHECK(l1 == Rational(-4, 9));

    // w=2, heterogeneous n=(1,0), k=(1,1), q=1/4, x=(1/2,1/2)
    InterpSpec<Rational> spec2{MultiIndex{1, 1}, canonical_point(2)};
    auto [l2, r2] = special_value_check(MultiIndex{1, 0}, spec2);
    CHECK(l2 == r2);

    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 40; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        const QContext<Rational>& ctx = (rep % 2 != 0) ? kHalf : kQuarter;
        QPoint<Rational> pt = lattice_point(rng, w, ctx);
        std::vector<int> k(static_cast<size_t>(w)), n(static_cast<size_t>(w));
        for (size_t i = 0; i < k.size(); ++i) {
            k[i] = static_cast<int>(rng() % 5);
            n[i] = static_cast<int>(rng() % 6);
        }
        InterpSpec<Rational> rspec{MultiIndex(k), pt};
        auto [lhs, rhs] = special_value_check(MultiIndex(n), rspec);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("classical limit function") {
    // x = 1/2, k = 1, s = 1: -(1/2)/1! * (1/2)^{-1} = -1
    std::vector<double> xs{0.5};
    Complex<double> v = interp_limit<double>(Complex<double>{1.0, 0.0}, MultiIndex{1}, xs);
    CHECK(v.re == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(v.im == doctest::Approx(0.0));

    // s = 0: (-1)^{sum k} prod x^k / k!
    Complex<double> s0 = interp_limit<double>(Complex<double>{0.0, 0.0}, MultiIndex{1}, xs);
    CHECK(s0.re == doctest::Approx(-0.5).epsilon(1e-14));

    std::vector<double> bad{1.0};
    CHECK_THROWS_AS(interp_limit<double>(Complex<double>{0.0, 0.0}, MultiIndex{0}, bad), PoleAtOne);

    // q -> 1: at q = 1 - 1e-8 the q-function sits within 1e-6 of the limit
    QContext<double> near{1.0 - 1e-8};
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        std::vector<double> x(static_cast<size_t>(w));
        for (auto& xi : x) xi = 0.125 + 0.75 * std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<int> k(static_cast<size_t>(w));
        for (auto& ki : k) ki = static_cast<int>(rng() % 5);
        std::uniform_real_distribution<double> sdist(-5.0, 5.0);
        Complex<double> s{sdist(rng), sdist(rng)};
        QPoint<double> pt = QPoint<double>::from_x(x, near);
        Complex<double> qval = interp_q(s, InterpSpec<double>{MultiIndex(k), pt});
        Complex<double> lim = interp_limit<double>(s, MultiIndex(k), x);
        CHECK(complex_relative_error(qval, lim) <= 1e-6);
    }
}

TEST_CASE("s-derivatives") {
    std::vector<double> xs{0.5, 0.5};
    MultiIndex k{0, 0};
    // w=2, i=1, s=0, k=(0,0): log(1/(1/4)) * 1 = log 4
    Complex<double> d = interp_derivative<double>(1, Complex<double>{0.0, 0.0}, k, xs);
    CHECK(d.re == doctest::Approx(std::log(4.0)).epsilon(1e-13));
    CHECK(d.im == doctest::Approx(0.0));

    // i = 0 is the function itself
    Complex<double> d0 = interp_derivative<double>(0, Complex<double>{0.7, -0.3}, k, xs);
    Complex<double> f = interp_limit<double>(Complex<double>{0.7, -0.3}, k, xs);
    CHECK(d0.re == doctest::Approx(f.re));
    CHECK(d0.im == doctest::Approx(f.im));

    // central finite differences in s, step 1e-5
    const double h = 1e-5;
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 30; ++rep) {
        int w = 1 + static_cast<int>(rng() % 2);
        std::vector<double> x(static_cast<size_t>(w));
        for (auto& xi : x) xi = 0.125 + 0.75 * std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<int> kk(static_cast<size_t>(w));
        for (auto& ki : kk) ki = static_cast<int>(rng() % 4);
        MultiIndex kidx(kk);
        std::uniform_real_distribution<double> sdist(-2.0, 2.0);
        Complex<double> s{sdist(rng), sdist(rng)};
        auto at = [&](double offset) {
            return interp_limit<double>(Complex<double>{s.re + offset, s.im}, kidx, x);
        };
        Complex<double> d1 = interp_derivative<double>(1, s, kidx, x);
        Complex<double> fd1 = (1.0 / (2.0 * h)) * (at(h) - at(-h));
        CHECK(complex_relative_error(d1, fd1) <= 1e-5);

        // second derivative differenced from the first; a plain second
        // difference of the function sits at the f64 noise floor at this step
        auto at1 = [&](double offset) {
            return interp_derivative<double>(1, Complex<double>{s.re + offset, s.im}, kidx, x);
        };
        Complex<double> d2 = interp_derivative<double>(2, s, kidx, x);
        Complex<double> fd2 = (1.0 / (2.0 * h)) * (at1(h) - at1(-h));
        CHECK(complex_relative_error(d2, fd2) <= 1e-5);
    }
}

TEST_CASE("transform quadrature against the closed form") {
    QContext<double> ctx{0.25};
    std::vector<double> xs{0.5};
    QPoint<double> pt = QPoint<double>::from_x(xs, ctx);

    // w=1, k=0, s=1: integral of e^{-vt} is 1/v
    InterpSpec<double> spec0{MultiIndex{0}, pt};
    auto [q0, c0] = mellin_check(1, spec0);
    CHECK(c0 == doctest::Approx(1.0 / pt.v(0)).epsilon(1e-12));
    CHECK(q0 == doctest::Approx(c0).epsilon(1e-10));

    // w=1, k=1, s=2, u=v=2/3: -u/v^2 = -3/2 on both routes
    InterpSpec<double> spec1{MultiIndex{1}, pt};
    auto [q2, c2] = mellin_check(2, spec1);
    CHECK(c2 == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(q2 == doctest::Approx(c2).epsilon(1e-10));
    // at s=1 the closed form is -u/v = -1
    auto [q1, c1] = mellin_check(1, spec1);
    CHECK(c1 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(q1 == doctest::Approx(c1).epsilon(1e-10));

    CHECK_THROWS_AS(mellin_check(0, spec1), NonPositiveInteger);

    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 10; ++rep) {
        int w = 1 + static_cast<int>(rng() % 2);
        QContext<double> rctx{0.2 + 0.55 * std::uniform_real_distribution<double>(0, 1)(rng)};
        std::vector<double> x(static_cast<size_t>(w));
        for (auto& xi : x) xi = 0.125 + 0.75 * std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<int> kk(static_cast<size_t>(w));
        for (auto& ki : kk) ki = static_cast<int>(rng() % 4);
        QPoint<double> rpt = QPoint<double>::from_x(x, rctx);
        InterpSpec<double> rspec{MultiIndex(kk), rpt};
        for (long s = 1; s <= 3; ++s) {
            auto [quad, closed] = mellin_check(s, rspec);
            CHECK(std::fabs(quad - closed) <= 1e-8 * std::max(std::fabs(closed), 1e-30));
        }
    }
}

TEST_CASE("pure exponential structure in s") {
    QContext<double> ctx{0.6};
    std::vector<double> xs{0.3, 0.7};
    QPoint<double> pt = QPoint<double>::from_x(xs, ctx);
    InterpSpec<double> spec{MultiIndex{2, 1}, pt};
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> sdist(-4.0, 4.0);
    for (int rep = 0; rep < 40; ++rep) {
        Complex<double> s1{sdist(rng), sdist(rng)};
        Complex<double> s2{sdist(rng), sdist(rng)};
        Complex<double> lhs = interp_q(s1 + s2, spec) * interp_q(Complex<double>{0.0, 0.0}, spec);
        Complex<double> rhs = interp_q(s1, spec) * interp_q(s2, spec);
        CHECK(complex_relative_error(lhs, rhs) <= 1e-10);
    }
}
