#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "qbern/bernstein.hpp"
#include "qbern/series.hpp"

using namespace qbern;

namespace {

const QContext<Rational> kQuarter{Rational(1, 4)};
const QContext<Rational> kHalf{Rational(1, 2)};
const QContext<Rational> kOne{Rational(1)};

// q = 1/4, x = 1/2 has the exact rational q-numbers u = v = 2/3.
QPoint<Rational> canonical_point(int w) {
    std::vector<Rational> xs(static_cast<size_t>(w), Rational(1, 2));
    return QPoint<Rational>::from_x(xs, kQuarter);
}

QPoint<Rational> lattice_point(std::mt19937_64& rng, int w, const QContext<Rational>& ctx) {
    if (ctx.classical()) {
        std::vector<Rational> xs(static_cast<size_t>(w));
        for (auto& x : xs) x = Rational(static_cast<long>(rng() % 7) + 1, 8);
        return QPoint<Rational>::from_x(xs, ctx);
    }
    std::vector<Rational> zs(static_cast<size_t>(w));
    for (auto& z : zs)
        z = Rational(1) - (Rational(1) - ctx.q) * Rational(static_cast<long>(rng() % 7) + 1, 8);
    return QPoint<Rational>::from_qpow(zs, ctx);
}

} // namespace

TEST_CASE("classical basis polynomials") {
    std::vector<Rational> x{Rational(1, 2)};
    CHECK(bernstein_classical<Rational>(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, x) ==
          Rational(1, 2));
    CHECK(bernstein_classical<Rational>(BernsteinSpec{MultiIndex{3}, MultiIndex{2}}, x) ==
          Rational(0));
    std::vector<Rational> x2{Rational(3, 10), Rational(7, 10)};
    CHECK(bernstein_classical<Rational>(BernsteinSpec{MultiIndex{0, 0}, MultiIndex{0, 0}}, x2) ==
          Rational(1));
    CHECK_THROWS_AS(bernstein_classical<Rational>(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, x2),
                    DimensionMismatch);
}

TEST_CASE("q-basis evaluation in closed form") {
    QPoint<Rational> pt = canonical_point(1);
    REQUIRE(pt.u(0) == Rational(2, 3));
    REQUIRE(pt.v(0) == Rational(2, 3));
    CHECK(q_bernstein(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, pt) == Rational(8, 9));
    CHECK(q_bernstein(BernsteinSpec{MultiIndex{3}, MultiIndex{2}}, pt) == Rational(0));

    QPoint<Rational> pt2 = canonical_point(2);
    CHECK(q_bernstein(BernsteinSpec{MultiIndex{1, 0}, MultiIndex{1, 1}}, pt2) ==
          pt2.u(0) * pt2.v(1));

    // q = 1 reduces to the classical polynomials on rational points
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        std::vector<Rational> xs(static_cast<size_t>(w));
        for (auto& xi : xs) xi = Rational(static_cast<long>(rng() % 7) + 1, 8);
        QPoint<Rational> cpt = QPoint<Rational>::from_x(xs, kOne);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = static_cast<int>(rng() % 8) + 1;
        MultiIndex nn(n);
        std::vector<int> k(static_cast<size_t>(w), 0);
        do {
            BernsteinSpec spec{MultiIndex(k), nn};
            CHECK(q_bernstein(spec, cpt) == bernstein_classical<Rational>(spec, xs));
        } while (next_multi_index(k, nn));
    }
}

TEST_CASE("recurrence evaluation agrees with the closed form") {
    QPoint<Rational> pt = canonical_point(1);
    // base-case unfold: B_{1,1} = u
    CHECK(q_bernstein_recurrence(BernsteinSpec{MultiIndex{1}, MultiIndex{1}}, pt) == pt.u(0));
    CHECK(q_bernstein_recurrence(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, pt) == Rational(8, 9));
    CHECK_THROWS_AS(q_bernstein_recurrence(BernsteinSpec{MultiIndex{0}, MultiIndex{0}}, pt),
                    InvalidDegree);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        const QContext<Rational>& ctx = (rep % 3 == 0) ? kOne : ((rep % 3 == 1) ? kHalf : kQuarter);
        QPoint<Rational> rpt = lattice_point(rng, w, ctx);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = static_cast<int>(rng() % 8) + 1;
        MultiIndex nn(n);
        std::vector<int> k(static_cast<size_t>(w), 0);
        do {
            BernsteinSpec spec{MultiIndex(k), nn};
            CHECK(q_bernstein(spec, rpt) == q_bernstein_recurrence(spec, rpt));
        } while (next_multi_index(k, nn));
    }
}

TEST_CASE("classical recurrence shape at q = 1") {
    // B_{k,n}(x) = (1-x) B_{k,n-1}(x) + x B_{k-1,n-1}(x) on rationals
    std::vector<Rational> xs{Rational(3, 8)};
    QPoint<Rational> pt = QPoint<Rational>::from_x(xs, kOne);
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) {
            Rational direct = q_bernstein(BernsteinSpec{MultiIndex{k}, MultiIndex{n}}, pt);
            Rational left = q_bernstein(BernsteinSpec{MultiIndex{k}, MultiIndex{n - 1}}, pt);
            Rational right = k >= 1
                                 ? q_bernstein(BernsteinSpec{MultiIndex{k - 1}, MultiIndex{n - 1}}, pt)
                                 : Rational(0);
            CHECK(direct == (Rational(1) - xs[0]) * left + xs[0] * right);
        }
}

TEST_CASE("symmetry under reflection") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        const QContext<Rational>& ctx = (rep % 2 != 0) ? kHalf : kQuarter;
        QPoint<Rational> pt = lattice_point(rng, w, ctx);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = static_cast<int>(rng() % 6) + 1;
        MultiIndex nn(n);
        std::vector<int> k(static_cast<size_t>(w), 0);
        do {
            auto [reflected, direct] =
                q_bernstein_symmetry_check(BernsteinSpec{MultiIndex(k), nn}, pt, ctx);
            CHECK(reflected == direct);
        } while (next_multi_index(k, nn));
    }

    // degenerate slot: k = n at x = 0 gives 1 on both sides
    QContext<Rational> ctx = kHalf;
    std::vector<Rational> xs{Rational(0)};
    QPoint<Rational> pt0 = QPoint<Rational>::from_x(xs, ctx);
    auto [a, b] = q_bernstein_symmetry_check(BernsteinSpec{MultiIndex{0}, MultiIndex{3}}, pt0, ctx);
    CHECK(a == b);
    CHECK(b == Rational(1)); // B_{0,3} at u=0,v=1
}

TEST_CASE("operator evaluation and partition of unity") {
    // f == 1: the operator value is the closed-form kernel product
    TargetFunction<Rational> one{1, [](std::span<const Rational>) { return Rational(1); }};
    QPoint<Rational> pt = canonical_point(1);
    // w=1, n=2, q=1/4, x=1/2: (1 + (3/4)(4/9))^2 = (4/3)^2 = 16/9
    CHECK(q_bernstein_operator(one, MultiIndex{2}, pt) == Rational(16, 9));
    CHECK(partition_sum(MultiIndex{2}, pt, kQuarter) == Rational(16, 9));

    // w=1, n=1: u + v = 1 + (1-q) u v
    CHECK(partition_sum(MultiIndex{1}, pt, kQuarter) == pt.u(0) + pt.v(0));

    // q = 1: exact partition of unity
    std::vector<Rational> xs{Rational(5, 8), Rational(1, 8)};
    QPoint<Rational> cpt = QPoint<Rational>::from_x(xs, kOne);
    CHECK(partition_sum(MultiIndex{3, 4}, cpt, kOne) == Rational(1));

    // f(t) = t in one dimension: u (u+v)^{n-1}
    TargetFunction<Rational> coord{1, [](std::span<const Rational> x) { return x[0]; }};
    for (int n = 1; n <= 5; ++n) {
        Rational expect = pt.u(0) * (pt.u(0) + pt.v(0)).pow_int(n - 1);
        CHECK(q_bernstein_operator(coord, MultiIndex{n}, pt) == expect);
    }

    // inconsistent (u,v) pairs trip the sentinel
    std::vector<std::pair<Rational, Rational>> uv{{Rational(1, 3), Rational(1, 5)}};
    QPoint<Rational> bad = QPoint<Rational>::from_uv(uv);
    CHECK_THROWS_AS(partition_sum(MultiIndex{2}, bad, kQuarter), IdentityViolation);
}

TEST_CASE("degree-index relation") {
    QPoint<Rational> pt = canonical_point(1);
    auto [recursive, direct] =
        degree_index_relation_check(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, pt);
    CHECK(recursive == direct);
    CHECK(direct == Rational(8, 9));

    // k = n: ((n-n+1)/n)(u/v) C(n,n-1) u^{n-1} v = u^n
    for (int n = 1; n <= 6; ++n) {
        auto [r2, d2] = degree_index_relation_check(BernsteinSpec{MultiIndex{n}, MultiIndex{n}}, pt);
        CHECK(r2 == d2);
        CHECK(d2 == pt.u(0).pow_int(n));
    }

    CHECK_THROWS_AS(degree_index_relation_check(BernsteinSpec{MultiIndex{0}, MultiIndex{2}}, pt),
                    InvalidIndex);
    std::vector<Rational> x1{Rational(1)};
    QPoint<Rational> at_one = QPoint<Rational>::from_x(x1, kQuarter);
    CHECK_THROWS_AS(degree_index_relation_check(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, at_one),
                    DivisionByZero);

    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 25; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        QPoint<Rational> rpt = lattice_point(rng, w, kHalf);
        std::vector<int> n(static_cast<size_t>(w)), k(static_cast<size_t>(w));
        for (size_t i = 0; i < n.size(); ++i) {
            n[i] = static_cast<int>(rng() % 6) + 1;
            k[i] = 1 + static_cast<int>(rng() % n[i]);
        }
        auto [r3, d3] = degree_index_relation_check(BernsteinSpec{MultiIndex(k), MultiIndex(n)}, rpt);
        CHECK(r3 == d3);
    }
}

TEST_CASE("power-basis expansion") {
    // exact path: q = 1/4, x = 1/2 carries q^x = 1/2 exactly
    QPoint<Rational> pt = canonical_point(1);
    CHECK(power_basis_expand(BernsteinSpec{MultiIndex{0}, MultiIndex{1}}, pt, kQuarter) ==
          Rational(2, 3)); // evaluates to v
    for (int n = 0; n <= 5; ++n)
        CHECK(power_basis_expand(BernsteinSpec{MultiIndex{n}, MultiIndex{n}}, pt, kQuarter) ==
              pt.u(0).pow_int(n)); // the sum collapses to l = n

    // exact z-parameterized points across all indices
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        int w = 1 + static_cast<int>(rng() % 2);
        QPoint<Rational> zpt = lattice_point(rng, w, kHalf);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = static_cast<int>(rng() % 5) + 1;
        MultiIndex nn(n);
        std::vector<int> k(static_cast<size_t>(w), 0);
        do {
            BernsteinSpec spec{MultiIndex(k), nn};
            CHECK(power_basis_expand(spec, zpt, kHalf) == q_bernstein(spec, zpt));
        } while (next_multi_index(k, nn));
    }

    // float path with q = 1: plain binomial expansion of (1-x)^{n-k}
    QContext<double> fone{1.0};
    std::vector<double> fx{0.37};
    QPoint<double> fpt = QPoint<double>::from_x(fx, fone);
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) {
            BernsteinSpec spec{MultiIndex{k}, MultiIndex{n}};
            CHECK(power_basis_expand(spec, fpt, fone) ==
                  doctest::Approx(q_bernstein(spec, fpt)).epsilon(1e-12));
        }

    // points without q^x reject the expansion
    std::vector<std::pair<Rational, Rational>> uv{{Rational(1, 3), Rational(1, 5)}};
    QPoint<Rational> bare = QPoint<Rational>::from_uv(uv);
    CHECK_THROWS_AS(power_basis_expand(BernsteinSpec{MultiIndex{0}, MultiIndex{1}}, bare, kHalf),
                    DomainUnsupported);
}

TEST_CASE("moment identity") {
    QPoint<Rational> pt = canonical_point(1);
    // m = 0 reduces to the partition identity
    auto [l0, r0] = moment_identity_check(0, MultiIndex{3}, pt);
    CHECK(l0 == Rational(1));
    CHECK(l0 == r0);

    // w=1, n=2, m=2: both sides (2/3)^2
    auto [l2, r2] = moment_identity_check(2, MultiIndex{2}, pt);
    CHECK(l2 == Rational(4, 9));
    CHECK(l2 == r2);

    CHECK_THROWS_AS(moment_identity_check(3, MultiIndex{2}, pt), InvalidDegree);

    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 25; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        const QContext<Rational>& ctx = (rep % 2 != 0) ? kHalf : kQuarter;
        QPoint<Rational> rpt = lattice_point(rng, w, ctx);
        int m = static_cast<int>(rng() % 4);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = m + static_cast<int>(rng() % (7 - m));
        if (*std::min_element(n.begin(), n.end()) == 0) n[0] = 1;
        auto [lhs, rhs] = moment_identity_check(m, MultiIndex(n), rpt);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("representation through Bernoulli polynomials and Stirling numbers") {
    QPoint<Rational> pt = canonical_point(1);
    CHECK(bernoulli_stirling_repr(BernsteinSpec{MultiIndex{0}, MultiIndex{0}}, pt) == Rational(1));
    CHECK(bernoulli_stirling_repr(BernsteinSpec{MultiIndex{1}, MultiIndex{1}}, pt) == pt.u(0));
    CHECK(bernoulli_stirling_repr(BernsteinSpec{MultiIndex{1}, MultiIndex{2}}, pt) == Rational(8, 9));

    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 12; ++rep) {
        int w = 1 + static_cast<int>(rng() % 2);
        const QContext<Rational>& ctx = (rep % 2 != 0) ? kHalf : kQuarter;
        QPoint<Rational> rpt = lattice_point(rng, w, ctx);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = static_cast<int>(rng() % 7);
        MultiIndex nn(n);
        std::vector<int> k(static_cast<size_t>(w), 0);
        do {
            BernsteinSpec spec{MultiIndex(k), nn};
            CHECK(bernoulli_stirling_repr(spec, rpt) == q_bernstein(spec, rpt));
        } while (next_multi_index(k, nn));
    }
}

TEST_CASE("generating series round trip against direct evaluation") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 25; ++rep) {
        Rational u(static_cast<long>(rng() % 10), 8);
        Rational v(static_cast<long>(rng() % 10), 8);
        std::vector<std::pair<Rational, Rational>> uv{{u, v}};
        QPoint<Rational> pt = QPoint<Rational>::from_uv(uv);
        for (int k = 0; k <= 12; ++k) {
            EgfSeries<Rational> gf = bernstein_gf(k, u, v, 12);
            for (int n = 0; n <= 12; ++n)
                CHECK(coeff_extract(gf, n) ==
                      q_bernstein(BernsteinSpec{MultiIndex{k}, MultiIndex{n}}, pt));
        }
    }
}

TEST_CASE("operator positivity") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        int w = 1 + static_cast<int>(rng() % 3);
        const QContext<Rational>& ctx = (rep % 2 != 0) ? kHalf : kQuarter;
        QPoint<Rational> pt = lattice_point(rng, w, ctx);
        std::vector<int> n(static_cast<size_t>(w));
        for (auto& ni : n) ni = static_cast<int>(rng() % 6) + 1;
        MultiIndex nn(n);
        std::vector<int> k(static_cast<size_t>(w), 0);
        do {
            CHECK(q_bernstein(BernsteinSpec{MultiIndex(k), nn}, pt).sign() >= 0);
        } while (next_multi_index(k, nn));
    }
}
