#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qbern/combin.hpp"
#include "qbern/qcore.hpp"

namespace qbern {

/// Index pair (k; n) of a basis polynomial. k_i > n_i is allowed and the
/// polynomial is then identically zero.
struct BernsteinSpec {
    MultiIndex k;
    MultiIndex n;

    BernsteinSpec(MultiIndex k_, MultiIndex n_) : k(std::move(k_)), n(std::move(n_)) {
        if (k.dim() != n.dim())
            throw DimensionMismatch("BernsteinSpec: index vectors have different lengths");
    }

    int dim() const { return k.dim(); }
};

/// A function of w variables sampled at exact rational grid nodes
/// (k_1/n_1, ..., k_w/n_w); the nodes stay rational in every domain.
template <class T>
struct TargetFunction {
    int arity;
    std::function<T(std::span<const Rational>)> eval;
};

/// Classical basis polynomial prod_i C(n_i,k_i) x_i^{k_i} (1-x_i)^{n_i-k_i}.
template <class T>
T bernstein_classical(const BernsteinSpec& spec, std::span<const T> x) {
    if (static_cast<int>(x.size()) != spec.dim())
        throw DimensionMismatch("bernstein_classical: point has wrong dimension");
    const T one = numeric_traits<T>::from_long(1);
    T acc = one;
    for (int i = 0; i < spec.dim(); ++i) {
        if (spec.k[i] > spec.n[i]) return numeric_traits<T>::from_long(0);
        acc = acc * from_integer<T>(binomial_mpz(spec.n[i], spec.k[i])) *
              pow_int(x[static_cast<size_t>(i)], spec.k[i]) *
              pow_int(one - x[static_cast<size_t>(i)], spec.n[i] - spec.k[i]);
    }
    return acc;
}

/// Basis polynomial in closed form: prod_i C(n_i,k_i) u_i^{k_i} v_i^{n_i-k_i},
/// zero as soon as some n_i < k_i. Coincides with bernstein_classical at q = 1.
template <class T>
T q_bernstein(const BernsteinSpec& spec, const QPoint<T>& pt) {
    if (pt.dim() != spec.dim())
        throw DimensionMismatch("q_bernstein: point has wrong dimension");
    T acc = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i) {
        if (spec.k[i] > spec.n[i]) return numeric_traits<T>::from_long(0);
        acc = acc * from_integer<T>(binomial_mpz(spec.n[i], spec.k[i])) *
              pow_int(pt.u(i), spec.k[i]) * pow_int(pt.v(i), spec.n[i] - spec.k[i]);
    }
    return acc;
}

/// All one-coordinate values B_{0..n, n}(u,v) by the degree recurrence
/// B_{k,m} = v B_{k,m-1} + u B_{k-1,m-1}, from the base B_{0,0} = 1 and
/// zero outside 0 <= k <= m.
template <class T>
std::vector<T> bernstein_recurrence_row(int n, const T& u, const T& v) {
    if (n < 0) throw InvalidArgument("bernstein_recurrence_row: negative degree");
    const T zero = numeric_traits<T>::from_long(0);
    std::vector<T> row{numeric_traits<T>::from_long(1)};
    for (int m = 1; m <= n; ++m) {
        std::vector<T> next(static_cast<size_t>(m) + 1, zero);
        for (int k = 0; k <= m; ++k) {
            T acc = zero;
            if (k <= m - 1) acc = acc + v * row[static_cast<size_t>(k)];
            if (k >= 1 && k - 1 <= m - 1) acc = acc + u * row[static_cast<size_t>(k - 1)];
            next[static_cast<size_t>(k)] = acc;
        }
        row = std::move(next);
    }
    return row;
}

/// Basis polynomial evaluated through the degree recurrence; requires every
/// n_i >= 1. Must agree with q_bernstein.
template <class T>
T q_bernstein_recurrence(const BernsteinSpec& spec, const QPoint<T>& pt) {
    if (pt.dim() != spec.dim())
        throw DimensionMismatch("q_bernstein_recurrence: point has wrong dimension");
    for (int i = 0; i < spec.dim(); ++i)
        if (spec.n[i] < 1) throw InvalidDegree("q_bernstein_recurrence: degrees must be at least 1");
    T acc = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i) {
        if (spec.k[i] > spec.n[i]) return numeric_traits<T>::from_long(0);
        auto row = bernstein_recurrence_row(spec.n[i], pt.u(i), pt.v(i));
        acc = acc * row[static_cast<size_t>(spec.k[i])];
    }
    return acc;
}

/// Returns (B_{n-k; n} at the reflected point, B_{k; n} at the point).
/// Reflecting x swaps u and v, and the two values must be equal.
template <class T>
std::pair<T, T> q_bernstein_symmetry_check(const BernsteinSpec& spec, const QPoint<T>& pt,
                                           const QContext<T>& ctx) {
    if (pt.dim() != spec.dim())
        throw DimensionMismatch("q_bernstein_symmetry_check: point has wrong dimension");
    std::vector<int> nk(static_cast<size_t>(spec.dim()));
    for (int i = 0; i < spec.dim(); ++i) {
        if (spec.k[i] > spec.n[i])
            throw InvalidIndex("q_bernstein_symmetry_check: requires k <= n");
        nk[static_cast<size_t>(i)] = spec.n[i] - spec.k[i];
    }
    BernsteinSpec reflected_spec{MultiIndex(std::move(nk)), spec.n};
    return {q_bernstein(reflected_spec, pt.reflected(ctx)), q_bernstein(spec, pt)};
}

/// Operator of order sum n_i: sum over the index grid k <= n of
/// f(k_1/n_1, ..., k_w/n_w) B_{k;n}(pt). Grid nodes are exact rationals.
template <class T>
T q_bernstein_operator(const TargetFunction<T>& f, const MultiIndex& n, const QPoint<T>& pt) {
    const int w = n.dim();
    if (pt.dim() != w) throw DimensionMismatch("q_bernstein_operator: point has wrong dimension");
    if (f.arity != w) throw DimensionMismatch("q_bernstein_operator: function has wrong arity");
    for (int i = 0; i < w; ++i)
        if (n[i] < 1) throw InvalidDegree("q_bernstein_operator: degrees must be at least 1");

    std::vector<int> k(static_cast<size_t>(w), 0);
    std::vector<Rational> node(static_cast<size_t>(w));
    T acc = numeric_traits<T>::from_long(0);
    do {
        for (int i = 0; i < w; ++i) node[static_cast<size_t>(i)] = Rational(k[static_cast<size_t>(i)], n[i]);
        BernsteinSpec spec{MultiIndex(k), n};
        acc = acc + f.eval(node) * q_bernstein(spec, pt);
    } while (next_multi_index(k, n));
    return acc;
}

/// Sum of the full basis sum_{k<=n} B_{k;n}(pt), checked against the closed
/// form prod_i (1 + (1-q) u_i v_i)^{n_i}. The closed form holds on points
/// with u = [x]_q, v = [1-x]_q; feeding an inconsistent point trips the
/// identity sentinel. At q = 1 the sum is exactly 1.
template <class T>
T partition_sum(const MultiIndex& n, const QPoint<T>& pt, const QContext<T>& ctx) {
    const int w = n.dim();
    if (pt.dim() != w) throw DimensionMismatch("partition_sum: point has wrong dimension");
    std::vector<int> k(static_cast<size_t>(w), 0);
    T acc = numeric_traits<T>::from_long(0);
    do {
        BernsteinSpec spec{MultiIndex(k), n};
        acc = acc + q_bernstein(spec, pt);
    } while (next_multi_index(k, n));

    const T one = numeric_traits<T>::from_long(1);
    T closed = one;
    for (int i = 0; i < w; ++i)
        closed = closed * pow_int(one + (one - ctx.q) * pt.u(i) * pt.v(i), n[i]);
    if (!values_close(acc, closed, ctx.rel_tol))
        throw IdentityViolation("partition sum does not match its closed form");
    return acc;
}

/// Returns (recursive product expression, direct value) for the degree-index
/// relation B_{k;n} = prod_i ((n_i-k_i+1)/k_i) (u_i/v_i) B_{k-1;n}.
template <class T>
std::pair<T, T> degree_index_relation_check(const BernsteinSpec& spec, const QPoint<T>& pt) {
    if (pt.dim() != spec.dim())
        throw DimensionMismatch("degree_index_relation_check: point has wrong dimension");
    const T zero = numeric_traits<T>::from_long(0);
    std::vector<int> km1(static_cast<size_t>(spec.dim()));
    T factor = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i) {
        if (spec.k[i] < 1) throw InvalidIndex("degree_index_relation_check: requires k_i >= 1");
        if (pt.v(i) == zero)
            throw DivisionByZero("degree_index_relation_check: v_i = 0 (x_i = 1)");
        km1[static_cast<size_t>(i)] = spec.k[i] - 1;
        factor = factor * from_rational<T>(Rational(spec.n[i] - spec.k[i] + 1, spec.k[i])) *
                 (pt.u(i) / pt.v(i));
    }
    BernsteinSpec lower{MultiIndex(std::move(km1)), spec.n};
    return {factor * q_bernstein(lower, pt), q_bernstein(spec, pt)};
}

/// Expansion in powers of [x]_q:
///   sum_{l>=k} prod_i C(n_i,l_i) C(l_i,k_i) (-1)^{l_i-k_i} q^{(l_i-k_i)(1-x_i)} u_i^{l_i},
/// where q^{(l-k)(1-x)} = (q/q^x)^{l-k}. Needs q^x on every coordinate, so the
/// point must have been built from x or from q^x values.
template <class T>
T power_basis_expand(const BernsteinSpec& spec, const QPoint<T>& pt, const QContext<T>& ctx) {
    if (pt.dim() != spec.dim())
        throw DimensionMismatch("power_basis_expand: point has wrong dimension");
    const int w = spec.dim();
    T acc = numeric_traits<T>::from_long(1);
    for (int i = 0; i < w; ++i) {
        if (spec.k[i] > spec.n[i]) return numeric_traits<T>::from_long(0);
        if (!pt.coord(i).qpow_x)
            throw DomainUnsupported("power_basis_expand: point does not carry q^x");
        const T p = ctx.q / *pt.coord(i).qpow_x; // q^{1-x_i}
        T coord_sum = numeric_traits<T>::from_long(0);
        for (int l = spec.k[i]; l <= spec.n[i]; ++l) {
            T term = from_integer<T>(binomial_mpz(spec.n[i], l)) *
                     from_integer<T>(binomial_mpz(l, spec.k[i])) * pow_int(p, l - spec.k[i]) *
                     pow_int(pt.u(i), l);
            if ((l - spec.k[i]) % 2 != 0) term = -term;
            coord_sum = coord_sum + term;
        }
        acc = acc * coord_sum;
    }
    return acc;
}

/// Returns (LHS, RHS) of the moment identity
///   (prod_i u_i)^m = prod_i (u_i+v_i)^{-(n_i-m)} *
///       sum_{k>=m} prod_i (C(k_i,m)/C(n_i,m)) B_{k;n}(pt).
template <class T>
std::pair<T, T> moment_identity_check(int m, const MultiIndex& n, const QPoint<T>& pt) {
    if (m < 0) throw InvalidArgument("moment_identity_check: negative moment");
    const int w = n.dim();
    if (pt.dim() != w) throw DimensionMismatch("moment_identity_check: point has wrong dimension");
    for (int i = 0; i < w; ++i)
        if (n[i] < m) throw InvalidDegree("moment_identity_check: requires n_i >= m");

    T lhs = numeric_traits<T>::from_long(1);
    for (int i = 0; i < w; ++i) lhs = lhs * pow_int(pt.u(i), m);

    std::vector<int> k(static_cast<size_t>(w), 0);
    T sum = numeric_traits<T>::from_long(0);
    do {
        bool in_range = true;
        for (int i = 0; i < w; ++i)
            if (k[static_cast<size_t>(i)] < m) { in_range = false; break; }
        if (in_range) {
            T weight = numeric_traits<T>::from_long(1);
            for (int i = 0; i < w; ++i)
                weight = weight * from_rational<T>(Rational(binomial_mpz(k[static_cast<size_t>(i)], m),
                                                            binomial_mpz(n[i], m)));
            BernsteinSpec spec{MultiIndex(k), n};
            sum = sum + weight * q_bernstein(spec, pt);
        }
    } while (next_multi_index(k, n));

    T rhs = sum;
    for (int i = 0; i < w; ++i) rhs = rhs / pow_int(pt.u(i) + pt.v(i), n[i] - m);
    return {lhs, rhs};
}

/// Basis polynomial through Bernoulli polynomials of order k_i and
/// second-kind Stirling numbers:
///   B_{k;n} = prod_i u_i^{k_i} sum_{l<=n_i} C(n_i,l) B_l^{(k_i)}(v_i) S(n_i-l, k_i).
/// This is the coefficient identity behind writing each factor of the
/// generating series as t^k/k! e^{vt} = [(e^t-1)^k/k!] [(t/(e^t-1))^k e^{vt}].
template <class T>
T bernoulli_stirling_repr(const BernsteinSpec& spec, const QPoint<T>& pt) {
    if (pt.dim() != spec.dim())
        throw DimensionMismatch("bernoulli_stirling_repr: point has wrong dimension");
    T acc = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i) {
        const int n = spec.n[i];
        const int k = spec.k[i];
        BernoulliTable table = bernoulli_higher(n, k);
        T coord = numeric_traits<T>::from_long(0);
        for (int l = 0; l <= n; ++l)
            coord = coord + from_integer<T>(binomial_mpz(n, l)) *
                                bernoulli_poly_higher(table, l, pt.v(i)) *
                                from_rational<T>(stirling2(n - l, k));
        acc = acc * pow_int(pt.u(i), k) * coord;
    }
    return acc;
}

} // namespace qbern
