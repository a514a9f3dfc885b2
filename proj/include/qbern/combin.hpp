#pragma once

#include <vector>

#include "qbern/qcore.hpp"
#include "qbern/series.hpp"

namespace qbern {

/// Second-kind Stirling number S(n,k) as a big integer:
/// (1/k!) sum_{l<=k} C(k,l) (-1)^{k-l} l^n. The l^n terms overflow 64 bits
/// near n = 20, hence the big-integer carrier.
inline mpz_class stirling2_mpz(long n, long k) {
    if (n < 0 || k < 0) throw InvalidArgument("stirling2: arguments must be nonnegative");
    mpz_class acc = 0;
    for (long l = 0; l <= k; ++l) {
        mpz_class p;
        if (n == 0)
            p = 1; // 0^0 = 1
        else
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(n));
        mpz_class term = binomial_mpz(k, l) * p;
        if ((k - l) % 2 != 0) term = -term;
        acc += term;
    }
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), acc.get_mpz_t(), factorial_mpz(k).get_mpz_t());
    return r;
}

inline Rational stirling2(long n, long k) {
    return Rational(stirling2_mpz(n, k));
}

/// q-extension of the second-kind Stirling numbers:
/// S(n,k;q) = (q^{-C(k,2)}/[k]_q!) sum_{i<=k} (-1)^i q^{C(i,2)} C(k,i)_q [k-i]_q^n.
/// Reduces to S(n,k) at q = 1.
template <class T>
T q_stirling2(long n, long k, const QContext<T>& ctx) {
    if (n < 0 || k < 0) throw InvalidArgument("q_stirling2: arguments must be nonnegative");
    T acc = numeric_traits<T>::from_long(0);
    for (long i = 0; i <= k; ++i) {
        T term = gauss_binomial(k, i, ctx) * pow_int(ctx.q, i * (i - 1) / 2) *
                 pow_int(q_number_int(k - i, ctx), n);
        if (i % 2 != 0) term = -term;
        acc = acc + term;
    }
    return pow_int(ctx.q, -(k * (k - 1) / 2)) * acc / q_factorial(k, ctx);
}

/// Bernoulli numbers of order k: the EGF coefficients of (t/(e^t-1))^k.
struct BernoulliTable {
    long order = 0;
    std::vector<Rational> values; // values[n] = B_n^{(order)}
};

/// Builds B_0^{(k)}..B_N^{(k)} by exact truncated-series inversion of
/// (e^t-1)/t followed by a k-fold product.
inline BernoulliTable bernoulli_higher(int nmax, long order) {
    if (nmax < 0 || order < 0) throw InvalidArgument("bernoulli_higher: arguments must be nonnegative");
    // (e^t-1)/t has EGF coefficients 1/(n+1)
    EgfSeries<Rational> base(nmax);
    for (int n = 0; n <= nmax; ++n) base.set(n, Rational(1, n + 1));
    EgfSeries<Rational> table = base.invert().pow(order);
    BernoulliTable out;
    out.order = order;
    out.values.reserve(static_cast<size_t>(nmax) + 1);
    for (int n = 0; n <= nmax; ++n) out.values.push_back(table[n]);
    return out;
}

/// Bernoulli polynomial of order k evaluated from a prebuilt table:
/// B_n^{(k)}(y) = sum_j C(n,j) B_j^{(k)} y^{n-j}.
template <class T>
T bernoulli_poly_higher(const BernoulliTable& table, int n, const T& y) {
    if (n < 0) throw InvalidArgument("bernoulli_poly_higher: negative degree");
    if (static_cast<size_t>(n) >= table.values.size())
        throw InvalidArgument("bernoulli_poly_higher: table too short for requested degree");
    T acc = numeric_traits<T>::from_long(0);
    for (int j = 0; j <= n; ++j)
        acc = acc + from_integer<T>(binomial_mpz(n, j)) *
                        from_rational<T>(table.values[static_cast<size_t>(j)]) * pow_int(y, n - j);
    return acc;
}

template <class T>
T bernoulli_poly_higher(int n, long order, const T& y) {
    return bernoulli_poly_higher(bernoulli_higher(n, order), n, y);
}

/// q-power expansion: evaluates
///   sum_{k<=n} q^{C(k,2)} C(x,k)_q [k]_q! S(n,k;q)
/// and checks it against [x]_q^n before returning it. A mismatch beyond the
/// domain tolerance signals an implementation bug, not a user error.
template <class T>
T q_power_expand(int n, const T& x, const QContext<T>& ctx) {
    if (n < 0) throw InvalidArgument("q_power_expand: negative power");
    T sum = numeric_traits<T>::from_long(0);
    const bool classical = ctx.classical();
    T qx = classical ? numeric_traits<T>::from_long(1) : numeric_traits<T>::pow_real(ctx.q, x);
    for (long k = 0; k <= n; ++k) {
        T gb = classical ? gauss_binomial_real(x, k, ctx)
                         : detail::gauss_binomial_from_qpow(qx, k, ctx);
        sum = sum + pow_int(ctx.q, k * (k - 1) / 2) * gb * q_factorial(k, ctx) *
                        q_stirling2(n, k, ctx);
    }
    T direct = pow_int(q_number(x, ctx), n);
    if (!values_close(sum, direct, ctx.rel_tol))
        throw IdentityViolation("q-power expansion does not match [x]_q^n");
    return sum;
}

} // namespace qbern
