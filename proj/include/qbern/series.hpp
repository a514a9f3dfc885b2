#pragma once

#include <utility>
#include <vector>

#include "qbern/qcore.hpp"

namespace qbern {

/// Truncated exponential generating series: coefficients c_0..c_N of
/// sum c_n t^n/n!. Arithmetic is closed at order N and never reads beyond it.
template <class T>
class EgfSeries {
public:
    explicit EgfSeries(int order)
        : c_(static_cast<size_t>(check_order(order)) + 1, numeric_traits<T>::from_long(0)) {}

    static EgfSeries zero(int order) { return EgfSeries(order); }

    static EgfSeries one(int order) {
        EgfSeries s(order);
        s.c_[0] = numeric_traits<T>::from_long(1);
        return s;
    }

    /// EGF of e^{at}: c_n = a^n.
    static EgfSeries exponential(const T& a, int order) {
        EgfSeries s(order);
        T p = numeric_traits<T>::from_long(1);
        for (int n = 0; n <= order; ++n) {
            s.c_[static_cast<size_t>(n)] = p;
            if (n < order) p = p * a;
        }
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }

    const T& operator[](int n) const { return c_[static_cast<size_t>(n)]; }
    void set(int n, T value) { c_.at(static_cast<size_t>(n)) = std::move(value); }

    friend EgfSeries operator+(const EgfSeries& f, const EgfSeries& g) {
        f.require_same_order(g);
        EgfSeries r(f.order());
        for (size_t n = 0; n < r.c_.size(); ++n) r.c_[n] = f.c_[n] + g.c_[n];
        return r;
    }

    friend EgfSeries operator-(const EgfSeries& f, const EgfSeries& g) {
        f.require_same_order(g);
        EgfSeries r(f.order());
        for (size_t n = 0; n < r.c_.size(); ++n) r.c_[n] = f.c_[n] - g.c_[n];
        return r;
    }

    EgfSeries scaled(const T& s) const {
        EgfSeries r(order());
        for (size_t n = 0; n < c_.size(); ++n) r.c_[n] = s * c_[n];
        return r;
    }

    /// Product of EGFs: binomial convolution c_n = sum_j C(n,j) f_j g_{n-j}.
    EgfSeries mul(const EgfSeries& g) const {
        require_same_order(g);
        const int N = order();
        EgfSeries r(N);
        for (int n = 0; n <= N; ++n) {
            T acc = numeric_traits<T>::from_long(0);
            for (int j = 0; j <= n; ++j)
                acc = acc + from_integer<T>(binomial_mpz(n, j)) *
                                c_[static_cast<size_t>(j)] * g.c_[static_cast<size_t>(n - j)];
            r.c_[static_cast<size_t>(n)] = acc;
        }
        return r;
    }

    /// Multiplicative inverse to order N; requires c_0 != 0.
    EgfSeries invert() const {
        if (c_[0] == numeric_traits<T>::from_long(0))
            throw ZeroConstantTerm("EgfSeries::invert: constant term is zero");
        const int N = order();
        EgfSeries r(N);
        const T inv0 = numeric_traits<T>::from_long(1) / c_[0];
        r.c_[0] = inv0;
        for (int n = 1; n <= N; ++n) {
            T acc = numeric_traits<T>::from_long(0);
            for (int j = 1; j <= n; ++j)
                acc = acc + from_integer<T>(binomial_mpz(n, j)) *
                                c_[static_cast<size_t>(j)] * r.c_[static_cast<size_t>(n - j)];
            r.c_[static_cast<size_t>(n)] = -inv0 * acc;
        }
        return r;
    }

    /// k-th power by repeated squaring; k >= 0.
    EgfSeries pow(long k) const {
        if (k < 0) throw InvalidArgument("EgfSeries::pow: negative exponent");
        EgfSeries acc = one(order());
        EgfSeries base = *this;
        while (k > 0) {
            if (k & 1) acc = acc.mul(base);
            k >>= 1;
            if (k > 0) base = base.mul(base);
        }
        return acc;
    }

    /// Multiplication by scale * t^k/k!: c'_n = C(n,k) * scale * c_{n-k}.
    EgfSeries shift_monomial(int k, const T& scale) const {
        if (k < 0) throw InvalidArgument("EgfSeries::shift_monomial: negative shift");
        const int N = order();
        EgfSeries r(N);
        for (int n = k; n <= N; ++n)
            r.c_[static_cast<size_t>(n)] =
                from_integer<T>(binomial_mpz(n, k)) * scale * c_[static_cast<size_t>(n - k)];
        return r;
    }

private:
    static int check_order(int order) {
        if (order < 0) throw InvalidArgument("EgfSeries: order must be nonnegative");
        return order;
    }
    void require_same_order(const EgfSeries& g) const {
        if (order() != g.order())
            throw OrderMismatch("EgfSeries: operands have different truncation orders");
    }

    std::vector<T> c_;
};

template <class T>
EgfSeries<T> egf_exp(const T& a, int order) {
    return EgfSeries<T>::exponential(a, order);
}

template <class T>
EgfSeries<T> egf_mul(const EgfSeries<T>& f, const EgfSeries<T>& g) {
    return f.mul(g);
}

template <class T>
EgfSeries<T> egf_invert(const EgfSeries<T>& f) {
    return f.invert();
}

/// c_n, i.e. n! times the ordinary t^n coefficient. This is the value the
/// Cauchy coefficient integral (n!/2 pi i) \oint F(t) dt/t^{n+1} extracts
/// for the entire integrands in scope.
template <class T>
T coeff_extract(const EgfSeries<T>& f, int n) {
    if (n < 0) throw InvalidArgument("coeff_extract: negative index");
    if (n > f.order()) throw OrderExceeded("coeff_extract: index exceeds truncation order");
    return f[n];
}

/// Generating series of the one-coordinate basis polynomials:
/// (t u)^k/k! e^{vt}, whose EGF coefficients are C(n,k) u^k v^{n-k}.
template <class T>
EgfSeries<T> bernstein_gf(int k, const T& u, const T& v, int order) {
    if (k < 0) throw InvalidArgument("bernstein_gf: negative index");
    return egf_exp(v, order).shift_monomial(k, pow_int(u, k));
}

namespace detail {

/// One-coordinate closed form C(n,k) u^k v^{n-k}; the independent side of
/// the generating-series identity checks.
template <class T>
T bernstein_closed_form(int k, int n, const T& u, const T& v) {
    if (k > n) return numeric_traits<T>::from_long(0);
    return from_integer<T>(binomial_mpz(n, k)) * pow_int(u, k) * pow_int(v, n - k);
}

template <class T>
void compositions_rec(int coord, int remaining, std::vector<int>& n, const MultiIndex& k,
                      const QPoint<T>& pt, const T& prefix, T& acc) {
    const int w = k.dim();
    if (coord == w - 1) {
        if (remaining < k[coord]) return;
        n[static_cast<size_t>(coord)] = remaining;
        T term = prefix * bernstein_closed_form(k[coord], remaining, pt.u(coord), pt.v(coord)) /
                 from_integer<T>(factorial_mpz(remaining));
        acc = acc + term;
        return;
    }
    for (int ni = k[coord]; ni <= remaining; ++ni) {
        n[static_cast<size_t>(coord)] = ni;
        T term = prefix * bernstein_closed_form(k[coord], ni, pt.u(coord), pt.v(coord)) /
                 from_integer<T>(factorial_mpz(ni));
        compositions_rec(coord + 1, remaining - ni, n, k, pt, term, acc);
    }
}

} // namespace detail

/// N! [t^N] of prod_i (t u_i)^{k_i}/k_i! e^{t sum v_i}, computed through the
/// series product, and checked against the composition sum
/// sum_{n_1+..+n_w=N, n_i>=k_i} N! prod_i C(n_i,k_i) u_i^{k_i} v_i^{n_i-k_i} / n_i!.
/// Returns 0 when N is below the t-adic valuation sum k_i.
template <class T>
T multivariate_gf_coeff(int N, const MultiIndex& k, const QPoint<T>& pt, const QContext<T>& ctx) {
    if (N < 0) throw InvalidArgument("multivariate_gf_coeff: negative order");
    if (k.dim() != pt.dim())
        throw DimensionMismatch("multivariate_gf_coeff: index/point dimensions differ");
    const int w = k.dim();

    EgfSeries<T> joint = bernstein_gf(k[0], pt.u(0), pt.v(0), N);
    for (int i = 1; i < w; ++i)
        joint = joint.mul(bernstein_gf(k[i], pt.u(i), pt.v(i), N));
    T via_series = coeff_extract(joint, N);

    T via_compositions = numeric_traits<T>::from_long(0);
    if (N >= k.sum()) {
        std::vector<int> n(static_cast<size_t>(w), 0);
        T scale = from_integer<T>(factorial_mpz(N));
        detail::compositions_rec(0, N, n, k, pt, scale, via_compositions);
    }

    if (!values_close(via_series, via_compositions, ctx.rel_tol))
        throw IdentityViolation("multivariate generating-series coefficient mismatch");
    return via_series;
}

} // namespace qbern
