#pragma once

#include <utility>

#include "qbern/bernstein.hpp"
#include "qbern/qcore.hpp"

namespace qbern {

/// Argument bundle for the interpolation function: indices k_i and an
/// evaluation point with every v_i = [1-x_i]_q > 0 (x_i != 1), so that the
/// complex power v^{-s} is well defined.
template <class T>
struct InterpSpec {
    MultiIndex k;
    QPoint<T> pt;

    InterpSpec(MultiIndex k_, QPoint<T> pt_) : k(std::move(k_)), pt(std::move(pt_)) {
        if (k.dim() != pt.dim())
            throw DimensionMismatch("InterpSpec: index/point dimensions differ");
        const T zero = numeric_traits<T>::from_long(0);
        for (int i = 0; i < pt.dim(); ++i)
            if (!(pt.v(i) > zero))
                throw PoleAtOne("InterpSpec: v_i = 0 (x_i = 1), the function diverges there");
    }

    int dim() const { return k.dim(); }
};

namespace detail {

template <class T>
T interp_prefactor(const InterpSpec<T>& spec) {
    T acc = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i)
        acc = acc * pow_int(spec.pt.u(i), spec.k[i]) / from_integer<T>(factorial_mpz(spec.k[i]));
    if (spec.k.sum() % 2 != 0) acc = -acc;
    return acc;
}

} // namespace detail

/// Interpolation function of complex argument s:
///   (-1)^{sum k_i} prod_i (u_i^{k_i}/k_i!) (prod_i v_i)^{-s},
/// principal branch; entire in s since every v_i > 0.
template <class T>
Complex<T> interp_q(const Complex<T>& s, const InterpSpec<T>& spec) {
    T vprod = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i) vprod = vprod * spec.pt.v(i);
    return detail::interp_prefactor(spec) * cpow_positive_base(vprod, -s);
}

/// Same function at an integer argument; stays inside the scalar domain, so
/// the rational path is exact.
template <class T>
T interp_q_int(long s, const InterpSpec<T>& spec) {
    T vprod = numeric_traits<T>::from_long(1);
    for (int i = 0; i < spec.dim(); ++i) vprod = vprod * spec.pt.v(i);
    return detail::interp_prefactor(spec) * pow_int(vprod, -s);
}

/// Special values at negative integers. Returns the pair
///   ( value of the interpolation function at s = -(n_1+...+n_w),
///     prod_i ((-1)^{k_i} n_i!/(n_i+k_i)!) B_{k; n+k}(pt) ).
/// The transform factorizes over coordinates, so coordinate i contributes
/// v_i^{n_i}; the two sides must be equal.
template <class T>
std::pair<T, T> special_value_check(const MultiIndex& n, const InterpSpec<T>& spec) {
    if (n.dim() != spec.dim())
        throw DimensionMismatch("special_value_check: index dimensions differ");
    const int w = spec.dim();

    T lhs = detail::interp_prefactor(spec);
    for (int i = 0; i < w; ++i) lhs = lhs * pow_int(spec.pt.v(i), n[i]);

    std::vector<int> nk(static_cast<size_t>(w));
    T factor = numeric_traits<T>::from_long(1);
    for (int i = 0; i < w; ++i) {
        nk[static_cast<size_t>(i)] = n[i] + spec.k[i];
        T f = from_rational<T>(Rational(factorial_mpz(n[i]), factorial_mpz(n[i] + spec.k[i])));
        if (spec.k[i] % 2 != 0) f = -f;
        factor = factor * f;
    }
    BernsteinSpec bspec{spec.k, MultiIndex(std::move(nk))};
    T rhs = factor * q_bernstein(bspec, spec.pt);
    return {lhs, rhs};
}

/// q -> 1 limit of the interpolation function:
///   (-1)^{sum k_i} prod_i (x_i^{k_i}/k_i!) (prod_i (1-x_i))^{-s}.
template <class T>
Complex<T> interp_limit(const Complex<T>& s, const MultiIndex& k, std::span<const T> x) {
    if (static_cast<int>(x.size()) != k.dim())
        throw DimensionMismatch("interp_limit: point has wrong dimension");
    const T zero = numeric_traits<T>::from_long(0);
    const T one = numeric_traits<T>::from_long(1);
    T pre = one;
    T vprod = one;
    for (int i = 0; i < k.dim(); ++i) {
        const T& xi = x[static_cast<size_t>(i)];
        if (xi < zero || xi > one) throw InvalidArgument("interp_limit: x must lie in [0,1]");
        if (xi == one) throw PoleAtOne("interp_limit: diverges at x_i = 1");
        pre = pre * pow_int(xi, k[i]) / from_integer<T>(factorial_mpz(k[i]));
        vprod = vprod * (one - xi);
    }
    if (k.sum() % 2 != 0) pre = -pre;
    return pre * cpow_positive_base(vprod, -s);
}

/// i-th s-derivative of the limit function. The s-dependence is
/// (prod_j (1-x_j))^{-s}, so each derivative multiplies by
/// log(1/prod_j(1-x_j)).
template <class T>
Complex<T> interp_derivative(int i, const Complex<T>& s, const MultiIndex& k,
                             std::span<const T> x) {
    if (i < 0) throw InvalidArgument("interp_derivative: negative order");
    using std::log;
    Complex<T> base = interp_limit(s, k, x);
    const T one = numeric_traits<T>::from_long(1);
    T vprod = one;
    for (size_t j = 0; j < x.size(); ++j) vprod = vprod * (one - x[j]);
    T factor = pow_int(log(one / vprod), i);
    return factor * base;
}

namespace detail {

/// Adaptive Simpson on [a,b] with absolute tolerance eps.
template <class T, class F>
T adaptive_simpson(const F& f, const T& a, const T& b, const T& fa, const T& fb, const T& fm,
                   const T& whole, const T& eps, int depth) {
    const T half = from_rational<T>(Rational(1, 2));
    T m = (a + b) * half;
    T lm = (a + m) * half;
    T rm = (m + b) * half;
    T flm = f(lm);
    T frm = f(rm);
    T sixth = (b - a) / numeric_traits<T>::from_long(12);
    T left = sixth * (fa + numeric_traits<T>::from_long(4) * flm + fm);
    T right = sixth * (fm + numeric_traits<T>::from_long(4) * frm + fb);
    T delta = left + right - whole;
    if (depth <= 0 || numeric_traits<T>::abs(delta) <= numeric_traits<T>::from_long(15) * eps)
        return left + right + delta / numeric_traits<T>::from_long(15);
    return adaptive_simpson(f, a, m, fa, fm, flm, left, eps * half, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, eps * half, depth - 1);
}

template <class T, class F>
T integrate(const F& f, const T& a, const T& b, const T& eps) {
    const T half = from_rational<T>(Rational(1, 2));
    T m = (a + b) * half;
    T fa = f(a), fb = f(b), fm = f(m);
    T whole = (b - a) / numeric_traits<T>::from_long(6) *
              (fa + numeric_traits<T>::from_long(4) * fm + fb);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, eps, 48);
}

} // namespace detail

/// Mellin-transform cross-check at a positive integer s. The transform of
/// the generating series factorizes over coordinates; each coordinate
/// contributes
///   (1/(s-1)!) int_0^inf t^{s-k_i-1} ((-t u_i)^{k_i}/k_i!) e^{-t v_i} dt,
/// evaluated here by adaptive quadrature on [0,T] with the tail of the
/// truncated integral held below 1e-12 of the integral scale. Returns the
/// pair (product of quadratures, closed-form value at s).
template <class T>
std::pair<T, T> mellin_check(long s, const InterpSpec<T>& spec) {
    if (s < 1) throw NonPositiveInteger("mellin_check: s must be a positive integer");
    const T one = numeric_traits<T>::from_long(1);
    const T gamma_s = from_integer<T>(factorial_mpz(s - 1));

    T quad_total = one;
    for (int i = 0; i < spec.dim(); ++i) {
        const long k = spec.k[i];
        const T u = spec.pt.u(i);
        const T v = spec.pt.v(i);
        // t^{s-k-1} (-t u)^k / k! = ((-u)^k/k!) t^{s-1}; the combined form
        // avoids the 0 * inf artifact of the split factors at t = 0.
        T coeff = pow_int(u, k) / from_integer<T>(factorial_mpz(k));
        if (k % 2 != 0) coeff = -coeff;
        auto integrand = [&](const T& t) {
            using std::exp;
            return pow_int(t, s - 1) * exp(-t * v);
        };
        // scale of the full integral: Gamma(s)/v^s
        T scale = gamma_s * pow_int(v, -s);
        T tail_tol = scale * from_rational<T>(Rational(1, 1000000000000L));
        T upper = numeric_traits<T>::from_long(std::max(1L, 2 * s)) / v;
        for (int doublings = 0; doublings < 128; ++doublings) {
            using std::exp;
            T tail_bound = numeric_traits<T>::from_long(2) * pow_int(upper, s - 1) *
                           exp(-upper * v) / v;
            if (tail_bound <= tail_tol) break;
            upper = upper * numeric_traits<T>::from_long(2);
        }
        T quad = detail::integrate(integrand, numeric_traits<T>::from_long(0), upper,
                                   scale * from_rational<T>(Rational(1, 10000000000000L)));
        quad_total = quad_total * (coeff * quad / gamma_s);
    }
    return {quad_total, interp_q_int(s, spec)};
}

} // namespace qbern
