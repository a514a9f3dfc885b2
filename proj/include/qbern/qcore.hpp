#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "qbern/errors.hpp"
#include "qbern/numeric.hpp"

namespace qbern {

/// Deformation parameter q in (0,1] plus the identity-check tolerance for
/// floating domains. q = 1 selects the classical limit of every quantity.
template <class T>
struct QContext {
    T q;
    double rel_tol = 1e-9;

    explicit QContext(T q_, double rel_tol_ = 1e-9) : q(std::move(q_)), rel_tol(rel_tol_) {
        T zero = numeric_traits<T>::from_long(0);
        T one = numeric_traits<T>::from_long(1);
        if (!(q > zero) || q > one) throw InvalidArgument("QContext: q must lie in (0,1]");
        if (!(rel_tol > 0)) throw InvalidArgument("QContext: rel_tol must be positive");
    }

    bool classical() const { return q == numeric_traits<T>::from_long(1); }
};

/// [x]_q = (1-q^x)/(1-q); continuously extended to x at q = 1.
template <class T>
T q_number(const T& x, const QContext<T>& ctx) {
    if (ctx.classical()) return x;
    const T one = numeric_traits<T>::from_long(1);
    return numeric_traits<T>::one_minus_pow(ctx.q, x) / (one - ctx.q);
}

/// [n]_q for integer n; exact in every domain.
template <class T>
T q_number_int(long n, const QContext<T>& ctx) {
    if (ctx.classical()) return numeric_traits<T>::from_long(n);
    const T one = numeric_traits<T>::from_long(1);
    return (one - pow_int(ctx.q, n)) / (one - ctx.q);
}

/// [x]_{-q} = (1-(-q)^x)/(1+q); defined for integer x only.
template <class T>
T q_number_neg(const T& x, const QContext<T>& ctx) {
    auto n = numeric_traits<T>::as_integer(x);
    if (!n) throw NonIntegerArgument("[x]_{-q} requires an integer argument");
    const T one = numeric_traits<T>::from_long(1);
    T p = pow_int(ctx.q, *n);
    if (*n % 2 != 0) p = -p;
    return (one - p) / (one + ctx.q);
}

/// [n]_q! = [n]_q [n-1]_q ... [1]_q, empty product for n = 0.
template <class T>
T q_factorial(long n, const QContext<T>& ctx) {
    if (n < 0) throw InvalidArgument("q_factorial: negative argument");
    T r = numeric_traits<T>::from_long(1);
    for (long j = 2; j <= n; ++j) r = r * q_number_int(j, ctx);
    return r;
}

/// Gaussian binomial coefficient with integer upper argument:
/// [n]_q [n-1]_q ... [n-k+1]_q / [k]_q!.
template <class T>
T gauss_binomial(long n, long k, const QContext<T>& ctx) {
    if (k < 0) throw InvalidArgument("gauss_binomial: k must be nonnegative");
    T num = numeric_traits<T>::from_long(1);
    for (long j = 0; j < k; ++j) num = num * q_number_int(n - j, ctx);
    return num / q_factorial(k, ctx);
}

namespace detail {

/// Gaussian binomial with real upper argument, given qx = q^x (q < 1).
/// Each factor [x-j]_q = (1 - qx q^{-j})/(1-q) is rational in qx.
template <class T>
T gauss_binomial_from_qpow(const T& qx, long k, const QContext<T>& ctx) {
    const T one = numeric_traits<T>::from_long(1);
    T num = one;
    for (long j = 0; j < k; ++j)
        num = num * ((one - qx * pow_int(ctx.q, -j)) / (one - ctx.q));
    return num / q_factorial(k, ctx);
}

} // namespace detail

/// Gaussian binomial with a real upper argument (falling q-factorial form).
template <class T>
T gauss_binomial_real(const T& x, long k, const QContext<T>& ctx) {
    if (k < 0) throw InvalidArgument("gauss_binomial_real: k must be nonnegative");
    if (ctx.classical()) {
        T num = numeric_traits<T>::from_long(1);
        for (long j = 0; j < k; ++j) num = num * (x - numeric_traits<T>::from_long(j));
        return num / from_integer<T>(factorial_mpz(k));
    }
    return detail::gauss_binomial_from_qpow(numeric_traits<T>::pow_real(ctx.q, x), k, ctx);
}

/// Forward difference at 0: sum_{k<=n} C(n,k) (-1)^{n-k} f(k).
template <class T>
T shift_difference(std::span<const T> f, long n) {
    if (n < 0) throw InvalidArgument("shift_difference: negative order");
    if (static_cast<long>(f.size()) < n + 1)
        throw InvalidArgument("shift_difference: sequence must be defined on 0..n");
    T acc = numeric_traits<T>::from_long(0);
    for (long k = 0; k <= n; ++k) {
        T term = from_integer<T>(binomial_mpz(n, k)) * f[static_cast<size_t>(k)];
        if ((n - k) % 2 != 0) term = -term;
        acc = acc + term;
    }
    return acc;
}

/// q-difference at 0, expanded sum form:
/// sum_{k<=n} C(n,k)_q (-1)^k q^{C(k,2)} f(n-k).
/// The exponent is per-term q^{C(k,2)}; this is what the operator product
/// prod_{i<n} (E - q^i I) expands to, and q_difference_by_operator below
/// computes that product literally as the independent route.
template <class T>
T q_difference(std::span<const T> f, long n, const QContext<T>& ctx) {
    if (n < 0) throw InvalidArgument("q_difference: negative order");
    if (static_cast<long>(f.size()) < n + 1)
        throw InvalidArgument("q_difference: sequence must be defined on 0..n");
    T acc = numeric_traits<T>::from_long(0);
    for (long k = 0; k <= n; ++k) {
        T term = gauss_binomial(n, k, ctx) * pow_int(ctx.q, k * (k - 1) / 2) * f[static_cast<size_t>(n - k)];
        if (k % 2 != 0) term = -term;
        acc = acc + term;
    }
    return acc;
}

/// q-difference at 0 by expanding the operator product prod_{i<n}(E - q^i I)
/// into shift coefficients and applying them to f.
template <class T>
T q_difference_by_operator(std::span<const T> f, long n, const QContext<T>& ctx) {
    if (n < 0) throw InvalidArgument("q_difference_by_operator: negative order");
    if (static_cast<long>(f.size()) < n + 1)
        throw InvalidArgument("q_difference_by_operator: sequence must be defined on 0..n");
    std::vector<T> coeff{numeric_traits<T>::from_long(1)}; // coeff[j] multiplies E^j
    for (long i = 0; i < n; ++i) {
        std::vector<T> next(coeff.size() + 1, numeric_traits<T>::from_long(0));
        T qi = pow_int(ctx.q, i);
        for (size_t j = 0; j < coeff.size(); ++j) {
            next[j + 1] = next[j + 1] + coeff[j];
            next[j] = next[j] - qi * coeff[j];
        }
        coeff = std::move(next);
    }
    T acc = numeric_traits<T>::from_long(0);
    for (size_t j = 0; j < coeff.size(); ++j) acc = acc + coeff[j] * f[j];
    return acc;
}

/// A w-vector of nonnegative integers (polynomial indices and degrees).
class MultiIndex {
public:
    MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}
    explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
        if (e_.empty()) throw InvalidArgument("MultiIndex: length must be at least 1");
        for (int v : e_)
            if (v < 0) throw InvalidArgument("MultiIndex: entries must be nonnegative");
    }

    int dim() const { return static_cast<int>(e_.size()); }
    int operator[](int i) const { return e_[static_cast<size_t>(i)]; }
    long sum() const {
        long s = 0;
        for (int v : e_) s += v;
        return s;
    }
    const std::vector<int>& entries() const { return e_; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }

private:
    std::vector<int> e_;
};

/// Lexicographic odometer over { k : 0 <= k_i <= n_i }. Start from the zero
/// vector; returns false after the last index.
inline bool next_multi_index(std::vector<int>& k, const MultiIndex& n) {
    for (int i = n.dim() - 1; i >= 0; --i) {
        if (k[static_cast<size_t>(i)] < n[i]) {
            ++k[static_cast<size_t>(i)];
            return true;
        }
        k[static_cast<size_t>(i)] = 0;
    }
    return false;
}

/// One evaluation coordinate: u = [x]_q and v = [1-x]_q, with the original
/// x and q^x kept when they are known.
template <class T>
struct QCoord {
    T u;
    T v;
    std::optional<T> x;
    std::optional<T> qpow_x; // q^x, needed by the power-basis expansion
};

/// A w-dimensional evaluation point. Points built from an x-vector or from
/// q^x values satisfy u + v = 1 + (1-q) u v per coordinate; points built
/// from raw (u,v) pairs need not.
template <class T>
class QPoint {
public:
    static QPoint from_x(std::span<const T> xs, const QContext<T>& ctx) {
        const T zero = numeric_traits<T>::from_long(0);
        const T one = numeric_traits<T>::from_long(1);
        QPoint pt;
        for (const T& x : xs) {
            if (x < zero || x > one) throw InvalidArgument("QPoint: x must lie in [0,1]");
            QCoord<T> c{q_number(x, ctx), q_number(one - x, ctx), x,
                        numeric_traits<T>::pow_real(ctx.q, x)};
            pt.coords_.push_back(std::move(c));
        }
        return pt;
    }

    /// Build from z_i = q^{x_i}; exact whenever q and z are rational.
    /// Requires q < 1 (at q = 1 the parameterization degenerates; use from_x).
    static QPoint from_qpow(std::span<const T> zs, const QContext<T>& ctx) {
        if (ctx.classical()) throw InvalidArgument("QPoint::from_qpow requires q < 1");
        const T one = numeric_traits<T>::from_long(1);
        QPoint pt;
        for (const T& z : zs) {
            if (z < ctx.q || z > one) throw InvalidArgument("QPoint: q^x must lie in [q,1]");
            QCoord<T> c{(one - z) / (one - ctx.q), (one - ctx.q / z) / (one - ctx.q),
                        std::nullopt, z};
            pt.coords_.push_back(std::move(c));
        }
        return pt;
    }

    /// Build from raw (u,v) pairs; x and q^x stay unknown.
    static QPoint from_uv(std::span<const std::pair<T, T>> uv) {
        const T zero = numeric_traits<T>::from_long(0);
        QPoint pt;
        for (const auto& [u, v] : uv) {
            if (u < zero || v < zero) throw InvalidArgument("QPoint: u and v must be nonnegative");
            pt.coords_.push_back(QCoord<T>{u, v, std::nullopt, std::nullopt});
        }
        return pt;
    }

    int dim() const { return static_cast<int>(coords_.size()); }
    const QCoord<T>& coord(int i) const { return coords_[static_cast<size_t>(i)]; }
    const T& u(int i) const { return coords_[static_cast<size_t>(i)].u; }
    const T& v(int i) const { return coords_[static_cast<size_t>(i)].v; }

    /// The point at 1-x: swaps u and v coordinatewise ([1-(1-x)]_q = [x]_q).
    QPoint reflected(const QContext<T>& ctx) const {
        const T one = numeric_traits<T>::from_long(1);
        QPoint pt;
        for (const auto& c : coords_) {
            QCoord<T> r{c.v, c.u, std::nullopt, std::nullopt};
            if (c.x) r.x = one - *c.x;
            if (c.qpow_x) r.qpow_x = ctx.q / *c.qpow_x; // q^{1-x}
            pt.coords_.push_back(std::move(r));
        }
        return pt;
    }

    /// Whether u + v = 1 + (1-q) u v holds on every coordinate.
    bool kernel_consistent(const QContext<T>& ctx) const {
        const T one = numeric_traits<T>::from_long(1);
        for (const auto& c : coords_) {
            T lhs = c.u + c.v;
            T rhs = one + (one - ctx.q) * c.u * c.v;
            if (!values_close(lhs, rhs, ctx.rel_tol)) return false;
        }
        return true;
    }

private:
    std::vector<QCoord<T>> coords_;
};

} // namespace qbern
