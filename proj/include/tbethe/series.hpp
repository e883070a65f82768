#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "tbethe/errors.hpp"
#include "tbethe/precision.hpp"

namespace tbethe {

/// Power series in one variable truncated at a fixed length. All operands of a
/// binary operation must share the same length.
template <class C> struct PowerSeries {
    std::vector<C> c;

    PowerSeries() = default;
    explicit PowerSeries(std::size_t len) : c(len, C(0)) {}
    PowerSeries(std::size_t len, const C& constant) : c(len, C(0)) {
        if (len > 0) c[0] = constant;
    }

    std::size_t length() const { return c.size(); }
    const C& operator[](std::size_t k) const { return c[k]; }
    C& operator[](std::size_t k) { return c[k]; }

    /// Horner evaluation at the given point.
    C eval(const C& x) const {
        C acc(0);
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    }
};

template <class C> PowerSeries<C> operator+(PowerSeries<C> a, const PowerSeries<C>& b) {
    assert(a.length() == b.length());
    for (std::size_t k = 0; k < a.length(); ++k) a.c[k] += b.c[k];
    return a;
}

template <class C> PowerSeries<C> operator-(PowerSeries<C> a, const PowerSeries<C>& b) {
    assert(a.length() == b.length());
    for (std::size_t k = 0; k < a.length(); ++k) a.c[k] -= b.c[k];
    return a;
}

template <class C> PowerSeries<C> operator-(PowerSeries<C> a) {
    for (auto& x : a.c) x = -x;
    return a;
}

template <class C> PowerSeries<C> operator*(const PowerSeries<C>& a, const PowerSeries<C>& b) {
    assert(a.length() == b.length());
    PowerSeries<C> r(a.length());
    for (std::size_t i = 0; i < a.length(); ++i) {
        if (a.c[i] == C(0)) continue;
        for (std::size_t j = 0; i + j < b.length(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

template <class C> PowerSeries<C> operator*(PowerSeries<C> a, const C& s) {
    for (auto& x : a.c) x *= s;
    return a;
}
template <class C> PowerSeries<C> operator*(const C& s, PowerSeries<C> a) { return a * s; }

template <class C> PowerSeries<C> operator*(PowerSeries<C> a, double s) {
    for (auto& x : a.c) x *= C(s);
    return a;
}

template <class C> PowerSeries<C> operator+(PowerSeries<C> a, const C& s) {
    if (a.length() > 0) a.c[0] += s;
    return a;
}
template <class C> PowerSeries<C> operator+(PowerSeries<C> a, double s) {
    if (a.length() > 0) a.c[0] += C(s);
    return a;
}
template <class C> PowerSeries<C> operator-(PowerSeries<C> a, const C& s) {
    if (a.length() > 0) a.c[0] -= s;
    return a;
}

template <class C> PowerSeries<C> one_like(const PowerSeries<C>& a) {
    return PowerSeries<C>(a.length(), C(1));
}

inline cdouble one_like(const cdouble&) { return cdouble(1); }
inline cmp50 one_like(const cmp50&) { return cmp50(1); }
inline cmp100 one_like(const cmp100&) { return cmp100(1); }

/// exp of a series with zero constant term, via the standard recurrence
/// e' = e * x'.
template <class C> PowerSeries<C> exp0(const PowerSeries<C>& x) {
    assert(x.length() == 0 || x.c[0] == C(0));
    PowerSeries<C> e(x.length());
    if (e.length() == 0) return e;
    e.c[0] = C(1);
    for (std::size_t n = 1; n < x.length(); ++n) {
        C acc(0);
        for (std::size_t k = 1; k <= n; ++k) acc += C(double(k)) * x.c[k] * e.c[n - k];
        e.c[n] = acc / C(double(n));
    }
    return e;
}

/// exp(coeff * beta) as a series.
template <class C> PowerSeries<C> exp_linear(const C& coeff, std::size_t len) {
    PowerSeries<C> x(len);
    if (len > 1) x.c[1] = coeff;
    return exp0(x);
}

template <class C> PowerSeries<C> sinh(const PowerSeries<C>& a) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    PowerSeries<C> x = a;
    C a0 = a.length() ? a.c[0] : C(0);
    if (x.length()) x.c[0] = C(0);
    PowerSeries<C> ep = exp0(x);
    PowerSeries<C> em = exp0(-x);
    // sinh(a0 + x) = sinh(a0) cosh(x) + cosh(a0) sinh(x)
    C sh = sinh(a0), ch = cosh(a0);
    PowerSeries<C> coshx = (ep + em) * C(0.5);
    PowerSeries<C> sinhx = (ep - em) * C(0.5);
    return coshx * sh + sinhx * ch;
}

template <class C> PowerSeries<C> cosh(const PowerSeries<C>& a) {
    using std::cosh;
    using std::sinh;
    PowerSeries<C> x = a;
    C a0 = a.length() ? a.c[0] : C(0);
    if (x.length()) x.c[0] = C(0);
    PowerSeries<C> ep = exp0(x);
    PowerSeries<C> em = exp0(-x);
    C sh = sinh(a0), ch = cosh(a0);
    PowerSeries<C> coshx = (ep + em) * C(0.5);
    PowerSeries<C> sinhx = (ep - em) * C(0.5);
    return coshx * ch + sinhx * sh;
}

} // namespace tbethe
