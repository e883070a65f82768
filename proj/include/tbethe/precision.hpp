#pragma once

#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>
#include <sstream>
#include <string>

#include "tbethe/errors.hpp"

namespace tbethe {

using cdouble = std::complex<double>;
using cmp50 = boost::multiprecision::cpp_complex_50;
using cmp100 = boost::multiprecision::cpp_complex_100;

template <class C> struct complex_traits;

template <> struct complex_traits<cdouble> {
    using real_type = double;
    static constexpr int digits10 = 16;
    static cdouble make(double re, double im) { return {re, im}; }
    static double to_double_re(const cdouble& z) { return z.real(); }
    static double to_double_im(const cdouble& z) { return z.imag(); }
    static real_type parse_real(const std::string& s) { return std::stod(s); }
};

template <> struct complex_traits<cmp50> {
    using real_type = cmp50::value_type;
    static constexpr int digits10 = 50;
    static cmp50 make(double re, double im) { return {re, im}; }
    static double to_double_re(const cmp50& z) { return static_cast<double>(z.real()); }
    static double to_double_im(const cmp50& z) { return static_cast<double>(z.imag()); }
    static real_type parse_real(const std::string& s) { return real_type(s); }
};

template <> struct complex_traits<cmp100> {
    using real_type = cmp100::value_type;
    static constexpr int digits10 = 100;
    static cmp100 make(double re, double im) { return {re, im}; }
    static double to_double_re(const cmp100& z) { return static_cast<double>(z.real()); }
    static double to_double_im(const cmp100& z) { return static_cast<double>(z.imag()); }
    static real_type parse_real(const std::string& s) { return real_type(s); }
};

template <class C> using real_of = typename complex_traits<C>::real_type;

template <class C> cdouble to_cdouble(const C& z) {
    return {complex_traits<C>::to_double_re(z), complex_traits<C>::to_double_im(z)};
}

template <class C> double abs_as_double(const C& z) { return std::abs(to_cdouble(z)); }
inline double abs_as_double(const cdouble& z) { return std::abs(z); }

/// Integer power by repeated multiplication; n >= 0.
template <class V> V powi(const V& base, int n) {
    if (n < 0) throw SpecError("powi: negative exponent");
    if (n == 0) {
        V result = base * 0.0 + 1.0; // identity of the value type
        return result;
    }
    V result = base;
    for (int k = 1; k < n; ++k) result = result * base;
    return result;
}

/// Decimal formatting that survives a parse round trip at the type's precision.
template <class C> std::string format_real(const real_of<C>& x, int digits) {
    std::ostringstream os;
    os.precision(digits + 2);
    os << x;
    return os.str();
}

template <> inline std::string format_real<cdouble>(const double& x, int digits) {
    std::ostringstream os;
    os.precision(digits > 0 ? digits : 17);
    os << x;
    return os.str();
}

/// A complex number carried as a pair of decimal strings, used wherever results
/// must keep more precision than double (series coefficients, limits).
struct ComplexDec {
    std::string re = "0";
    std::string im = "0";

    template <class C> static ComplexDec from(const C& z, int digits) {
        ComplexDec d;
        d.re = format_real<C>(z.real(), digits);
        d.im = format_real<C>(z.imag(), digits);
        return d;
    }
    static ComplexDec from(const cdouble& z, int digits = 17) {
        ComplexDec d;
        d.re = format_real<cdouble>(z.real(), digits);
        d.im = format_real<cdouble>(z.imag(), digits);
        return d;
    }
    template <class C> C to() const {
        return C(complex_traits<C>::parse_real(re), complex_traits<C>::parse_real(im));
    }
    cdouble to_cdouble() const { return {std::stod(re), std::stod(im)}; }
};

/// Runtime precision selector. 0 means machine double; otherwise a decimal
/// digit count, realized by the smallest available fixed-precision type.
struct Precision {
    int digits = 0;

    bool is_double() const { return digits == 0; }
    int effective_digits() const { return digits == 0 ? 16 : digits; }

    static Precision machine() { return Precision{0}; }
    static Precision decimal(int d) { return Precision{d}; }
};

/// Dispatch fn<C>(args...) on the precision setting. fn is a generic callable
/// invoked as fn.template operator()<C>().
template <class Fn> auto with_precision(const Precision& p, Fn&& fn) {
    if (p.digits == 0) return fn.template operator()<cdouble>();
    if (p.digits <= 50) return fn.template operator()<cmp50>();
    if (p.digits <= 100) return fn.template operator()<cmp100>();
    throw SpecError("precision above 100 decimal digits is not available");
}

} // namespace tbethe
