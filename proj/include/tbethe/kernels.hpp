#pragma once

// Residuals, constraints and Jacobians of the twisted Bethe systems in the
// polynomial-cleared form, for XXX/XXZ at spin s. The cleared form is what
// makes singular candidates evaluable: the rational form hits 0/0 on the
// exact string. Everything here is generic over the value type V, which is
// either a complex scalar or a truncated power series in the twist angle.

#include <cmath>
#include <vector>

#include "tbethe/errors.hpp"
#include "tbethe/model.hpp"
#include "tbethe/precision.hpp"
#include "tbethe/series.hpp"

namespace tbethe {

/// Model constants lifted to the working complex type.
template <class C> struct ModelConsts {
    Family family = Family::XXX;
    int sites = 0;
    int magnons = 0;
    int twice_spin = 1;
    C shift{};     // i s   | s eta
    C shift1{};    // i(s+1)| (s+1) eta
    C scatter{};   // i     | eta
    C twist{};     // e^{-i beta}
    C twist_m{};   // e^{-i M beta}

    int string_length() const { return twice_spin + 1; }
};

template <class C> ModelConsts<C> make_consts(const ModelSpec& spec) {
    using R = real_of<C>;
    ModelConsts<C> mc;
    mc.family = spec.family;
    mc.sites = spec.sites;
    mc.magnons = spec.magnons;
    mc.twice_spin = spec.twice_spin;
    const R s = R(spec.twice_spin) / R(2);
    const R eta = R(spec.eta);
    if (spec.family == Family::XXX) {
        mc.shift = C(R(0), s);
        mc.shift1 = C(R(0), s + R(1));
        mc.scatter = C(R(0), R(1));
    } else {
        mc.shift = C(s * eta, R(0));
        mc.shift1 = C((s + R(1)) * eta, R(0));
        mc.scatter = C(eta, R(0));
    }
    const R beta = R(spec.beta);
    mc.twist = exp(C(R(0), -beta));
    mc.twist_m = exp(C(R(0), -R(spec.magnons) * beta));
    return mc;
}

// Building blocks. a/d are the one-particle factors, sp/sm the scattering
// factors; primes are their lambda-derivatives.
template <class C, class V> V kf_a(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return lam + mc.shift;
    return sinh(lam + mc.shift);
}
template <class C, class V> V kf_d(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return lam - mc.shift;
    return sinh(lam - mc.shift);
}
template <class C, class V> V kf_a1(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return lam + mc.shift1;
    return sinh(lam + mc.shift1);
}
template <class C, class V> V kf_d1(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return lam - mc.shift1;
    return sinh(lam - mc.shift1);
}
template <class C, class V> V kf_sp(const ModelConsts<C>& mc, const V& x) {
    if (mc.family == Family::XXX) return x + mc.scatter;
    return sinh(x + mc.scatter);
}
template <class C, class V> V kf_sm(const ModelConsts<C>& mc, const V& x) {
    if (mc.family == Family::XXX) return x - mc.scatter;
    return sinh(x - mc.scatter);
}
template <class C, class V> V kf_da(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return one_like(lam);
    return cosh(lam + mc.shift);
}
template <class C, class V> V kf_dd(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return one_like(lam);
    return cosh(lam - mc.shift);
}
template <class C, class V> V kf_da1(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return one_like(lam);
    return cosh(lam + mc.shift1);
}
template <class C, class V> V kf_dd1(const ModelConsts<C>& mc, const V& lam) {
    if (mc.family == Family::XXX) return one_like(lam);
    return cosh(lam - mc.shift1);
}
template <class C, class V> V kf_dsp(const ModelConsts<C>& mc, const V& x) {
    if (mc.family == Family::XXX) return one_like(x);
    return cosh(x + mc.scatter);
}
template <class C, class V> V kf_dsm(const ModelConsts<C>& mc, const V& x) {
    if (mc.family == Family::XXX) return one_like(x);
    return cosh(x - mc.scatter);
}

/// LHS_j and RHS_j of equation j of the cleared twisted Bethe system:
///   a(l_j)^N prod_{k!=j} sm(l_j-l_k)  =  tw * d(l_j)^N prod_{k!=j} sp(l_j-l_k)
template <class C, class V> struct ClearedParts {
    std::vector<V> lhs, rhs;
};

template <class C, class V>
ClearedParts<C, V> bethe_parts(const ModelConsts<C>& mc, const std::vector<V>& roots,
                               const V& twist) {
    const int M = int(roots.size());
    ClearedParts<C, V> out;
    out.lhs.reserve(M);
    out.rhs.reserve(M);
    for (int j = 0; j < M; ++j) {
        V lhs = powi(kf_a(mc, roots[j]), mc.sites);
        V rhs = twist * powi(kf_d(mc, roots[j]), mc.sites);
        for (int k = 0; k < M; ++k) {
            if (k == j) continue;
            lhs = lhs * kf_sm(mc, roots[j] - roots[k]);
            rhs = rhs * kf_sp(mc, roots[j] - roots[k]);
        }
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
    }
    return out;
}

template <class C, class V>
std::vector<V> bethe_residual_cleared(const ModelConsts<C>& mc, const std::vector<V>& roots,
                                      const V& twist) {
    auto parts = bethe_parts(mc, roots, twist);
    std::vector<V> res;
    res.reserve(parts.lhs.size());
    for (std::size_t j = 0; j < parts.lhs.size(); ++j) res.push_back(parts.lhs[j] - parts.rhs[j]);
    return res;
}

/// Jacobian dF_j/dl_m of the cleared system.
template <class C, class V>
std::vector<std::vector<V>> bethe_jacobian_cleared(const ModelConsts<C>& mc,
                                                   const std::vector<V>& roots, const V& twist) {
    const int M = int(roots.size());
    const int N = mc.sites;
    std::vector<std::vector<V>> jac(M);
    for (int j = 0; j < M; ++j) {
        const V aj = kf_a(mc, roots[j]);
        const V dj = kf_d(mc, roots[j]);
        const V aN1 = powi(aj, N - 1);
        const V dN1 = powi(dj, N - 1);
        const V aN = aN1 * aj;
        const V dN = dN1 * dj;
        std::vector<V> sm(M, one_like(aj)), sp(M, one_like(aj));
        V prod_sm = one_like(aj), prod_sp = one_like(aj);
        for (int k = 0; k < M; ++k) {
            if (k == j) continue;
            sm[k] = kf_sm(mc, roots[j] - roots[k]);
            sp[k] = kf_sp(mc, roots[j] - roots[k]);
            prod_sm = prod_sm * sm[k];
            prod_sp = prod_sp * sp[k];
        }
        jac[j].assign(M, V{});
        // diagonal
        V diag = C(double(N)) * aN1 * kf_da(mc, roots[j]) * prod_sm -
                 twist * C(double(N)) * dN1 * kf_dd(mc, roots[j]) * prod_sp;
        for (int m = 0; m < M; ++m) {
            if (m == j) continue;
            V prod_sm_m = aN, prod_sp_m = twist * dN;
            for (int k = 0; k < M; ++k) {
                if (k == j || k == m) continue;
                prod_sm_m = prod_sm_m * sm[k];
                prod_sp_m = prod_sp_m * sp[k];
            }
            const V dsm = kf_dsm(mc, roots[j] - roots[m]);
            const V dsp = kf_dsp(mc, roots[j] - roots[m]);
            diag = diag + prod_sm_m * dsm - prod_sp_m * dsp;
            // off-diagonal: only the two scattering factors depend on l_m
            jac[j][m] = -(prod_sm_m * dsm) + prod_sp_m * dsp;
        }
        jac[j][j] = diag;
    }
    return jac;
}

/// Reduced system obeyed by remainder roots of a singular solution:
///   a^{N-1}(l) d1(l) prod sm  =  tw * d^{N-1}(l) a1(l) prod sp
template <class C, class V>
ClearedParts<C, V> reduced_parts(const ModelConsts<C>& mc, const std::vector<V>& rem,
                                 const V& twist) {
    const int R = int(rem.size());
    const int N = mc.sites;
    ClearedParts<C, V> out;
    out.lhs.reserve(R);
    out.rhs.reserve(R);
    for (int j = 0; j < R; ++j) {
        V lhs = powi(kf_a(mc, rem[j]), N - 1) * kf_d1(mc, rem[j]);
        V rhs = twist * powi(kf_d(mc, rem[j]), N - 1) * kf_a1(mc, rem[j]);
        for (int k = 0; k < R; ++k) {
            if (k == j) continue;
            lhs = lhs * kf_sm(mc, rem[j] - rem[k]);
            rhs = rhs * kf_sp(mc, rem[j] - rem[k]);
        }
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
    }
    return out;
}

template <class C, class V>
std::vector<V> reduced_residual_cleared(const ModelConsts<C>& mc, const std::vector<V>& rem,
                                        const V& twist) {
    auto parts = reduced_parts(mc, rem, twist);
    std::vector<V> res;
    res.reserve(parts.lhs.size());
    for (std::size_t j = 0; j < parts.lhs.size(); ++j) res.push_back(parts.lhs[j] - parts.rhs[j]);
    return res;
}

template <class C, class V>
std::vector<std::vector<V>> reduced_jacobian_cleared(const ModelConsts<C>& mc,
                                                     const std::vector<V>& rem, const V& twist) {
    const int R = int(rem.size());
    const int N = mc.sites;
    std::vector<std::vector<V>> jac(R);
    for (int j = 0; j < R; ++j) {
        const V aj = kf_a(mc, rem[j]);
        const V dj = kf_d(mc, rem[j]);
        const V aN2 = powi(aj, N - 2);
        const V dN2 = powi(dj, N - 2);
        const V aN1 = aN2 * aj;
        const V dN1 = dN2 * dj;
        const V d1 = kf_d1(mc, rem[j]);
        const V a1 = kf_a1(mc, rem[j]);
        std::vector<V> sm(R, one_like(aj)), sp(R, one_like(aj));
        V prod_sm = one_like(aj), prod_sp = one_like(aj);
        for (int k = 0; k < R; ++k) {
            if (k == j) continue;
            sm[k] = kf_sm(mc, rem[j] - rem[k]);
            sp[k] = kf_sp(mc, rem[j] - rem[k]);
            prod_sm = prod_sm * sm[k];
            prod_sp = prod_sp * sp[k];
        }
        jac[j].assign(R, V{});
        V diag = (C(double(N - 1)) * aN2 * kf_da(mc, rem[j]) * d1 + aN1 * kf_dd1(mc, rem[j])) *
                     prod_sm -
                 twist * (C(double(N - 1)) * dN2 * kf_dd(mc, rem[j]) * a1 +
                          dN1 * kf_da1(mc, rem[j])) *
                     prod_sp;
        const V lhs_full = aN1 * d1;
        const V rhs_full = twist * dN1 * a1;
        for (int m = 0; m < R; ++m) {
            if (m == j) continue;
            V prod_sm_m = lhs_full, prod_sp_m = rhs_full;
            for (int k = 0; k < R; ++k) {
                if (k == j || k == m) continue;
                prod_sm_m = prod_sm_m * sm[k];
                prod_sp_m = prod_sp_m * sp[k];
            }
            const V dsm = kf_dsm(mc, rem[j] - rem[m]);
            const V dsp = kf_dsp(mc, rem[j] - rem[m]);
            diag = diag + prod_sm_m * dsm - prod_sp_m * dsp;
            jac[j][m] = -(prod_sm_m * dsm) + prod_sp_m * dsp;
        }
        jac[j][j] = diag;
    }
    return jac;
}

/// Cleared form of the product of all M Bethe equations:
///   G = prod_j a(l_j)^N - e^{-iM beta} prod_j d(l_j)^N
template <class C, class V>
V product_identity_cleared(const ModelConsts<C>& mc, const std::vector<V>& roots,
                           const V& twist_m) {
    V pa = one_like(twist_m), pd = one_like(twist_m);
    for (const auto& l : roots) {
        pa = pa * powi(kf_a(mc, l), mc.sites);
        pd = pd * powi(kf_d(mc, l), mc.sites);
    }
    return pa - twist_m * pd;
}

/// dG/dl_m of the cleared product identity.
template <class C, class V>
std::vector<V> product_identity_gradient(const ModelConsts<C>& mc, const std::vector<V>& roots,
                                         const V& twist_m) {
    const int M = int(roots.size());
    const int N = mc.sites;
    std::vector<V> aN(M, twist_m), dN(M, twist_m);
    for (int j = 0; j < M; ++j) {
        aN[j] = powi(kf_a(mc, roots[j]), N);
        dN[j] = powi(kf_d(mc, roots[j]), N);
    }
    std::vector<V> grad;
    grad.reserve(M);
    for (int m = 0; m < M; ++m) {
        V pa = C(double(N)) * powi(kf_a(mc, roots[m]), N - 1) * kf_da(mc, roots[m]);
        V pd = C(double(N)) * powi(kf_d(mc, roots[m]), N - 1) * kf_dd(mc, roots[m]);
        for (int j = 0; j < M; ++j) {
            if (j == m) continue;
            pa = pa * aN[j];
            pd = pd * dN[j];
        }
        grad.push_back(pa - twist_m * pd);
    }
    return grad;
}

// ---------------------------------------------------------------------------
// Scalar-only evaluations (ratio forms, constraints, energies).

/// [prod_j a(l_j)/d(l_j)]^N * e^{iM beta}; equals 1 on genuine solutions.
template <class C>
C product_identity_ratio(const ModelConsts<C>& mc, const std::vector<C>& roots,
                         double pole_tol = 1e-12) {
    C prod(1);
    for (const auto& l : roots) {
        const C num = kf_a(mc, l);
        const C den = kf_d(mc, l);
        if (abs_as_double(den) < pole_tol || abs_as_double(num) < pole_tol)
            throw PoleError("product identity evaluated at a pole (root at +-is)");
        prod *= num / den;
    }
    C val = powi(prod, mc.sites);
    // invert the twist: e^{+iM beta}
    return val / mc.twist_m;
}

/// LHS of the physicality constraint:
///   [(-1)^{2s} prod_remainder a(l)/d(l)]^N
template <class C>
C constraint_lhs(const ModelConsts<C>& mc, const std::vector<C>& remainder,
                 double pole_tol = 1e-8) {
    C prod(1);
    for (const auto& l : remainder) {
        const C num = kf_a(mc, l);
        const C den = kf_d(mc, l);
        if (abs_as_double(den) < pole_tol || abs_as_double(num) < pole_tol)
            throw PoleError("constraint evaluated with a remainder root at a pole (+-is)");
        prod *= num / den;
    }
    if (mc.twice_spin % 2 != 0) prod = -prod;
    return powi(prod, mc.sites);
}

} // namespace tbethe
