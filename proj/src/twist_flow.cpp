#include "tbethe/twist_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tbethe/kernels.hpp"
#include "tbethe/linalg.hpp"
#include "tbethe/newton.hpp"
#include "tbethe/series.hpp"

namespace tbethe {

namespace {

// The expansion solves the cleared equations F_j and the cleared product
// identity G order by order in beta. At the singular point the F-Jacobian is
// rank deficient along the common-shift direction of the string, so G supplies
// the missing equation at a shifted order: the string differences at order
// l+1 and the common shift at order l are determined together.

template <class C> struct ExpandWork {
    using R = real_of<C>;

    ModelSpec spec;
    ModelConsts<C> mc;
    int N = 0, M = 0, SL = 0, Rn = 0;
    std::size_t len = 0;
    std::vector<C> base;                 // lambda^(0), string first
    std::vector<std::vector<C>> coef;    // [M][order], index l-1 holds c^{(l)}
    PowerSeries<C> tw, twm;
    int digits = 40;

    std::vector<PowerSeries<C>> lambda_series(int orders_filled) const {
        std::vector<PowerSeries<C>> lam(M, PowerSeries<C>(len));
        for (int j = 0; j < M; ++j) {
            lam[j].c[0] = base[j];
            for (int l = 1; l <= orders_filled && l < int(len); ++l)
                lam[j].c[l] = coef[j][l - 1];
        }
        return lam;
    }
};

template <class C> std::vector<C> exact_string_values(const ModelSpec& spec) {
    using R = real_of<C>;
    std::vector<C> vals;
    const int sl = spec.string_length();
    const R eta = R(spec.eta);
    for (int k = 1; k <= sl; ++k) {
        const R level = R(spec.twice_spin + 2 - 2 * k) / R(2);
        if (spec.family == Family::XXX)
            vals.push_back(C(R(0), level));
        else
            vals.push_back(C(level * eta, R(0)));
    }
    return vals;
}

/// Refine remainder roots to working precision on the reduced system.
template <class C>
std::vector<C> refine_remainder(const ModelSpec& spec, const std::vector<cdouble>& rem,
                                int digits) {
    std::vector<C> out;
    out.reserve(rem.size());
    for (const auto& z : rem) out.push_back(complex_traits<C>::make(z.real(), z.imag()));
    if (out.empty()) return out;
    ModelSpec spec0 = spec;
    spec0.beta = 0.0;
    auto mc = make_consts<C>(spec0);
    auto sys = make_reduced_system(mc);
    NewtonOptions<C> nopts;
    nopts.max_iterations = 200;
    nopts.tolerance = std::pow(10.0, -(digits - 6));
    auto res = newton_iterate(sys, out, nopts);
    if (res.status != NewtonStatus::Converged)
        throw NumericError("could not refine the remainder roots to working precision");
    return res.point;
}

void precheck(const ModelSpec& spec, const SingularDecomposition& dec) {
    if (spec.sites < 3)
        throw SpecError("twist expansion requires N >= 3");
    if (int(dec.string_part.size()) != spec.string_length())
        throw SpecError("decomposition string length does not match the spin");
    if (spec.magnons != spec.string_length() + int(dec.remainder.size()))
        throw SpecError("decomposition size does not match the magnon number");
    ModelSpec spec0 = spec;
    spec0.beta = 0.0;
    if (!dec.remainder.roots.empty()) {
        const double rn = reduced_residual_norm(spec0, dec.remainder);
        if (rn > 1e-6)
            throw SpecError("remainder does not solve the reduced equations (residual " +
                            std::to_string(rn) + ")");
    }
    auto cons = physical_constraint(spec0, dec);
    if (!cons.physical)
        throw NumericError(
            "unphysical singular solution: the order-beta linear system is inconsistent "
            "(constraint LHS != 1)");
}

template <class C> ExpandWork<C> make_work(const ModelSpec& spec, const SingularDecomposition& dec,
                                           int order, int digits) {
    ExpandWork<C> w;
    w.spec = spec;
    ModelSpec specs = spec; // series are in beta; the stored beta is irrelevant here
    specs.beta = 0.0;
    w.mc = make_consts<C>(specs);
    w.N = spec.sites;
    w.M = spec.magnons;
    w.SL = spec.string_length();
    w.Rn = w.M - w.SL;
    w.digits = digits;
    w.len = std::size_t(order + spec.sites + 3);
    w.base = exact_string_values<C>(spec);
    auto rem = refine_remainder<C>(spec, dec.remainder.roots, digits);
    w.base.insert(w.base.end(), rem.begin(), rem.end());
    w.coef.assign(w.M, std::vector<C>(order + 2, C(0)));
    w.tw = exp_linear(C(real_of<C>(0), real_of<C>(-1)), w.len);
    w.twm = exp_linear(C(real_of<C>(0), real_of<C>(-spec.magnons)), w.len);
    return w;
}

/// Row scaling keeps the least-squares consistency residual meaningful.
template <class C>
void scale_rows(Mat<C>& a, std::vector<C>& b) {
    for (std::size_t r = 0; r < a.size(); ++r) {
        double m = abs_as_double(b[r]);
        for (const auto& x : a[r]) m = std::max(m, abs_as_double(x));
        if (m < 1e-300) continue;
        const C f = C(1.0 / m);
        for (auto& x : a[r]) x *= f;
        b[r] *= f;
    }
}

/// Stage A of round 1: common string shift t and remainder shifts w from the
/// product-identity order-(N+1) relation plus the order-1 remainder equations.
template <class C>
void solve_round1(ExpandWork<C>& w, double consist_tol) {
    using R = real_of<C>;
    const int SL = w.SL, Rn = w.Rn, N = w.N, M = w.M;
    auto lam = w.lambda_series(0);
    auto F = bethe_residual_cleared(w.mc, lam, w.tw);
    auto J = bethe_jacobian_cleared(w.mc, lam, w.tw);

    Mat<C> A(Rn + 1, std::vector<C>(Rn + 1, C(0)));
    std::vector<C> b(Rn + 1, C(0));

    // analytic product-identity relation at first order
    const R s = R(w.spec.twice_spin) / R(2);
    if (w.spec.family == Family::XXX) {
        R h(0);
        for (int m = 1; m <= w.spec.twice_spin; ++m) h += R(1) / R(m);
        A[0][Rn] = C(R(N) * h);
        for (int r = 0; r < Rn; ++r) {
            const C lr = w.base[SL + r];
            A[0][r] = C(R(N) * s) / (lr * lr + C(s * s));
        }
        b[0] = C(R(M) / R(2));
    } else {
        using std::cosh;
        using std::sinh;
        const R eta = R(w.spec.eta);
        R h(0);
        for (int m = 1; m <= w.spec.twice_spin; ++m) h += cosh(R(m) * eta) / sinh(R(m) * eta);
        A[0][Rn] = C(R(2 * N) * h);
        for (int r = 0; r < Rn; ++r) {
            const C lr = w.base[SL + r];
            A[0][r] = -C(R(N) * sinh(R(2) * s * eta)) /
                      (sinh(lr + w.mc.shift) * sinh(lr - w.mc.shift));
        }
        b[0] = C(R(0), -R(M));
    }

    for (int r = 0; r < Rn; ++r) {
        const int row = 1 + r, eq = SL + r;
        for (int m = 0; m < Rn; ++m) A[row][m] = J[eq][SL + m].c[0];
        C t_coeff(0);
        for (int k = 0; k < SL; ++k) t_coeff += J[eq][k].c[0];
        A[row][Rn] = t_coeff;
        b[row] = -F[eq].c[1];
    }

    std::vector<C> x;
    if (!lu_solve(A, b, x))
        throw NumericError("first-order system is singular (inconsistent input)");
    for (int k = 0; k < SL; ++k) w.coef[k][0] = x[Rn];
    for (int r = 0; r < Rn; ++r) w.coef[SL + r][0] = x[r];

    // the string equations at order 1 must now hold with the equal shifts
    lam = w.lambda_series(1);
    F = bethe_residual_cleared(w.mc, lam, w.tw);
    for (int k = 0; k < SL; ++k) {
        double scale = 1.0;
        for (int m = 0; m < M; ++m) scale = std::max(scale, abs_as_double(J[k][m].c[0]));
        if (abs_as_double(F[k].c[1]) / scale > consist_tol)
            throw NumericError("order-beta string equations inconsistent at round 1");
    }
}

/// Stage B of round 1: string differences at order 2 from the string
/// equations at order 2 (the common order-2 part stays open until round 2).
template <class C>
void solve_round1_differences(ExpandWork<C>& w, double consist_tol) {
    const int SL = w.SL;
    if (SL < 2) return;
    auto lam = w.lambda_series(1);
    auto F = bethe_residual_cleared(w.mc, lam, w.tw);
    auto J = bethe_jacobian_cleared(w.mc, lam, w.tw);

    Mat<C> A(SL, std::vector<C>(SL - 1, C(0)));
    std::vector<C> b(SL, C(0));
    for (int k = 0; k < SL; ++k) {
        for (int kp = 1; kp < SL; ++kp) A[k][kp - 1] = J[k][kp].c[0];
        b[k] = -F[k].c[2];
    }
    scale_rows(A, b);
    std::vector<C> d;
    const double resid = lsq_solve(A, b, d);
    if (resid > consist_tol * (1.0 + SL))
        throw NumericError("inconsistent linear system at order 2 of the expansion");
    for (int kp = 1; kp < SL; ++kp) w.coef[kp][1] = d[kp - 1];
}

/// Round l >= 2: jointly solve remainder shifts and the common string shift at
/// order l together with the string differences at order l+1.
template <class C>
void solve_round(ExpandWork<C>& w, int l, double consist_tol) {
    const int SL = w.SL, Rn = w.Rn, N = w.N;
    auto lam = w.lambda_series(l); // includes the partial (difference) data at order l
    auto F = bethe_residual_cleared(w.mc, lam, w.tw);
    auto J = bethe_jacobian_cleared(w.mc, lam, w.tw);
    auto G = product_identity_cleared(w.mc, lam, w.twm);
    auto dG = product_identity_gradient(w.mc, lam, w.twm);

    const int nunk = Rn + 1 + (SL - 1); // w, t, d^{(l+1)}
    const int neq = Rn + SL + 1;
    Mat<C> A(neq, std::vector<C>(nunk, C(0)));
    std::vector<C> b(neq, C(0));

    auto col_w = [&](int r) { return r; };
    const int col_t = Rn;
    auto col_d = [&](int kp) { return Rn + 1 + (kp - 1); };

    int row = 0;
    for (int r = 0; r < Rn; ++r, ++row) { // remainder equations at order l
        const int eq = SL + r;
        for (int m = 0; m < Rn; ++m) A[row][col_w(m)] = J[eq][SL + m].c[0];
        C t_coeff(0);
        for (int k = 0; k < SL; ++k) t_coeff += J[eq][k].c[0];
        A[row][col_t] = t_coeff;
        b[row] = -F[eq].c[l];
    }
    for (int k = 0; k < SL; ++k, ++row) { // string equations at order l+1
        for (int m = 0; m < Rn; ++m) A[row][col_w(m)] = J[k][SL + m].c[1];
        C t_coeff(0);
        for (int kp = 0; kp < SL; ++kp) t_coeff += J[k][kp].c[1];
        A[row][col_t] = t_coeff;
        for (int kp = 1; kp < SL; ++kp) A[row][col_d(kp)] = J[k][kp].c[0];
        b[row] = -F[k].c[l + 1];
    }
    { // product identity at order N+l
        for (int m = 0; m < Rn; ++m) A[row][col_w(m)] = dG[SL + m].c[N];
        C t_coeff(0);
        for (int k = 0; k < SL; ++k) t_coeff += dG[k].c[N];
        A[row][col_t] = t_coeff;
        for (int kp = 1; kp < SL; ++kp) A[row][col_d(kp)] = dG[kp].c[N - 1];
        b[row] = -G.c[N + l];
        ++row;
    }

    scale_rows(A, b);
    std::vector<C> x;
    const double resid = lsq_solve(A, b, x);
    if (resid > consist_tol * (1.0 + neq))
        throw NumericError("inconsistent linear system at order " + std::to_string(l) +
                           " of the expansion (unphysical input or insufficient precision)");

    for (int r = 0; r < Rn; ++r) w.coef[SL + r][l - 1] = x[col_w(r)];
    for (int k = 0; k < SL; ++k) w.coef[k][l - 1] += x[col_t]; // add t to the stored d^{(l)}
    for (int kp = 1; kp < SL; ++kp) w.coef[kp][l] = x[col_d(kp)];
}

template <class C>
TwistSeries finish_series(const ExpandWork<C>& w, const SingularDecomposition& dec, int order) {
    TwistSeries out;
    out.spec = w.spec;
    out.base = dec;
    out.order = order;
    out.digits = w.digits;
    for (int j = 0; j < w.M; ++j) {
        out.base_values.push_back(ComplexDec::from(w.base[j], w.digits));
        std::vector<ComplexDec> row;
        for (int l = 1; l <= order; ++l) row.push_back(ComplexDec::from(w.coef[j][l - 1], w.digits));
        out.coefficients.push_back(std::move(row));
    }
    return out;
}

template <class C>
TwistSeries expand_impl(const ModelSpec& spec, const SingularDecomposition& dec, int order,
                        int digits) {
    precheck(spec, dec);
    const double consist_tol = std::pow(10.0, -digits / 2.0);
    auto w = make_work<C>(spec, dec, order, digits);
    solve_round1(w, consist_tol);
    solve_round1_differences(w, consist_tol);
    for (int l = 2; l <= order; ++l) solve_round(w, l, consist_tol);
    return finish_series(w, dec, order);
}

template <class C>
std::vector<C> series_roots_at(const TwistSeries& series, const C& beta) {
    std::vector<C> roots;
    const int M = int(series.base_values.size());
    for (int j = 0; j < M; ++j) {
        C acc(0);
        for (int l = series.order; l >= 1; --l) {
            acc = (acc + series.coefficients[j][l - 1].template to<C>()) * beta;
        }
        roots.push_back(series.base_values[j].template to<C>() + acc);
    }
    return roots;
}

} // namespace

FirstOrderShift first_order_correction(const ModelSpec& spec, const SingularDecomposition& dec,
                                       const Precision& prec) {
    const Precision p = prec.is_double() ? Precision::decimal(40) : prec;
    return with_precision(p, [&]<class C>() {
        precheck(spec, dec);
        const double consist_tol = std::pow(10.0, -p.effective_digits() / 2.0);
        auto w = make_work<C>(spec, dec, 1, p.effective_digits());
        solve_round1(w, consist_tol);
        FirstOrderShift out;
        out.digits = p.effective_digits();
        out.common = ComplexDec::from(w.coef[0][0], out.digits);
        for (int r = 0; r < w.Rn; ++r)
            out.remainder.push_back(ComplexDec::from(w.coef[w.SL + r][0], out.digits));
        return out;
    });
}

TwistSeries expand_series(const ModelSpec& spec, const SingularDecomposition& dec, int order,
                          const Precision& prec) {
    if (order < 1) throw SpecError("expansion order must be >= 1");
    const Precision p = prec.is_double() ? Precision::decimal(40) : prec;
    TwistSeries out = with_precision(p, [&]<class C>() {
        return expand_impl<C>(spec, dec, order, p.effective_digits());
    });
    // O(beta^{L+1}) check at two twist values, skipped when the truncation
    // residual would drown in roundoff
    const double b1 = 1e-2, b2 = 5e-3;
    const double floor_ = std::pow(10.0, -(p.effective_digits() - 8));
    const double r1 = series_residual(out, b1);
    if (r1 > floor_ && std::pow(b1, out.order + 1) > floor_) {
        const double r2 = series_residual(out, b2);
        const double expected = std::pow(b2 / b1, out.order + 1);
        if (r2 > 16.0 * expected * r1 && r2 > floor_)
            throw NumericError("series residual does not decay at the expected order");
    }
    return out;
}

RootSet evaluate_series(const TwistSeries& series, double beta) {
    Precision p = Precision::decimal(series.digits);
    return with_precision(p, [&]<class C>() {
        auto roots = series_roots_at<C>(series, complex_traits<C>::make(beta, 0.0));
        RootSet rs;
        for (const auto& z : roots) rs.roots.push_back(to_cdouble(z));
        return canonicalize(rs);
    });
}

double series_residual(const TwistSeries& series, double beta) {
    Precision p = Precision::decimal(series.digits);
    return with_precision(p, [&]<class C>() {
        ModelSpec spec = series.spec;
        spec.beta = beta;
        auto mc = make_consts<C>(spec);
        auto roots = series_roots_at<C>(series, complex_traits<C>::make(beta, 0.0));
        auto parts = bethe_parts(mc, roots, mc.twist);
        std::vector<C> res(parts.lhs.size());
        for (std::size_t j = 0; j < res.size(); ++j) res[j] = parts.lhs[j] - parts.rhs[j];
        return relative_residual(res, parts.lhs, parts.rhs);
    });
}

std::vector<cdouble> product_identity_on_series(const TwistSeries& series,
                                                const std::vector<double>& betas) {
    Precision p = Precision::decimal(series.digits);
    return with_precision(p, [&]<class C>() {
        std::vector<cdouble> out;
        for (double b : betas) {
            ModelSpec spec = series.spec;
            spec.beta = b;
            auto mc = make_consts<C>(spec);
            auto roots = series_roots_at<C>(series, complex_traits<C>::make(b, 0.0));
            out.push_back(to_cdouble(product_identity_ratio(mc, roots)));
        }
        return out;
    });
}

std::vector<HomotopyPoint> homotopy_track(const ModelSpec& spec, const RootSet& start,
                                          double beta_end, int steps, const SolveOptions& opts,
                                          const Precision& prec) {
    if (steps < 1) throw SpecError("homotopy needs at least one step");
    const double beta_start = spec.beta;
    if (beta_start == 0.0 || beta_end == 0.0)
        throw SpecError("homotopy endpoints must have nonzero twist (the beta -> 0 limit "
                        "is taken through the series, not the tracker)");
    if ((beta_start > 0) != (beta_end > 0))
        throw SpecError("homotopy endpoints must share a sign");

    auto polish = [&](const RootSet& guess, double beta) -> NewtonOutcome {
        ModelSpec s = spec;
        s.beta = beta;
        return newton_solve(s, guess, opts, prec);
    };

    std::vector<HomotopyPoint> path;
    auto first = polish(start, beta_start);
    if (!first.ok()) throw NumericError("homotopy start does not solve the system at beta_start");
    path.push_back({beta_start, *first.roots});

    const double ratio = std::pow(beta_end / beta_start, 1.0 / steps);
    double from = beta_start;
    RootSet cur = *first.roots;
    for (int i = 1; i <= steps; ++i) {
        double target = (i == steps) ? beta_end : beta_start * std::pow(ratio, i);
        double attempt = target;
        int depth = 0;
        while (true) {
            auto res = polish(cur, attempt);
            if (res.ok()) {
                cur = *res.roots;
                from = attempt;
                path.push_back({attempt, cur});
                if (attempt == target) break;
                attempt = target;
            } else {
                if (++depth > 60)
                    throw NumericError("path-tracking failure: step bisection exhausted");
                attempt = std::copysign(std::sqrt(std::abs(from) * std::abs(attempt)), from);
            }
        }
    }
    return path;
}

std::vector<cdouble> epsilon_constraint_check(const ModelSpec& spec,
                                              const SingularDecomposition& dec,
                                              const std::vector<EpsilonReg>& regulators,
                                              const Precision& prec) {
    if (regulators.empty()) throw SpecError("need at least one epsilon");
    for (std::size_t i = 0; i < regulators.size(); ++i) {
        if (regulators[i].epsilon <= 0) throw SpecError("epsilon values must be positive");
        if (i + 1 < regulators.size() && regulators[i + 1].epsilon >= regulators[i].epsilon)
            throw SpecError("epsilon values must decrease toward zero");
    }
    const Precision p = prec.is_double() ? Precision::decimal(40) : prec;
    const double eps_floor =
        std::pow(10.0, -(p.effective_digits() - 8)) * std::max(1.0, std::abs(spec.eta));
    for (const auto& reg : regulators)
        if (reg.epsilon < eps_floor)
            throw NumericError("epsilon too small for the current precision (cancellation)");

    return with_precision(p, [&]<class C>() {
        using R = real_of<C>;
        ModelSpec spec0 = spec;
        spec0.beta = 0.0;
        auto mc = make_consts<C>(spec0);
        auto svals = exact_string_values<C>(spec0);
        std::vector<cdouble> out;
        for (const auto& reg : regulators) {
            std::vector<C> roots = svals;
            for (auto& z : roots) z += C(R(reg.epsilon), R(0));
            // counterterm on the top string root, when carried
            if (!roots.empty() && reg.c != cdouble(0)) {
                C ceps = complex_traits<C>::make(reg.c.real(), reg.c.imag());
                roots.front() += ceps * powi(C(R(reg.epsilon), R(0)), spec.sites);
            }
            for (const auto& z : dec.remainder.roots)
                roots.push_back(complex_traits<C>::make(z.real(), z.imag()));
            out.push_back(to_cdouble(product_identity_ratio(mc, roots)));
        }
        return out;
    });
}

std::vector<cdouble> epsilon_constraint_check(const ModelSpec& spec,
                                              const SingularDecomposition& dec,
                                              const std::vector<double>& epsilons,
                                              const Precision& prec) {
    std::vector<EpsilonReg> regs;
    regs.reserve(epsilons.size());
    for (double e : epsilons) regs.push_back(EpsilonReg{e, cdouble(0)});
    return epsilon_constraint_check(spec, dec, regs, prec);
}

cdouble extrapolate_to_zero(const std::vector<double>& xs, const std::vector<cdouble>& vals) {
    if (xs.size() != vals.size() || xs.empty())
        throw SpecError("extrapolation needs matching, nonempty samples");
    std::vector<cdouble> t = vals;
    const std::size_t n = xs.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i) {
            const double xi = xs[i], xk = xs[i + k];
            t[i] = (t[i + 1] * xi - t[i] * xk) / (xi - xk);
        }
    return t[0];
}

} // namespace tbethe
