#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tbethe/kernels.hpp"
#include "tbethe/linalg.hpp"

namespace tbethe {

enum class NewtonStatus { Converged, MaxIterations, SingularJacobian, Diverged };

inline const char* to_string(NewtonStatus s) {
    switch (s) {
        case NewtonStatus::Converged: return "converged";
        case NewtonStatus::MaxIterations: return "max-iterations";
        case NewtonStatus::SingularJacobian: return "singular-jacobian";
        case NewtonStatus::Diverged: return "diverged";
    }
    return "?";
}

template <class C> struct NewtonResult {
    NewtonStatus status = NewtonStatus::MaxIterations;
    std::vector<C> point;
    double residual = 0.0; // relative residual norm at the returned point
    int iterations = 0;
};

/// Relative residual norm: ||F|| / (sum |LHS_j| + |RHS_j| + 1). The
/// normalization keeps the tolerance meaningful across N, since the cleared
/// form grows like |lambda|^N.
template <class C>
double relative_residual(const std::vector<C>& res, const std::vector<C>& lhs,
                         const std::vector<C>& rhs) {
    double num = 0.0, scale = 1.0;
    for (const auto& r : res) num += abs_as_double(r) * abs_as_double(r);
    for (std::size_t j = 0; j < lhs.size(); ++j)
        scale += abs_as_double(lhs[j]) + abs_as_double(rhs[j]);
    return std::sqrt(num) / scale;
}

/// Damped Newton iteration on a square complex system. The callbacks supply
/// the residual (with scale parts) and the Jacobian at a point.
template <class C> struct NewtonSystem {
    std::function<std::vector<C>(const std::vector<C>&)> residual;
    std::function<double(const std::vector<C>&)> rel_norm; // relative residual norm
    std::function<Mat<C>(const std::vector<C>&)> jacobian;
};

template <class C> struct NewtonOptions {
    int max_iterations = 50;
    double tolerance = 1e-12;
    double divergence_radius = 1e8; // give up if the iterate leaves this ball
    int max_backtracks = 25;
    double initial_step = 1.0; // step scale the backtracking starts from
    // pivot threshold scaled to the working precision: deep descent near the
    // singular manifold passes through legitimately tiny pivots
    double pivot_tol = std::pow(10.0, -(complex_traits<C>::digits10 - 3));
};

template <class C>
NewtonResult<C> newton_iterate(const NewtonSystem<C>& sys, std::vector<C> x,
                               const NewtonOptions<C>& opts) {
    NewtonResult<C> out;
    double fnorm = sys.rel_norm(x);
    if (fnorm < opts.tolerance) {
        out.status = NewtonStatus::Converged;
        out.point = std::move(x);
        out.residual = fnorm;
        return out;
    }
    for (int it = 1; it <= opts.max_iterations; ++it) {
        auto res = sys.residual(x);
        auto jac = sys.jacobian(x);
        std::vector<C> rhs(res.size());
        for (std::size_t j = 0; j < res.size(); ++j) rhs[j] = -res[j];
        std::vector<C> step;
        if (!lu_solve(jac, rhs, step, opts.pivot_tol)) {
            out.status = NewtonStatus::SingularJacobian;
            out.point = std::move(x);
            out.residual = fnorm;
            out.iterations = it - 1;
            return out;
        }
        // backtracking line search: halve until the residual decreases
        double t = opts.initial_step;
        std::vector<C> trial(x.size());
        double trial_norm = fnorm;
        bool improved = false;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            for (std::size_t j = 0; j < x.size(); ++j) trial[j] = x[j] + C(t) * step[j];
            trial_norm = sys.rel_norm(trial);
            if (trial_norm < fnorm) {
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) {
            out.status = NewtonStatus::MaxIterations;
            out.point = std::move(x);
            out.residual = fnorm;
            out.iterations = it;
            return out;
        }
        x = trial;
        fnorm = trial_norm;
        double radius = 0.0;
        for (const auto& z : x) radius = std::max(radius, abs_as_double(z));
        if (radius > opts.divergence_radius) {
            out.status = NewtonStatus::Diverged;
            out.point = std::move(x);
            out.residual = fnorm;
            out.iterations = it;
            return out;
        }
        if (fnorm < opts.tolerance) {
            out.status = NewtonStatus::Converged;
            out.point = std::move(x);
            out.residual = fnorm;
            out.iterations = it;
            return out;
        }
    }
    out.status = NewtonStatus::MaxIterations;
    out.point = std::move(x);
    out.residual = fnorm;
    out.iterations = opts.max_iterations;
    return out;
}

/// Newton system for the full twisted Bethe equations.
template <class C> NewtonSystem<C> make_bethe_system(const ModelConsts<C>& mc) {
    NewtonSystem<C> sys;
    sys.residual = [mc](const std::vector<C>& x) {
        return bethe_residual_cleared(mc, x, mc.twist);
    };
    sys.rel_norm = [mc](const std::vector<C>& x) {
        auto parts = bethe_parts(mc, x, mc.twist);
        std::vector<C> res(parts.lhs.size());
        for (std::size_t j = 0; j < res.size(); ++j) res[j] = parts.lhs[j] - parts.rhs[j];
        return relative_residual(res, parts.lhs, parts.rhs);
    };
    sys.jacobian = [mc](const std::vector<C>& x) {
        return bethe_jacobian_cleared(mc, x, mc.twist);
    };
    return sys;
}

/// Newton system for the reduced equations over remainder roots.
template <class C> NewtonSystem<C> make_reduced_system(const ModelConsts<C>& mc) {
    NewtonSystem<C> sys;
    sys.residual = [mc](const std::vector<C>& x) {
        return reduced_residual_cleared(mc, x, mc.twist);
    };
    sys.rel_norm = [mc](const std::vector<C>& x) {
        auto parts = reduced_parts(mc, x, mc.twist);
        std::vector<C> res(parts.lhs.size());
        for (std::size_t j = 0; j < res.size(); ++j) res[j] = parts.lhs[j] - parts.rhs[j];
        return relative_residual(res, parts.lhs, parts.rhs);
    };
    sys.jacobian = [mc](const std::vector<C>& x) {
        return reduced_jacobian_cleared(mc, x, mc.twist);
    };
    return sys;
}

} // namespace tbethe
