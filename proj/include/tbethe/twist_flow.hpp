#pragma once

#include <vector>

#include "tbethe/model.hpp"
#include "tbethe/model_core.hpp"
#include "tbethe/root_solver.hpp"

namespace tbethe {

/// Per-root expansion of a singular solution in powers of the twist angle.
/// Row order: string roots top to bottom, then remainder roots in canonical
/// order. coefficients[j][l-1] is c_j^{(l)}, carried as decimal strings at the
/// precision the expansion was computed with.
struct TwistSeries {
    ModelSpec spec;
    SingularDecomposition base;
    int order = 0;
    int digits = 40;
    std::vector<ComplexDec> base_values;
    std::vector<std::vector<ComplexDec>> coefficients;

    cdouble coefficient(int root, int order_l) const {
        return coefficients.at(root).at(order_l - 1).to_cdouble();
    }
};

/// Common first-order shift of the string roots (the equal-shift condition)
/// plus the induced first-order shifts of the remainder roots.
struct FirstOrderShift {
    ComplexDec common;
    std::vector<ComplexDec> remainder;
    int digits = 40;

    cdouble common_value() const { return common.to_cdouble(); }
};

FirstOrderShift first_order_correction(const ModelSpec& spec, const SingularDecomposition& dec,
                                       const Precision& prec = Precision::decimal(40));

/// Order-by-order solve of the twisted system around a physical singular
/// solution. Throws NumericError when the linear system at some order is
/// inconsistent (unphysical input or insufficient precision).
TwistSeries expand_series(const ModelSpec& spec, const SingularDecomposition& dec, int order,
                          const Precision& prec = Precision::decimal(40));

/// Truncated series evaluated at the given twist angle (canonical order).
RootSet evaluate_series(const TwistSeries& series, double beta);

/// Relative residual of the evaluated series under the twisted equations,
/// computed at the series' own precision. Used by the O(beta^{L+1}) checks.
double series_residual(const TwistSeries& series, double beta);

/// Product identity evaluated along the series path, one value per beta.
std::vector<cdouble> product_identity_on_series(const TwistSeries& series,
                                                const std::vector<double>& betas);

struct HomotopyPoint {
    double beta;
    RootSet roots;
};

/// Track a solution from spec.beta to beta_end through intermediate twists,
/// Newton-correcting at each step, bisecting the schedule on failure. Tracking
/// toward small beta needs elevated precision: the Newton basin flattens like
/// beta^{N-1} near the singular manifold.
std::vector<HomotopyPoint> homotopy_track(const ModelSpec& spec, const RootSet& start,
                                          double beta_end, int steps,
                                          const SolveOptions& opts = SolveOptions{},
                                          const Precision& prec = Precision::machine());

/// The alternative regulator: the string shifted by a small epsilon, with the
/// constant of the order-epsilon^N counterterm carried but never solved for
/// (the constraint derivation does not need it).
struct EpsilonReg {
    double epsilon = 1e-3;
    cdouble c = 0.0;
};

/// Product identity at beta = 0 with the string roots shifted per the epsilon
/// regulator. One value per epsilon, decreasing toward zero.
std::vector<cdouble> epsilon_constraint_check(const ModelSpec& spec,
                                              const SingularDecomposition& dec,
                                              const std::vector<double>& epsilons,
                                              const Precision& prec = Precision::decimal(40));
std::vector<cdouble> epsilon_constraint_check(const ModelSpec& spec,
                                              const SingularDecomposition& dec,
                                              const std::vector<EpsilonReg>& regulators,
                                              const Precision& prec = Precision::decimal(40));

/// Polynomial (Neville) extrapolation of samples (x_i, v_i) to x = 0.
cdouble extrapolate_to_zero(const std::vector<double>& xs, const std::vector<cdouble>& vals);

} // namespace tbethe
