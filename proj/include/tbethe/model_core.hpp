#pragma once

#include <optional>
#include <vector>

#include "tbethe/kernels.hpp"
#include "tbethe/model.hpp"

namespace tbethe {

/// Residuals LHS_j - RHS_j of the polynomial-cleared twisted Bethe equations.
std::vector<cdouble> bethe_residual(const ModelSpec& spec, const RootSet& roots);

/// Relative residual norm used by the "is a solution" predicate.
double bethe_residual_norm(const ModelSpec& spec, const RootSet& roots);

/// Residuals of the reduced system obeyed by remainder roots.
std::vector<cdouble> reduced_residual(const ModelSpec& spec, const RootSet& remainder);

double reduced_residual_norm(const ModelSpec& spec, const RootSet& remainder);

/// String detection within the given tolerance. Returns the decomposition for
/// a full exact string, a partial-string diagnostic, or no-string.
DetectionResult detect_singular(const ModelSpec& spec, const RootSet& roots,
                                double detection_tol = 1e-8);

/// LHS of the physicality constraint and the physical verdict.
struct ConstraintResult {
    cdouble lhs;
    bool physical;
};
ConstraintResult physical_constraint(const ModelSpec& spec, const SingularDecomposition& dec,
                                     double tol = 1e-8);

/// [prod_j a(l_j)/d(l_j)]^N e^{iM beta}; 1 on genuine solutions.
cdouble product_identity(const ModelSpec& spec, const RootSet& roots);

ClassificationResult classify(const ModelSpec& spec, const RootSet& roots,
                              const Tolerances& tol = Tolerances{});

/// Energy of a regular solution (XXX spin 1/2 only): -1/2 sum 1/(l^2+1/4).
double energy(const ModelSpec& spec, const RootSet& roots);

/// Energy of a physical singular solution: the regularized string pair
/// contributes -1, the remainder adds the regular sum.
double energy(const ModelSpec& spec, const SingularDecomposition& dec);

} // namespace tbethe
