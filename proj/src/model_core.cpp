#include "tbethe/model_core.hpp"

#include <algorithm>
#include <sstream>

#include "tbethe/newton.hpp"

namespace tbethe {

namespace {

std::vector<cdouble> root_vec(const RootSet& rs) { return rs.roots; }

void check_dimensions(const ModelSpec& spec, const RootSet& roots) {
    if (int(roots.size()) != spec.magnons)
        throw SpecError("root count " + std::to_string(roots.size()) +
                        " does not match magnon number M=" + std::to_string(spec.magnons));
    if (!roots.all_finite()) throw SpecError("roots must be finite");
}

} // namespace

std::vector<cdouble> bethe_residual(const ModelSpec& spec, const RootSet& roots) {
    check_dimensions(spec, roots);
    spec.validate();
    auto mc = make_consts<cdouble>(spec);
    return bethe_residual_cleared(mc, root_vec(roots), mc.twist);
}

double bethe_residual_norm(const ModelSpec& spec, const RootSet& roots) {
    check_dimensions(spec, roots);
    auto mc = make_consts<cdouble>(spec);
    auto parts = bethe_parts(mc, root_vec(roots), mc.twist);
    std::vector<cdouble> res(parts.lhs.size());
    for (std::size_t j = 0; j < res.size(); ++j) res[j] = parts.lhs[j] - parts.rhs[j];
    return relative_residual(res, parts.lhs, parts.rhs);
}

std::vector<cdouble> reduced_residual(const ModelSpec& spec, const RootSet& remainder) {
    auto mc = make_consts<cdouble>(spec);
    // remainder roots must stay away from the poles at +-i(s+1) / +-(s+1)eta
    for (const auto& l : remainder.roots) {
        if (abs_as_double(kf_a1(mc, l)) < 1e-10 || abs_as_double(kf_d1(mc, l)) < 1e-10)
            throw PoleError("remainder root too close to a pole of the reduced equations");
    }
    return reduced_residual_cleared(mc, remainder.roots, mc.twist);
}

double reduced_residual_norm(const ModelSpec& spec, const RootSet& remainder) {
    auto mc = make_consts<cdouble>(spec);
    auto parts = reduced_parts(mc, remainder.roots, mc.twist);
    std::vector<cdouble> res(parts.lhs.size());
    for (std::size_t j = 0; j < res.size(); ++j) res[j] = parts.lhs[j] - parts.rhs[j];
    return relative_residual(res, parts.lhs, parts.rhs);
}

DetectionResult detect_singular(const ModelSpec& spec, const RootSet& roots,
                                double detection_tol) {
    DetectionResult out;
    if (int(roots.size()) != spec.magnons)
        throw SpecError("root count does not match magnon number");
    const auto svals = string_values(spec);
    if (int(roots.size()) < int(svals.size())) return out; // cannot contain the string

    std::vector<bool> used(roots.size(), false);
    std::vector<int> matched; // index into roots per string value, -1 if absent
    int found = 0;
    for (const auto& sv : svals) {
        int best = -1;
        double best_d = detection_tol;
        for (std::size_t r = 0; r < roots.size(); ++r) {
            if (used[r]) continue;
            const double d = std::abs(roots.roots[r] - sv);
            if (d < best_d) {
                best_d = d;
                best = int(r);
            }
        }
        matched.push_back(best);
        if (best >= 0) {
            used[best] = true;
            ++found;
        }
    }

    if (found == 0) return out;

    if (found < int(svals.size())) {
        out.kind = DetectionResult::Kind::Partial;
        std::ostringstream os;
        os << "partial string: missing";
        for (std::size_t k = 0; k < svals.size(); ++k)
            if (matched[k] < 0) os << " (" << svals[k].real() << "," << svals[k].imag() << ")";
        out.diagnostics = os.str();
        return out;
    }

    SingularDecomposition dec;
    dec.string_part = svals; // exact values, not the numerical matches
    for (std::size_t r = 0; r < roots.size(); ++r)
        if (!used[r]) dec.remainder.roots.push_back(roots.roots[r]);
    dec.remainder = canonicalize(dec.remainder);

    // remainder must be distinct and clear of the string values
    for (std::size_t i = 0; i < dec.remainder.roots.size(); ++i) {
        for (std::size_t j = i + 1; j < dec.remainder.roots.size(); ++j) {
            if (std::abs(dec.remainder.roots[i] - dec.remainder.roots[j]) < detection_tol) {
                out.kind = DetectionResult::Kind::Partial;
                out.diagnostics = "repeated remainder roots (out of scope)";
                return out;
            }
        }
        for (const auto& sv : svals) {
            if (std::abs(dec.remainder.roots[i] - sv) < detection_tol) {
                out.kind = DetectionResult::Kind::Partial;
                out.diagnostics = "remainder root coincides with a string value";
                return out;
            }
        }
    }

    out.kind = DetectionResult::Kind::Full;
    out.decomposition = std::move(dec);
    return out;
}

ConstraintResult physical_constraint(const ModelSpec& spec, const SingularDecomposition& dec,
                                     double tol) {
    auto mc = make_consts<cdouble>(spec);
    const cdouble lhs = constraint_lhs(mc, dec.remainder.roots);
    return ConstraintResult{lhs, std::abs(lhs - cdouble(1)) < tol};
}

cdouble product_identity(const ModelSpec& spec, const RootSet& roots) {
    auto mc = make_consts<cdouble>(spec);
    return product_identity_ratio(mc, roots.roots);
}

ClassificationResult classify(const ModelSpec& spec, const RootSet& roots,
                              const Tolerances& tol) {
    ClassificationResult out;
    auto det = detect_singular(spec, roots, tol.detection);
    if (det.is_singular_candidate()) {
        const auto& dec = *det.decomposition;
        out.residual_norm = reduced_residual_norm(spec, dec.remainder);
        if (out.residual_norm >= tol.solution) {
            out.kind = SolutionKind::NotASolution;
            return out;
        }
        auto cons = physical_constraint(spec, dec, tol.detection);
        out.constraint_value = cons.lhs;
        // Exact-string solutions of the twisted equations persist at beta != 0
        // but never correspond to eigenstates there; physical requires beta = 0.
        out.kind = (cons.physical && spec.beta == 0.0) ? SolutionKind::SingularPhysical
                                                       : SolutionKind::SingularUnphysical;
        return out;
    }
    out.residual_norm = bethe_residual_norm(spec, roots);
    out.kind = out.residual_norm < tol.solution ? SolutionKind::Regular
                                                : SolutionKind::NotASolution;
    return out;
}

double energy(const ModelSpec& spec, const RootSet& roots) {
    if (!spec.is_xxx_half())
        throw UnsupportedModelError("energy is defined only for the XXX spin-1/2 chain");
    double e = 0.0;
    for (const auto& l : roots.roots) {
        const cdouble den = l * l + cdouble(0.25);
        if (std::abs(den) < 1e-12)
            throw PoleError("energy pole: root at +-i/2; use the singular decomposition");
        e += -0.5 * (cdouble(1) / den).real();
    }
    return e;
}

double energy(const ModelSpec& spec, const SingularDecomposition& dec) {
    if (!spec.is_xxx_half())
        throw UnsupportedModelError(
            "singular energies are defined only for the XXX spin-1/2 chain");
    if (spec.beta != 0.0)
        throw SpecError("singular energies are defined at beta = 0");
    auto cons = physical_constraint(spec, dec);
    if (!cons.physical)
        throw NumericError("unphysical singular solution has no genuine eigenvalue");
    double e = -1.0; // regularized contribution of the +-i/2 pair
    for (const auto& l : dec.remainder.roots) {
        const cdouble den = l * l + cdouble(0.25);
        e += -0.5 * (cdouble(1) / den).real();
    }
    return e;
}

} // namespace tbethe
