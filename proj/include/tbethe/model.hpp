#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tbethe/errors.hpp"
#include "tbethe/precision.hpp"

namespace tbethe {

enum class Family { XXX, XXZ };

/// Spin chain + sector + twist parameters. Spin is stored doubled so that
/// half-integers stay exact.
struct ModelSpec {
    Family family = Family::XXX;
    int twice_spin = 1;   // 2s; s = 1/2 by default
    int sites = 4;        // N
    int magnons = 0;      // M
    double eta = 0.0;     // anisotropy, XXZ only
    double beta = 0.0;    // diagonal twist angle

    double spin() const { return 0.5 * twice_spin; }
    int string_length() const { return twice_spin + 1; } // 2s+1

    bool is_xxx_half() const { return family == Family::XXX && twice_spin == 1; }

    static ModelSpec xxx(int N, int M, double beta = 0.0, int twice_spin = 1) {
        ModelSpec s;
        s.family = Family::XXX;
        s.twice_spin = twice_spin;
        s.sites = N;
        s.magnons = M;
        s.beta = beta;
        s.validate();
        return s;
    }
    static ModelSpec xxz(int N, int M, double eta, double beta = 0.0, int twice_spin = 1) {
        ModelSpec s;
        s.family = Family::XXZ;
        s.twice_spin = twice_spin;
        s.sites = N;
        s.magnons = M;
        s.eta = eta;
        s.beta = beta;
        s.validate();
        return s;
    }

    void validate(int genericity_kmax = 24, double genericity_tol = 1e-9) const {
        if (sites < 1) throw SpecError("sites N must be >= 1");
        if (magnons < 0) throw SpecError("magnon number M must be >= 0");
        if (twice_spin < 1) throw SpecError("spin must be a positive half-integer");
        if (twice_spin == 1 && magnons > sites / 2)
            throw SpecError("M must satisfy M <= N/2 for spin 1/2");
        if (family == Family::XXZ) {
            // generic anisotropy: e^{k eta} must stay away from 1
            for (int k = 1; k <= genericity_kmax; ++k) {
                if (std::abs(std::exp(double(k) * eta) - 1.0) <= genericity_tol)
                    throw SpecError("XXZ anisotropy eta fails the genericity check (k=" +
                                    std::to_string(k) + ")");
            }
        }
    }
};

/// Canonical order: real part ascending, imaginary part descending on ties.
/// Puts +i/2 before -i/2 and keeps real roots sorted naturally.
inline bool root_less(const cdouble& a, const cdouble& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() > b.imag();
}

/// An ordered multiset of complex rapidities.
struct RootSet {
    std::vector<cdouble> roots;
    bool canonical_order = false;

    RootSet() = default;
    explicit RootSet(std::vector<cdouble> r, bool canonical = false)
        : roots(std::move(r)), canonical_order(canonical) {}

    std::size_t size() const { return roots.size(); }
    bool all_finite() const {
        for (const auto& z : roots)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

inline RootSet canonicalize(RootSet rs) {
    std::sort(rs.roots.begin(), rs.roots.end(), root_less);
    rs.canonical_order = true;
    return rs;
}

/// The exact string {is, i(s-1), ..., -is} (XXX) or {s eta, ..., -s eta} (XXZ)
/// plus the remaining roots. String values are generated exactly from the
/// model parameters, never copied from the numerical input.
struct SingularDecomposition {
    std::vector<cdouble> string_part;
    RootSet remainder;
};

/// Exact string values for the given model, top to bottom.
inline std::vector<cdouble> string_values(const ModelSpec& spec) {
    std::vector<cdouble> vals;
    const int len = spec.string_length();
    vals.reserve(len);
    for (int k = 1; k <= len; ++k) {
        // i(s+1-k) resp. (s+1-k) eta, with s+1-k running s, s-1, ..., -s
        const double level = 0.5 * (spec.twice_spin + 2 - 2 * k);
        if (spec.family == Family::XXX)
            vals.emplace_back(0.0, level);
        else
            vals.emplace_back(level * spec.eta, 0.0);
    }
    return vals;
}

enum class SolutionKind { Regular, SingularPhysical, SingularUnphysical, NotASolution };

inline const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::Regular: return "Regular";
        case SolutionKind::SingularPhysical: return "SingularPhysical";
        case SolutionKind::SingularUnphysical: return "SingularUnphysical";
        case SolutionKind::NotASolution: return "NotASolution";
    }
    return "?";
}

struct ClassificationResult {
    SolutionKind kind = SolutionKind::NotASolution;
    std::optional<cdouble> constraint_value; // LHS of the physicality constraint, singular only
    double residual_norm = 0.0;              // full residual (regular) or reduced residual (singular)
};

/// Default tolerances derived from the working precision.
struct Tolerances {
    double detection = 1e-8; // |root - string value| for singular detection
    double solution = 1e-10; // relative residual norm for "is a solution"

    static Tolerances for_precision(const Precision& p) {
        Tolerances t;
        if (!p.is_double()) {
            t.detection = std::pow(10.0, -p.effective_digits() / 2);
            t.solution = std::pow(10.0, -(p.effective_digits() - 10));
        }
        return t;
    }
};

/// Outcome of singular-string detection.
struct DetectionResult {
    enum class Kind { NoString, Full, Partial } kind = Kind::NoString;
    std::optional<SingularDecomposition> decomposition;
    std::string diagnostics; // set for Partial: which string values were missing

    bool is_singular_candidate() const { return kind == Kind::Full; }
};

} // namespace tbethe
