#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tbethe/model.hpp"
#include "tbethe/model_core.hpp"

namespace tbethe {

struct SolveOptions {
    int max_iterations = 80;
    double residual_tolerance = 1e-12;
    double step_damping = 1.0;      // initial step scale; backtracking halves from here
    int seed_count = 2000;          // random seeds per sweep
    double dedup_distance = 1e-6;
    std::uint64_t random_seed = 12345;
    int threads = 0;                // 0 = hardware concurrency

    // The cleared system is flat around a singular solution (residual ~
    // dist^N), so at beta = 0 any full-sweep hit carrying the whole string
    // within this radius is projected onto the exact string + reduced-system
    // remainder instead of being trusted verbatim. Desk-scale N <= 10 keeps
    // genuine regular strings well outside this ball.
    double singular_projection_radius = 0.1;

    // Admissibility: roots closer than this are treated as a repeated-root
    // configuration (out of scope) rather than a Bethe solution. Repeated
    // roots sit in flat basins too, so this is much coarser than the dedup
    // distance; genuine separations at desk scale stay above ~0.05.
    double distinctness_tolerance = 1e-3;

    void validate() const {
        if (max_iterations < 1) throw SpecError("max_iterations must be >= 1");
        if (residual_tolerance <= 0) throw SpecError("residual_tolerance must be > 0");
        if (step_damping <= 0 || step_damping > 1) throw SpecError("step_damping in (0,1]");
        if (dedup_distance <= 0) throw SpecError("dedup_distance must be > 0");
    }
};

struct SolveFailure {
    enum class Reason { MaxIterations, SingularJacobian, Diverged } reason;
    double residual;
    int iterations;
};

struct NewtonOutcome {
    std::optional<RootSet> roots; // canonicalized on success
    std::optional<SolveFailure> failure;
    bool ok() const { return roots.has_value(); }
};

/// Single-seed Newton on the full twisted system.
NewtonOutcome newton_solve(const ModelSpec& spec, const RootSet& seed, const SolveOptions& opts);

/// Newton at elevated precision (result rounded back to double). Needed near
/// the singular manifold, where the double-precision basin is flat.
NewtonOutcome newton_solve(const ModelSpec& spec, const RootSet& seed, const SolveOptions& opts,
                           const Precision& prec);

/// Single-seed Newton on the reduced system (remainder roots).
NewtonOutcome newton_solve_reduced(const ModelSpec& spec, const RootSet& seed,
                                   const SolveOptions& opts);

struct SolutionSet {
    std::vector<std::pair<RootSet, ClassificationResult>> solutions;
    ModelSpec spec;
    long seeds_tried = 0;
    long failures = 0;
};

/// Multi-seed sweep over the reduced system; returns singular candidates
/// (string + remainder) paired with their constraint verdicts.
SolutionSet solve_reduced(const ModelSpec& spec, const SolveOptions& opts);

/// Multi-seed Newton sweep over the full system plus the reduced sweep at
/// beta = 0; deduplicated, classified, canonically ordered. `warm_starts`
/// seeds continuation from nearby sectors.
SolutionSet enumerate_solutions(const ModelSpec& spec, const SolveOptions& opts,
                                const std::vector<RootSet>& warm_starts = {});

} // namespace tbethe
