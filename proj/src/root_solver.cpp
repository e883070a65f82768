#include "tbethe/root_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "tbethe/newton.hpp"
#include "tbethe/twist_flow.hpp"

namespace tbethe {

namespace {

NewtonOutcome run_newton(const NewtonSystem<cdouble>& sys, const RootSet& seed,
                         const SolveOptions& opts) {
    opts.validate();
    NewtonOptions<cdouble> nopts;
    nopts.max_iterations = opts.max_iterations;
    nopts.tolerance = opts.residual_tolerance;
    nopts.initial_step = opts.step_damping;
    auto res = newton_iterate(sys, seed.roots, nopts);
    NewtonOutcome out;
    if (res.status == NewtonStatus::Converged) {
        out.roots = canonicalize(RootSet(std::move(res.point)));
        return out;
    }
    SolveFailure f;
    f.residual = res.residual;
    f.iterations = res.iterations;
    switch (res.status) {
        case NewtonStatus::SingularJacobian: f.reason = SolveFailure::Reason::SingularJacobian; break;
        case NewtonStatus::Diverged: f.reason = SolveFailure::Reason::Diverged; break;
        default: f.reason = SolveFailure::Reason::MaxIterations; break;
    }
    out.failure = f;
    return out;
}

// Multiset comparison: canonical order is not stable for roots that agree up
// to solver noise (e.g. conjugate pairs), so dedup matches greedily instead.
bool same_solution(const RootSet& a, const RootSet& b, double dist) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool matched = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(a.roots[i] - b.roots[j]) <= dist) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

bool pairwise_distinct(const RootSet& rs, double dist) {
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j)
            if (std::abs(rs.roots[i] - rs.roots[j]) < dist) return false;
    return true;
}

bool bounded(const RootSet& rs, double radius = 1e6) {
    for (const auto& z : rs.roots)
        if (std::abs(z) > radius) return false;
    return rs.all_finite();
}

// Exact +-i spacing (resp. +-eta for XXZ) between two roots makes both sides
// of the cleared equations vanish identically: a 0/0 configuration of the
// rational system, not a Bethe solution. Genuine string solutions keep a
// finite deviation at desk scale, so a tight threshold separates them. The
// singular +-is string itself is detected and handled before this filter.
bool has_degenerate_spacing(const ModelConsts<cdouble>& mc, const RootSet& rs,
                            double tol = 1e-8) {
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < rs.size(); ++j) {
            if (i == j) continue;
            const cdouble d = rs.roots[i] - rs.roots[j];
            if (std::abs(kf_sm(mc, d)) < tol || std::abs(kf_sp(mc, d)) < tol) return true;
        }
    return false;
}


/// Full-system polish at 50 digits reporting how close the result sits to the
/// degenerate sets, measured in working precision before rounding: genuine
/// solutions keep finite string deviations and spacing defects (down to
/// ~1e-16 at desk scale), while 0/0 configurations and exact singular
/// candidates pin them to the working epsilon.
struct MpPolish {
    bool ok = false;
    RootSet roots;
    double spacing_defect = 1e300;  // min over pairs of |sm|, |sp|
    double string_distance = 1e300; // max over string values of nearest-root distance
};

MpPolish mp_polish_full(const ModelSpec& spec, const RootSet& seed, const SolveOptions& opts) {
    using C = cmp50;
    MpPolish out;
    auto mc = make_consts<C>(spec);
    auto sys = make_bethe_system(mc);
    std::vector<C> x;
    for (const auto& z : seed.roots) x.push_back(complex_traits<C>::make(z.real(), z.imag()));
    NewtonOptions<C> nopts;
    nopts.max_iterations = opts.max_iterations;
    nopts.tolerance = opts.residual_tolerance;
    auto res = newton_iterate(sys, x, nopts);
    if (res.status != NewtonStatus::Converged) return out;
    out.ok = true;
    for (const auto& z : res.point) out.roots.roots.push_back(to_cdouble(z));
    out.roots = canonicalize(out.roots);
    for (std::size_t i = 0; i < res.point.size(); ++i)
        for (std::size_t j = 0; j < res.point.size(); ++j) {
            if (i == j) continue;
            const C d = res.point[i] - res.point[j];
            out.spacing_defect = std::min(out.spacing_defect, abs_as_double(kf_sm(mc, d)));
            out.spacing_defect = std::min(out.spacing_defect, abs_as_double(kf_sp(mc, d)));
        }
    ModelSpec spec0 = spec;
    spec0.beta = 0.0;
    double worst = 0.0;
    for (const auto& sv : string_values(spec0)) {
        const C svc = complex_traits<C>::make(sv.real(), sv.imag());
        double best = 1e300;
        for (const auto& z : res.point) best = std::min(best, abs_as_double(z - svc));
        worst = std::max(worst, best);
    }
    out.string_distance = worst;
    return out;
}

/// Deterministic seed families for the full system: real grids, +-i/2-shifted
/// pairs (string hypothesis), and analytic one-magnon roots.
std::vector<RootSet> deterministic_seeds(const ModelSpec& spec) {
    const int M = spec.magnons;
    const int N = spec.sites;
    std::vector<RootSet> seeds;
    if (M == 0) {
        seeds.emplace_back();
        return seeds;
    }

    std::vector<double> grid;
    for (int k = 1; k < N; ++k) {
        const double p = std::numbers::pi * k / N;
        grid.push_back(0.5 / std::tan(p / 2.0) * 0.5); // compressed cot grid
        grid.push_back(0.5 / std::tan(p));
    }
    for (int g = -6; g <= 6; ++g) grid.push_back(0.35 * g + 0.11);
    grid.push_back(0.0);
    grid.push_back(0.05);
    grid.push_back(-0.05);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               grid.end());

    if (M == 1) {
        for (double x : grid) seeds.push_back(RootSet({cdouble(x, 0)}));
        return seeds;
    }

    // real M-tuples from the grid (strided to keep the count sane)
    const int G = int(grid.size());
    std::vector<int> idx(M);
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (int(seeds.size()) > 4000) return;
        if (pos == M) {
            std::vector<cdouble> r;
            for (int j = 0; j < M; ++j) r.emplace_back(grid[idx[j]], 0.0);
            seeds.emplace_back(std::move(r));
            return;
        }
        for (int g = from; g < G; ++g) {
            idx[pos] = g;
            rec(pos + 1, g + 1);
        }
    };
    rec(0, 0);

    // 2-string seeds: one pair at x +- i/2 (+ small offset), rest real
    const double off = 0.05;
    for (double x : grid) {
        if (M == 2) {
            seeds.push_back(RootSet({cdouble(x, 0.5 - off), cdouble(x, -0.5 + off)}));
            continue;
        }
        for (int a = 0; a < G; ++a) {
            std::vector<cdouble> r = {cdouble(x, 0.5 - off), cdouble(x, -0.5 + off)};
            // fill the remaining M-2 slots from the grid, strided
            int filled = 0;
            for (int g = a; g < G && filled < M - 2; g += 2, ++filled) r.emplace_back(grid[g], 0.0);
            if (int(r.size()) == M) seeds.emplace_back(std::move(r));
            if (M == 3) continue;
        }
    }
    // double 2-string seeds for M >= 4
    if (M >= 4) {
        for (double x : grid)
            for (double y : grid) {
                if (std::abs(x - y) < 1e-6) continue;
                std::vector<cdouble> r = {cdouble(x, 0.5 - off), cdouble(x, -0.5 + off),
                                          cdouble(y, 0.5 + off), cdouble(y, -0.5 - off)};
                int filled = 0;
                for (int g = 0; g < G && filled < M - 4; g += 3, ++filled)
                    r.emplace_back(grid[g], 0.0);
                if (int(r.size()) == M) seeds.emplace_back(std::move(r));
            }
    }
    // wide 3-strings (x, x +- iy) with y around 1, rest real
    if (M >= 3) {
        for (double x : grid)
            for (double y : {0.6, 0.85, 1.0, 1.15, 1.4}) {
                for (int a = 0; a < std::max(1, G / 2); ++a) {
                    std::vector<cdouble> r = {cdouble(x, 0.0), cdouble(x, y), cdouble(x, -y)};
                    int filled = 0;
                    for (int g = a; g < G && filled < M - 3; g += 2, ++filled)
                        r.emplace_back(grid[g], 0.0);
                    if (int(r.size()) == M) seeds.emplace_back(std::move(r));
                    if (M == 3) break;
                }
            }
    }
    // 5-strings (x, x +- iy1, x +- iy2), rest real
    if (M >= 5) {
        for (double x : grid)
            for (double y2 : {1.8, 2.05, 2.3}) {
                std::vector<cdouble> r = {cdouble(x, 0.0),  cdouble(x, 0.95),
                                          cdouble(x, -0.95), cdouble(x, y2),
                                          cdouble(x, -y2)};
                int filled = 0;
                for (int g = 0; g < G && filled < M - 5; g += 3, ++filled)
                    r.emplace_back(grid[g], 0.0);
                if (int(r.size()) == M) seeds.emplace_back(std::move(r));
            }
    }
    // 4-strings (x +- iy1, x +- iy2), rest real
    if (M >= 4) {
        for (double x : grid)
            for (double y2 : {1.3, 1.5, 1.8}) {
                std::vector<cdouble> r = {cdouble(x, 0.45), cdouble(x, -0.45), cdouble(x, y2),
                                          cdouble(x, -y2)};
                int filled = 0;
                for (int g = 0; g < G && filled < M - 4; g += 3, ++filled)
                    r.emplace_back(grid[g], 0.0);
                if (int(r.size()) == M) seeds.emplace_back(std::move(r));
            }
    }
    return seeds;
}

std::vector<RootSet> random_seeds(int count, int dim, std::uint64_t rng_seed, double radius = 3.0) {
    // mt19937_64 output mapped to doubles by hand: uniform_real_distribution
    // is implementation-defined, and seed streams must be reproducible
    std::mt19937_64 rng(rng_seed);
    auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    std::vector<RootSet> seeds;
    seeds.reserve(count);
    for (int s = 0; s < count; ++s) {
        std::vector<cdouble> r;
        r.reserve(dim);
        for (int j = 0; j < dim; ++j) {
            double re, im;
            do {
                re = uniform();
                im = uniform();
            } while (re * re + im * im > 1.0);
            r.emplace_back(radius * re, radius * im);
        }
        seeds.emplace_back(std::move(r));
    }
    return seeds;
}

struct SweepResult {
    std::vector<RootSet> found;
    long tried = 0;
    long failed = 0;
};

/// Newton over every seed, in parallel chunks, merged deterministically.
SweepResult sweep(const NewtonSystem<cdouble>& sys, const std::vector<RootSet>& seeds,
                  const SolveOptions& opts) {
    SweepResult out;
    out.tried = long(seeds.size());
    const int hw = int(std::thread::hardware_concurrency());
    const int nthreads = std::max(1, opts.threads > 0 ? opts.threads : hw);
    std::vector<std::vector<RootSet>> chunk_found(nthreads);
    std::vector<long> chunk_failed(nthreads, 0);

    auto work = [&](int t) {
        NewtonOptions<cdouble> nopts;
        nopts.max_iterations = opts.max_iterations;
        nopts.tolerance = opts.residual_tolerance;
        nopts.initial_step = opts.step_damping;
        for (std::size_t s = t; s < seeds.size(); s += nthreads) {
            auto res = newton_iterate(sys, seeds[s].roots, nopts);
            if (res.status != NewtonStatus::Converged) {
                ++chunk_failed[t];
                continue;
            }
            RootSet rs = canonicalize(RootSet(std::move(res.point)));
            if (!bounded(rs) || !pairwise_distinct(rs, opts.distinctness_tolerance)) continue;
            bool dup = false;
            for (const auto& got : chunk_found[t])
                if (same_solution(got, rs, opts.dedup_distance)) {
                    dup = true;
                    break;
                }
            if (!dup) chunk_found[t].push_back(std::move(rs));
        }
    };
    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    // deterministic merge: canonical order, dedup across chunks
    std::vector<RootSet> merged;
    for (auto& ch : chunk_found)
        for (auto& rs : ch) merged.push_back(std::move(rs));
    std::sort(merged.begin(), merged.end(), [](const RootSet& a, const RootSet& b) {
        for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) {
            if (a.roots[j] != b.roots[j]) return root_less(a.roots[j], b.roots[j]);
        }
        return a.size() < b.size();
    });
    for (auto& rs : merged) {
        bool dup = false;
        for (const auto& got : out.found)
            if (same_solution(got, rs, opts.dedup_distance)) {
                dup = true;
                break;
            }
        if (!dup) out.found.push_back(std::move(rs));
    }
    for (long f : chunk_failed) out.failed += f;
    return out;
}

} // namespace

NewtonOutcome newton_solve(const ModelSpec& spec, const RootSet& seed, const SolveOptions& opts) {
    if (int(seed.size()) != spec.magnons)
        throw SpecError("seed length must equal the magnon number");
    auto mc = make_consts<cdouble>(spec);
    auto out = run_newton(make_bethe_system(mc), seed, opts);
    if (!out.ok()) return out;

    // Near the singular manifold the cleared system is degenerate (residual ~
    // dist^N), so a double-precision "converged" point may sit anywhere in a
    // flat basin. Re-resolve such hits: elevated precision separates genuine
    // near-string solutions; at nonzero twist the physical deformation of a
    // singular solution is reconstructed through its beta-series.
    const bool stringy =
        detect_singular(spec, *out.roots, 0.05).is_singular_candidate();
    if (!stringy && !has_degenerate_spacing(mc, *out.roots, 1e-7)) return out;

    SolveOptions popts = opts;
    popts.residual_tolerance = 1e-30;
    popts.max_iterations = 400;
    auto polished = mp_polish_full(spec, *out.roots, popts);
    if (polished.ok && polished.spacing_defect > 1e-28 &&
        (spec.beta != 0.0 || polished.string_distance > 1e-28))
        return NewtonOutcome{polished.roots, std::nullopt}; // genuine, near the degenerate set

    if (stringy && spec.beta != 0.0) {
        // rebuild the deformed solution from the singular candidate the hit
        // collapsed onto
        auto det = detect_singular(spec, *out.roots, 0.05);
        ModelSpec spec0 = spec;
        spec0.beta = 0.0;
        try {
            SingularDecomposition dec = *det.decomposition;
            if (!dec.remainder.roots.empty()) {
                auto rp = newton_solve_reduced(spec0, dec.remainder, opts);
                if (!rp.ok()) throw NumericError("remainder polish failed");
                dec.remainder = *rp.roots;
            }
            auto series = expand_series(spec0, dec, spec.sites, Precision::decimal(40));
            auto res = newton_solve(spec, evaluate_series(series, spec.beta), popts,
                                    Precision::decimal(50));
            if (res.ok()) return res;
        } catch (const std::exception&) {
            // fall through: the candidate is unphysical or out of reach
        }
    }

    if (stringy && spec.beta == 0.0) {
        // project onto the exact singular candidate when it verifies
        auto det = detect_singular(spec, *out.roots, 0.05);
        SingularDecomposition dec = *det.decomposition;
        RootSet full;
        if (!dec.remainder.roots.empty()) {
            auto rp = newton_solve_reduced(spec, dec.remainder, opts);
            if (rp.ok()) dec.remainder = *rp.roots;
        }
        full.roots = dec.string_part;
        full.roots.insert(full.roots.end(), dec.remainder.roots.begin(),
                          dec.remainder.roots.end());
        full = canonicalize(full);
        if (reduced_residual_norm(spec, dec.remainder) < opts.residual_tolerance * 100)
            return NewtonOutcome{full, std::nullopt};
    }

    NewtonOutcome fail;
    fail.failure = SolveFailure{SolveFailure::Reason::SingularJacobian, out.failure
                                                                            ? out.failure->residual
                                                                            : 0.0,
                                0};
    return fail;
}

NewtonOutcome newton_solve(const ModelSpec& spec, const RootSet& seed, const SolveOptions& opts,
                           const Precision& prec) {
    if (prec.is_double()) return newton_solve(spec, seed, opts);
    if (int(seed.size()) != spec.magnons)
        throw SpecError("seed length must equal the magnon number");
    opts.validate();
    return with_precision(prec, [&]<class C>() {
        auto mc = make_consts<C>(spec);
        auto sys = make_bethe_system(mc);
        std::vector<C> x;
        for (const auto& z : seed.roots) x.push_back(complex_traits<C>::make(z.real(), z.imag()));
        NewtonOptions<C> nopts;
        nopts.max_iterations = opts.max_iterations;
        nopts.tolerance = opts.residual_tolerance;
        nopts.initial_step = opts.step_damping;
        auto res = newton_iterate(sys, x, nopts);
        NewtonOutcome out;
        if (res.status == NewtonStatus::Converged) {
            RootSet rs;
            for (const auto& z : res.point) rs.roots.push_back(to_cdouble(z));
            out.roots = canonicalize(rs);
            return out;
        }
        SolveFailure f;
        f.residual = res.residual;
        f.iterations = res.iterations;
        f.reason = res.status == NewtonStatus::SingularJacobian
                       ? SolveFailure::Reason::SingularJacobian
                       : (res.status == NewtonStatus::Diverged ? SolveFailure::Reason::Diverged
                                                               : SolveFailure::Reason::MaxIterations);
        out.failure = f;
        return out;
    });
}

NewtonOutcome newton_solve_reduced(const ModelSpec& spec, const RootSet& seed,
                                   const SolveOptions& opts) {
    auto mc = make_consts<cdouble>(spec);
    return run_newton(make_reduced_system(mc), seed, opts);
}

namespace {

NewtonOutcome newton_solve_reduced_mp(const ModelSpec& spec, const RootSet& seed,
                                      const SolveOptions& opts, const Precision& prec) {
    return with_precision(prec, [&]<class C>() {
        auto mc = make_consts<C>(spec);
        auto sys = make_reduced_system(mc);
        std::vector<C> x;
        for (const auto& z : seed.roots) x.push_back(complex_traits<C>::make(z.real(), z.imag()));
        NewtonOptions<C> nopts;
        nopts.max_iterations = opts.max_iterations;
        nopts.tolerance = opts.residual_tolerance;
        nopts.initial_step = opts.step_damping;
        auto res = newton_iterate(sys, x, nopts);
        NewtonOutcome out;
        if (res.status == NewtonStatus::Converged) {
            RootSet rs;
            for (const auto& z : res.point) rs.roots.push_back(to_cdouble(z));
            out.roots = canonicalize(rs);
        } else {
            SolveFailure f;
            f.residual = res.residual;
            f.iterations = res.iterations;
            f.reason = SolveFailure::Reason::MaxIterations;
            out.failure = f;
        }
        return out;
    });
}

} // namespace

SolutionSet solve_reduced(const ModelSpec& spec, const SolveOptions& opts) {
    opts.validate();
    SolutionSet out;
    out.spec = spec;
    const int R = spec.magnons - spec.string_length();
    if (R < 0) return out; // no singular decomposition can exist

    const auto svals = string_values(spec);
    auto assemble = [&](const RootSet& remainder) {
        std::vector<cdouble> full = svals;
        full.insert(full.end(), remainder.roots.begin(), remainder.roots.end());
        return canonicalize(RootSet(std::move(full)));
    };

    Tolerances tol;
    tol.solution = std::max(opts.residual_tolerance * 10, 1e-11);

    if (R == 0) {
        RootSet empty;
        RootSet full = assemble(empty);
        out.solutions.emplace_back(full, classify(spec, full, tol));
        out.seeds_tried = 0;
        return out;
    }

    auto mc = make_consts<cdouble>(spec);
    auto sys = make_reduced_system(mc);
    std::vector<RootSet> seeds;
    {
        ModelSpec red = spec;
        red.magnons = R; // seed shapes for an R-dimensional sweep
        for (auto& s : deterministic_seeds(red)) seeds.push_back(std::move(s));
        for (auto& s : random_seeds(opts.seed_count, R, opts.random_seed ^ 0x9e3779b9u))
            seeds.push_back(std::move(s));
    }
    auto res = sweep(sys, seeds, opts);
    out.seeds_tried = res.tried;
    out.failures = res.failed;
    for (RootSet rem : res.found) {
        // remainders near an exact +-i spacing get the multiprecision
        // treatment; fakes stall or land on the degenerate set
        if (has_degenerate_spacing(mc, rem, 1e-7)) {
            SolveOptions popts = opts;
            popts.residual_tolerance = 1e-32;
            popts.max_iterations = 250;
            auto pol = newton_solve_reduced_mp(spec, rem, popts, Precision::decimal(50));
            if (!pol.ok()) continue;
            rem = *pol.roots;
            if (has_degenerate_spacing(mc, rem, 1e-13)) continue;
        }
        // admissibility: remainder clear of the string values, pairwise apart
        bool ok = pairwise_distinct(rem, opts.distinctness_tolerance);
        for (const auto& r : rem.roots)
            for (const auto& sv : svals)
                if (std::abs(r - sv) < opts.distinctness_tolerance) ok = false;
        if (!ok) continue;
        try {
            RootSet full = assemble(rem);
            auto cls = classify(spec, full, tol);
            if (cls.kind == SolutionKind::NotASolution) continue;
            bool dup = false;
            for (const auto& [got, gcls] : out.solutions)
                if (same_solution(got, full, opts.dedup_distance)) {
                    dup = true;
                    break;
                }
            if (!dup) out.solutions.emplace_back(std::move(full), cls);
        } catch (const PoleError&) {
            continue;
        }
    }
    return out;
}

SolutionSet enumerate_solutions(const ModelSpec& spec, const SolveOptions& opts,
                                const std::vector<RootSet>& warm_starts) {
    opts.validate();
    SolutionSet out;
    out.spec = spec;
    const int M = spec.magnons;

    Tolerances tol;
    tol.solution = std::max(opts.residual_tolerance * 10, 1e-11);

    if (M == 0) {
        RootSet empty;
        ClassificationResult cls;
        cls.kind = SolutionKind::Regular;
        cls.residual_norm = 0.0;
        out.solutions.emplace_back(empty, cls);
        return out;
    }

    auto mc = make_consts<cdouble>(spec);
    auto sys = make_bethe_system(mc);

    // singular candidates first: they also seed the hunt for the regular
    // solutions that sit exponentially close to unphysical candidates
    SolutionSet singular;
    singular.spec = spec;
    if (spec.beta == 0.0 && M >= spec.string_length()) singular = solve_reduced(spec, opts);

    std::vector<RootSet> seeds = deterministic_seeds(spec);
    for (const auto& w : warm_starts)
        if (int(w.size()) == M) seeds.push_back(w);
    if (spec.is_xxx_half()) {
        for (const auto& [cand, ccls] : singular.solutions) {
            std::vector<cdouble> rem;
            for (const auto& z : cand.roots)
                if (std::abs(z - cdouble(0, 0.5)) > 1e-9 && std::abs(z - cdouble(0, -0.5)) > 1e-9)
                    rem.push_back(z);
            std::vector<cdouble> centers = {cdouble(0, 0)};
            centers.insert(centers.end(), rem.begin(), rem.end());
            for (const auto& c0 : centers)
                for (double dx : {-0.08, -0.03, 0.0, 0.03, 0.08})
                    for (double dy : {0.002, 0.01, 0.04}) {
                        std::vector<cdouble> r = {c0 + cdouble(dx, 0.5 + dy),
                                                  c0 + cdouble(dx, -0.5 - dy)};
                        r.insert(r.end(), rem.begin(), rem.end());
                        if (int(r.size()) == M) seeds.emplace_back(std::move(r));
                    }
        }
    }
    for (auto& s : random_seeds(opts.seed_count, M, opts.random_seed)) seeds.push_back(std::move(s));

    auto res = sweep(sys, seeds, opts);
    out.seeds_tried = res.tried + singular.seeds_tried;
    out.failures = res.failed + singular.failures;

    // Hits near the singular manifold or near an exact +-i spacing sit in
    // flat basins of the cleared system where the double-precision residual
    // says nothing. Polishing at 50 digits separates them: fakes stall on a
    // singular Jacobian or land exactly on the degenerate set, genuine
    // near-string solutions converge with their finite deviation intact.
    const bool at_zero_twist = (spec.beta == 0.0);
    const double suspicion_spacing = 1e-7;
    auto vet = [&](RootSet rs) -> std::optional<RootSet> {
        bool suspicious = has_degenerate_spacing(mc, rs, suspicion_spacing);
        if (at_zero_twist &&
            detect_singular(spec, rs, opts.singular_projection_radius).is_singular_candidate())
            suspicious = true;
        if (!suspicious) return rs;
        SolveOptions popts = opts;
        popts.residual_tolerance = 1e-32;
        popts.max_iterations = 400;
        auto pol = mp_polish_full(spec, rs, popts);
        if (!pol.ok) return std::nullopt;
        // measured at 50 digits: degenerate configurations pin these to the
        // working epsilon, genuine near-string solutions keep them finite
        if (at_zero_twist && pol.string_distance < 1e-28)
            return std::nullopt; // the exact singular candidate; reduced sweep covers it
        if (pol.spacing_defect < 1e-28) return std::nullopt; // 0/0 configuration
        if (!pairwise_distinct(pol.roots, opts.distinctness_tolerance)) return std::nullopt;
        return pol.roots;
    };

    auto record = [&](const RootSet& rs) {
        try {
            auto cls = classify(spec, rs, tol);
            if (cls.kind == SolutionKind::NotASolution) return;
            for (const auto& [got, gcls] : out.solutions)
                if (same_solution(got, rs, opts.dedup_distance)) return;
            out.solutions.emplace_back(rs, cls);
        } catch (const PoleError&) {
        }
    };

    for (const auto& found : res.found) {
        auto vetted = vet(found);
        if (vetted) record(*vetted);
    }

    // Regular solutions can sit a whisker away from a singular candidate (the
    // string deviation shrinks fast with N). Their basins are invisible to the
    // double sweep, so hunt them directly: multiprecision Newton from tight
    // stencils around every candidate, keeping survivors that stay off the
    // degenerate set.
    if (at_zero_twist && spec.is_xxx_half()) {
        SolveOptions popts = opts;
        popts.residual_tolerance = 1e-36;
        popts.max_iterations = 400;
        for (const auto& [cand, ccls] : singular.solutions) {
            std::vector<cdouble> rem;
            for (const auto& z : cand.roots)
                if (std::abs(z - cdouble(0, 0.5)) > 1e-9 && std::abs(z - cdouble(0, -0.5)) > 1e-9)
                    rem.push_back(z);
            for (double dx : {0.0, 0.02, -0.02})
                for (double dy : {1e-3, 1e-5}) {
                    std::vector<cdouble> seed = {cdouble(dx, 0.5 + dy), cdouble(dx, -0.5 - dy)};
                    seed.insert(seed.end(), rem.begin(), rem.end());
                    auto hunted = mp_polish_full(spec, RootSet(std::move(seed)), popts);
                    if (!hunted.ok) continue;
                    if (!bounded(hunted.roots) ||
                        !pairwise_distinct(hunted.roots, opts.distinctness_tolerance))
                        continue;
                    if (hunted.string_distance < 1e-28) continue;
                    if (hunted.spacing_defect < 1e-28) continue;
                    record(hunted.roots);
                }
        }
    }

    // merge the singular candidates from the reduced sweep
    for (auto& [rs, cls] : singular.solutions) {
        bool dup = false;
        for (const auto& [got, gcls] : out.solutions)
            if (same_solution(got, rs, opts.dedup_distance)) {
                dup = true;
                break;
            }
        if (!dup) out.solutions.emplace_back(std::move(rs), cls);
    }

    std::sort(out.solutions.begin(), out.solutions.end(), [](const auto& a, const auto& b) {
        const RootSet& x = a.first;
        const RootSet& y = b.first;
        for (std::size_t j = 0; j < std::min(x.size(), y.size()); ++j)
            if (x.roots[j] != y.roots[j]) return root_less(x.roots[j], y.roots[j]);
        return x.size() < y.size();
    });
    return out;
}

} // namespace tbethe
