#include "tbethe/census.hpp"

#include <cmath>

#include "tbethe/model_core.hpp"

namespace tbethe {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

namespace {

CensusRow census_row(int sites, int magnons, const SolveOptions& opts,
                     const std::vector<RootSet>& warm) {
    const ModelSpec spec = ModelSpec::xxx(sites, magnons);
    CensusRow row;
    row.magnons = magnons;
    row.expected = binomial(sites, magnons) - binomial(sites, magnons - 1);

    auto sols = enumerate_solutions(spec, opts, warm);
    row.seeds_tried = sols.seeds_tried;
    for (const auto& [rs, cls] : sols.solutions) {
        switch (cls.kind) {
            case SolutionKind::Regular:
                ++row.n_regular;
                row.energies.emplace_back(rs, energy(spec, rs));
                break;
            case SolutionKind::SingularPhysical: {
                ++row.n_singular_physical;
                auto det = detect_singular(spec, rs);
                row.energies.emplace_back(rs, energy(spec, *det.decomposition));
                break;
            }
            case SolutionKind::SingularUnphysical: ++row.n_singular_unphysical; break;
            default: break;
        }
    }
    row.complete = (row.n_regular + row.n_singular_physical == row.expected);
    return row;
}

} // namespace

CensusReport run_census(int sites, const SolveOptions& opts, int size_cap) {
    if (sites < 1) throw SpecError("sites must be >= 1");
    if (sites > size_cap)
        throw SpecError("census is desk scale: N <= " + std::to_string(size_cap));

    CensusReport rep;
    rep.sites = sites;
    rep.all_complete = true;
    std::vector<RootSet> warm; // solutions from the previous sector
    for (int m = 0; m <= sites / 2; ++m) {
        auto row = census_row(sites, m, opts, warm);
        if (!row.complete) {
            SolveOptions boosted = opts;
            boosted.seed_count = opts.seed_count * 4;
            boosted.random_seed = opts.random_seed + 1;
            row = census_row(sites, m, boosted, warm);
        }
        warm.clear();
        // continuation seeds for the next sector: append a grid root
        for (const auto& [rs, e] : row.energies) {
            for (double extra : {0.9, -0.9, 0.31, -0.31, 2.1, -2.1, 0.11}) {
                RootSet w = rs;
                w.roots.emplace_back(extra, 0.0);
                warm.push_back(std::move(w));
            }
        }
        rep.all_complete = rep.all_complete && row.complete;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

bool multiplet_sum_check(const CensusReport& report) {
    for (const auto& row : report.rows)
        if (!row.complete) throw SpecError("multiplet sum check requires a complete census");
    return report.weighted_state_count() == (1L << report.sites);
}

CensusEdCheck census_ed_check(const CensusReport& report, double threshold) {
    CensusEdCheck out;
    out.all_matched = true;
    // highest-weight levels from all sectors
    std::vector<ed::BetheLevel> levels;
    for (const auto& row : report.rows)
        for (const auto& [rs, e] : row.energies)
            levels.push_back(ed::BetheLevel{rs, row.magnons, e});

    for (const auto& row : report.rows) {
        auto sector = ed::match_spectrum(report.sites, row.magnons, 0.0, levels, threshold);
        out.all_matched = out.all_matched && sector.complete();
        out.sector_reports.push_back(std::move(sector));
    }
    return out;
}

} // namespace tbethe
