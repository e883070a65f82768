#pragma once

#include <vector>

#include "tbethe/ed.hpp"
#include "tbethe/root_solver.hpp"

namespace tbethe {

struct CensusRow {
    int magnons = 0;
    int n_regular = 0;
    int n_singular_physical = 0;
    int n_singular_unphysical = 0;
    long expected = 0; // C(N,M) - C(N,M-1)
    long seeds_tried = 0;
    bool complete = false; // n_regular + n_singular_physical == expected
    std::vector<std::pair<RootSet, double>> energies; // counted solutions with energies
};

struct CensusReport {
    int sites = 0;
    std::vector<CensusRow> rows; // M = 0 .. N/2
    bool all_complete = false;

    long weighted_state_count() const {
        long total = 0;
        for (const auto& r : rows)
            total += long(r.n_regular + r.n_singular_physical) * (sites - 2 * r.magnons + 1);
        return total;
    }
};

long binomial(int n, int k);

/// Enumerate, classify and count all solutions per sector at beta = 0 for the
/// XXX spin-1/2 chain. Rows that miss the expected count re-run once with a
/// 4x seed budget, then stay flagged incomplete.
CensusReport run_census(int sites, const SolveOptions& opts = SolveOptions{}, int size_cap = 10);

/// sum over rows of (counted solutions) * (N - 2M + 1) == 2^N.
bool multiplet_sum_check(const CensusReport& report);

/// Cross-check every census energy against the exact sector spectra.
struct CensusEdCheck {
    bool all_matched = false;
    std::vector<ed::SpectrumReport> sector_reports;
};
CensusEdCheck census_ed_check(const CensusReport& report, double threshold = 1e-8);

} // namespace tbethe
