#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tbethe/census.hpp"
#include "tbethe/model_core.hpp"

using namespace tbethe;

namespace {

const CensusRow& row_of(const CensusReport& rep, int m) {
    for (const auto& r : rep.rows)
        if (r.magnons == m) return r;
    REQUIRE(false);
    return rep.rows.front();
}

} // namespace

TEST_CASE("census N=4") {
    auto rep = run_census(4);
    REQUIRE(rep.rows.size() == 3);
    CHECK(row_of(rep, 1).n_regular == 3);
    CHECK(row_of(rep, 1).n_singular_physical == 0);
    CHECK(row_of(rep, 1).expected == 3);
    CHECK(row_of(rep, 2).n_regular == 1);
    CHECK(row_of(rep, 2).n_singular_physical == 1);
    CHECK(row_of(rep, 2).expected == 2);
    CHECK(rep.all_complete);
    // 1*5 + 3*3 + 2*1 = 16
    CHECK(rep.weighted_state_count() == 16);
    CHECK(multiplet_sum_check(rep));
}

TEST_CASE("census N=2") {
    auto rep = run_census(2);
    CHECK(row_of(rep, 1).n_regular == 1);
    CHECK(row_of(rep, 1).n_singular_physical == 0);
    CHECK(row_of(rep, 1).n_singular_unphysical == 0);
    CHECK(rep.weighted_state_count() == 4); // 1*3 + 1*1
    CHECK(multiplet_sum_check(rep));
}

TEST_CASE("census N=5 sees the odd-N unphysical pair") {
    auto rep = run_census(5);
    CHECK(row_of(rep, 2).n_singular_unphysical >= 1);
    CHECK(row_of(rep, 2).n_regular == 5);
    CHECK(row_of(rep, 2).expected == 5);
    CHECK(multiplet_sum_check(rep));
}

TEST_CASE("dropping a solution breaks the multiplet sum") {
    auto rep = run_census(4);
    REQUIRE(multiplet_sum_check(rep));
    rep.rows[1].n_regular -= 1;
    CHECK_FALSE(rep.weighted_state_count() == 16);
}

TEST_CASE("census is reproducible across random seeds") {
    SolveOptions a, b;
    a.random_seed = 42;
    b.random_seed = 4242;
    auto ra = run_census(6, a);
    auto rb = run_census(6, b);
    REQUIRE(ra.rows.size() == rb.rows.size());
    for (std::size_t k = 0; k < ra.rows.size(); ++k) {
        CHECK(ra.rows[k].n_regular == rb.rows[k].n_regular);
        CHECK(ra.rows[k].n_singular_physical == rb.rows[k].n_singular_physical);
        CHECK(ra.rows[k].n_singular_unphysical == rb.rows[k].n_singular_unphysical);
    }
}

TEST_CASE("singular census entries satisfy the advertised invariants") {
    SolveOptions opts;
    auto spec = ModelSpec::xxx(6, 3);
    auto sols = enumerate_solutions(spec, opts);
    int phys = 0, unphys = 0;
    for (const auto& [rs, cls] : sols.solutions) {
        if (cls.kind == SolutionKind::SingularPhysical ||
            cls.kind == SolutionKind::SingularUnphysical) {
            auto det = detect_singular(spec, rs);
            REQUIRE(det.is_singular_candidate());
            // both kinds satisfy the reduced equations
            CHECK(reduced_residual_norm(spec, det.decomposition->remainder) < 1e-9);
            auto cons = physical_constraint(spec, *det.decomposition);
            if (cls.kind == SolutionKind::SingularPhysical) {
                CHECK(cons.physical);
                ++phys;
            } else {
                CHECK_FALSE(cons.physical);
                ++unphys;
            }
        }
    }
    CHECK(phys == 1);
    CHECK(unphys == 4);
}

TEST_CASE("census energies all appear in the exact spectra (N=6)") {
    auto rep = run_census(6);
    REQUIRE(rep.all_complete);
    auto check = census_ed_check(rep);
    CHECK(check.all_matched);
    for (const auto& sector : check.sector_reports) {
        CHECK(sector.unmatched_ed.empty());
        CHECK(sector.unmatched_bethe.empty());
        for (const auto& m : sector.matches) CHECK(m.abs_delta < 1e-8);
    }
}

TEST_CASE("desk-scale cap and binomials") {
    CHECK_THROWS_AS(run_census(11), SpecError);
    CHECK(binomial(8, 4) == 70);
    CHECK(binomial(8, -1) == 0);
    CHECK(binomial(4, 2) - binomial(4, 1) == 2);
}
