#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "tbethe/census.hpp"
#include "tbethe/ed.hpp"
#include "tbethe/model_core.hpp"

using namespace tbethe;
using cd = std::complex<double>;

TEST_CASE("two-site chain diagonalizes by hand") {
    auto h = ed::build_hamiltonian(2, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev[3] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("hermiticity and symmetries") {
    for (double beta : {0.0, 0.3}) {
        auto h = ed::build_hamiltonian(4, beta);
        CHECK((h - h.adjoint()).norm() < 1e-14);
        auto sz = ed::sz_total(4);
        CHECK((h * sz - sz * h).norm() < 1e-12);
        auto sx = ed::sx_total(4);
        const double sx_comm = (h * sx - sx * h).norm();
        if (beta == 0.0)
            CHECK(sx_comm < 1e-12); // full SU(2) at zero twist
        else
            CHECK(sx_comm > 1e-3); // twist breaks it down to U(1)
    }
}

TEST_CASE("sector spectra") {
    auto s0 = ed::sector_spectrum(4, 0, 0.0);
    REQUIRE(s0.eigenvalues.size() == 1);
    CHECK(s0.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-14));

    auto s2 = ed::sector_spectrum(4, 2, 0.0);
    REQUIRE(s2.eigenvalues.size() == 6);
    bool has_minus_one = false;
    for (double e : s2.eigenvalues)
        if (std::abs(e + 1.0) < 1e-12) has_minus_one = true;
    CHECK(has_minus_one);

    auto s21 = ed::sector_spectrum(2, 1, 0.0);
    CHECK(s21.eigenvalues[0] == doctest::Approx(-2.0));
    CHECK(s21.eigenvalues[1] == doctest::Approx(0.0));
}

TEST_CASE("trace identity across sectors") {
    const int n = 5;
    auto h = ed::build_hamiltonian(n, 0.17);
    double sum = 0;
    for (int m = 0; m <= n; ++m)
        for (double e : ed::sector_spectrum(n, m, 0.17).eigenvalues) sum += e;
    CHECK(sum == doctest::Approx(h.trace().real()).epsilon(1e-10));
    CHECK(std::abs(h.trace().imag()) < 1e-12);
}

TEST_CASE("spectrum moves smoothly with the twist") {
    auto a = ed::sector_spectrum(6, 3, 0.0).eigenvalues;
    auto b = ed::sector_spectrum(6, 3, 1e-3).eigenvalues;
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-2 * 1e-1);
}

TEST_CASE("spectrum matching with multiplet bookkeeping at N=4, M=2") {
    // highest-weight content: M=0 vacuum (E=0), three M=1 magnons, the M=2
    // regular pair (E=-3) and the physical singular pair (E=-1)
    std::vector<ed::BetheLevel> levels;
    levels.push_back({RootSet{}, 0, 0.0});
    auto spec1 = ModelSpec::xxx(4, 1);
    // one-magnon roots: (1/2) cot(pi k / 4), k = 1..3
    for (int k = 1; k <= 3; ++k) {
        const double lam = 0.5 / std::tan(std::numbers::pi * k / 4.0);
        RootSet r(std::vector<cd>{{lam, 0}});
        levels.push_back({r, 1, energy(spec1, r)});
    }
    auto spec2 = ModelSpec::xxx(4, 2);
    RootSet reg(std::vector<cd>{{0.5 / std::sqrt(3.0), 0}, {-0.5 / std::sqrt(3.0), 0}});
    levels.push_back({reg, 2, energy(spec2, reg)});
    SingularDecomposition dec;
    dec.string_part = string_values(spec2);
    levels.push_back({RootSet(std::vector<cd>{{0, 0.5}, {0, -0.5}}), 2, energy(spec2, dec)});

    auto rep = ed::match_spectrum(4, 2, 0.0, levels);
    CHECK(rep.complete());
    CHECK(rep.matches.size() == 6); // 2 + 3 + 1 decomposition of the sector
    for (const auto& m : rep.matches) CHECK(m.abs_delta < 1e-10);

    // empty input leaves every level unmatched
    auto none = ed::match_spectrum(4, 2, 0.0, {});
    CHECK(none.unmatched_ed.size() == 6);

    // a junk level is reported, not silently matched
    std::vector<ed::BetheLevel> junk = levels;
    junk.push_back({RootSet{}, 2, -17.5});
    auto repj = ed::match_spectrum(4, 2, 0.0, junk);
    CHECK(repj.unmatched_bethe.size() == 1);
}

TEST_CASE("the unphysical candidate's formal energy matches nothing at N=5") {
    // formal energy of the N-odd pair: the regularized -1
    std::vector<ed::BetheLevel> levels;
    levels.push_back({RootSet(std::vector<cd>{{0, 0.5}, {0, -0.5}}), 2, -1.0});
    auto rep = ed::match_spectrum(5, 2, 0.0, levels);
    CHECK(rep.unmatched_bethe.size() == 1);
}

TEST_CASE("overlap semantics") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4), w = Eigen::VectorXcd::Zero(4);
    v(1) = cd(0, 2);
    CHECK(ed::eigvec_overlap(v, v) == doctest::Approx(1.0));
    w(2) = 3.0;
    CHECK(ed::eigvec_overlap(v, w) == doctest::Approx(0.0));
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(4);
    CHECK_THROWS_AS(ed::eigvec_overlap(v, z), SpecError);
}

TEST_CASE("size cap") {
    CHECK_THROWS_AS(ed::build_hamiltonian(15, 0.0), SpecError);
}
