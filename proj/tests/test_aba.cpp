#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tbethe/aba.hpp"
#include "tbethe/ed.hpp"
#include "tbethe/model_core.hpp"
#include "tbethe/root_solver.hpp"

using namespace tbethe;
using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

SingularDecomposition dec_of(const ModelSpec& spec, const std::vector<cd>& roots) {
    auto det = detect_singular(spec, RootSet(roots));
    REQUIRE(det.is_singular_candidate());
    return *det.decomposition;
}

} // namespace

TEST_CASE("one-site monodromy: B = i sigma^-") {
    auto B = aba::monodromy_entry(1, aba::Entry::B, cd(0.37, -0.11));
    CHECK(std::abs(B(1, 0) - cd(0, 1)) == 0.0); // |down><up| amplitude i
    CHECK(std::abs(B(0, 0)) == 0.0);
    CHECK(std::abs(B(0, 1)) == 0.0);
    CHECK(std::abs(B(1, 1)) == 0.0);

    auto v = aba::bethe_vector(1, RootSet(std::vector<cd>{{0.37, -0.11}}));
    CHECK(std::abs(v.amplitudes(1) - cd(0, 1)) == 0.0);
}

TEST_CASE("reference-state action of A and D") {
    const cd lam(0.7, 0.0);
    auto A = aba::monodromy_entry(3, aba::Entry::A, lam);
    auto D = aba::monodromy_entry(3, aba::Entry::D, lam);
    VectorXcd v0 = VectorXcd::Zero(8);
    v0(0) = 1;
    CHECK(std::abs((A * v0)(0) - std::pow(lam + cd(0, 0.5), 3)) < 1e-14);
    CHECK(std::abs((D * v0)(0) - std::pow(lam - cd(0, 0.5), 3)) < 1e-14);
    // C annihilates the reference state
    auto C = aba::monodromy_entry(3, aba::Entry::C, lam);
    CHECK((C * v0).norm() == 0.0);
}

TEST_CASE("B operators commute") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 5; ++t) {
        const cd l(u(rng), u(rng)), m(u(rng), u(rng));
        auto Bl = aba::monodromy_entry(4, aba::Entry::B, l);
        auto Bm = aba::monodromy_entry(4, aba::Entry::B, m);
        CHECK((Bl * Bm - Bm * Bl).norm() < 1e-12);
    }
}

TEST_CASE("transfer matrices commute and preserve the magnon sectors") {
    auto t1 = aba::transfer_matrix(4, cd(0.3, 0), 0.0);
    auto t2 = aba::transfer_matrix(4, cd(-0.8, 0.2), 0.0);
    CHECK((t1 * t2 - t2 * t1).norm() < 1e-10);

    auto t1b = aba::transfer_matrix(4, cd(0.3, 0), 0.23);
    auto t2b = aba::transfer_matrix(4, cd(-0.8, 0.2), 0.23);
    CHECK((t1b * t2b - t2b * t1b).norm() < 1e-10);

    auto sz = ed::sz_total(4);
    CHECK((t1b * sz - sz * t1b).norm() < 1e-12);
}

TEST_CASE("t(i/2) is i^N times the one-site translation at N=2") {
    auto t = aba::transfer_matrix(2, cd(0, 0.5), 0.0);
    // translation on two sites = swap; basis 00, 01, 10, 11
    MatrixXcd swap = MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1;
    swap(1, 2) = swap(2, 1) = 1;
    CHECK((t - cd(-1, 0) * swap).norm() < 1e-14); // i^2 = -1
}

TEST_CASE("hamiltonian from the transfer matrix matches the direct build") {
    for (int n : {3, 4, 5}) {
        auto ht = aba::hamiltonian_from_transfer(n);
        auto hd = ed::build_hamiltonian(n, 0.0);
        CHECK((ht - hd).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(ht.trace() - hd.trace()) < 1e-9);
        auto sz = ed::sz_total(n);
        CHECK((ht * sz - sz * ht).norm() < 1e-10);
    }
}

TEST_CASE("bethe_vector basics") {
    // empty product: the reference state itself
    auto v0 = aba::bethe_vector(3, RootSet{});
    CHECK(std::abs(v0.amplitudes(0) - cd(1, 0)) == 0.0);
    CHECK(v0.amplitudes.norm() == 1.0);

    // N=2 root 0: the singlet, energy -2
    auto v = aba::bethe_vector(2, RootSet(std::vector<cd>{{0, 0}}));
    CHECK(std::abs(v.amplitudes(1) + v.amplitudes(2)) < 1e-15); // antisymmetric
    auto H = ed::build_hamiltonian(2, 0.0);
    const cd rq = v.amplitudes.dot(H * v.amplitudes) / cd(v.amplitudes.squaredNorm(), 0);
    CHECK(std::abs(rq - cd(-2, 0)) < 1e-13);

    // order independence
    const cd a(0.4, 0.3), b(-0.7, 0.1);
    auto vab = aba::bethe_vector(4, RootSet(std::vector<cd>{a, b}));
    auto vba = aba::bethe_vector(4, RootSet(std::vector<cd>{b, a}));
    CHECK((vab.amplitudes - vba.amplitudes).norm() < 1e-12);

    // refusal on the exact string values
    CHECK_THROWS_AS(aba::bethe_vector(4, RootSet(std::vector<cd>{{0, 0.5}, {0, -0.5}})),
                    SpecError);
}

TEST_CASE("the naive vector at the singular pair is null") {
    auto v = aba::bethe_vector_unchecked(4, RootSet(std::vector<cd>{{0, 0.5}, {0, -0.5}}));
    CHECK(v.amplitudes.norm() < 1e-12);
}

TEST_CASE("energies of regular census solutions match Rayleigh quotients") {
    SolveOptions opts;
    opts.seed_count = 600;
    auto spec = ModelSpec::xxx(6, 2);
    auto sols = enumerate_solutions(spec, opts);
    auto H = ed::build_hamiltonian(6, 0.0);
    int checked = 0;
    for (const auto& [rs, cls] : sols.solutions) {
        if (cls.kind != SolutionKind::Regular) continue;
        auto v = aba::bethe_vector(6, rs);
        const double n2 = v.amplitudes.squaredNorm();
        REQUIRE(n2 > 1e-16);
        const cd rq = v.amplitudes.dot(H * v.amplitudes) / cd(n2, 0);
        CHECK(std::abs(rq.real() - energy(spec, rs)) < 1e-8);
        CHECK(std::abs(rq.imag()) < 1e-10);
        ++checked;
    }
    CHECK(checked >= 8);
}

TEST_CASE("singular limit vector at N=4") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    auto series = expand_series(spec, dec, 4, Precision::decimal(40));
    auto lv = aba::singular_limit_vector(spec, series);

    VectorXcd vac = VectorXcd::Zero(16);
    vac(0) = 1;
    VectorXcd target = VectorXcd::Zero(16);
    for (int k = 1; k <= 4; ++k) {
        const int kp = k % 4 + 1;
        target += std::pow(-1.0, k) * (ed::lowering(4, k) * (ed::lowering(4, kp) * vac));
    }
    target.normalize();
    CHECK(ed::eigvec_overlap(lv.vector.amplitudes, target) > 1.0 - 1e-10);

    auto H = ed::build_hamiltonian(4, 0.0);
    const cd rq = lv.vector.amplitudes.dot(H * lv.vector.amplitudes);
    CHECK(std::abs(rq - cd(-1, 0)) < 1e-10);
    CHECK(lv.vector.magnon_number == 2);

    // insufficient series order is refused
    auto short_series = expand_series(spec, dec, 3, Precision::decimal(40));
    CHECK_THROWS_AS(aba::singular_limit_vector(spec, short_series), SpecError);
}

TEST_CASE("singular limit vector at N=6 is an exact eigenvector") {
    auto spec = ModelSpec::xxx(6, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    auto series = expand_series(spec, dec, 6, Precision::decimal(40));
    auto lv = aba::singular_limit_vector(spec, series);

    auto spectrum = ed::sector_spectrum(6, 2, 0.0, true);
    // the pair energy is -1; find the matching exact eigenvector(s)
    double best = 0;
    for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
        if (std::abs(spectrum.eigenvalues[k] + 1.0) > 1e-9) continue;
        best = std::max(best, ed::eigvec_overlap(lv.vector.amplitudes, spectrum.eigenvectors[k]));
    }
    CHECK(best > 1.0 - 1e-8);
}

TEST_CASE("transfer eigenvalue checks") {
    // reference state: exact eigenvalue (mu + i/2)^N + e^{-i beta} (mu - i/2)^N
    const double beta = 0.4;
    auto rep = aba::transfer_eigenvalue_check(4, RootSet{}, beta,
                                              {cd(0.3, 0.0), cd(-0.5, 0.1)});
    for (const auto& p : rep.points) {
        const cd expect = std::pow(p.test_point + cd(0, 0.5), 4) +
                          std::exp(cd(0, -beta)) * std::pow(p.test_point - cd(0, 0.5), 4);
        CHECK(std::abs(p.rayleigh - expect) < 1e-12);
        CHECK(p.residual < 1e-13);
    }

    // a genuine beta = 0 solution passes, a non-solution fails loudly
    auto spec = ModelSpec::xxx(4, 2);
    SolveOptions opts;
    opts.seed_count = 300;
    auto sols = enumerate_solutions(spec, opts);
    for (const auto& [rs, cls] : sols.solutions) {
        if (cls.kind != SolutionKind::Regular) continue;
        auto ok = aba::transfer_eigenvalue_check(4, rs, 0.0, {cd(0.27, 0.1)});
        CHECK(ok.max_residual < 1e-10);
    }
    auto bad = aba::transfer_eigenvalue_check(4, RootSet(std::vector<cd>{{0.5, 0}, {-0.4, 0}}),
                                              0.0, {cd(0.27, 0.1)});
    CHECK(bad.max_residual > 1e-3);
}

TEST_CASE("size caps are enforced") {
    CHECK_THROWS_AS(aba::monodromy_entry(13, aba::Entry::B, cd(0, 0)), SpecError);
    CHECK_THROWS_AS(aba::transfer_matrix(20, cd(0, 0), 0.0), SpecError);
}
