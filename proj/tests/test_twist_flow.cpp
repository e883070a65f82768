#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tbethe/model_core.hpp"
#include "tbethe/twist_flow.hpp"

using namespace tbethe;
using cd = std::complex<double>;

namespace {

SingularDecomposition dec_of(const ModelSpec& spec, const std::vector<cd>& roots) {
    auto det = detect_singular(spec, RootSet(roots));
    REQUIRE(det.is_singular_candidate());
    return *det.decomposition;
}

cdouble coeff50(const TwistSeries& s, int root, int order) {
    return s.coefficient(root, order);
}

} // namespace

TEST_CASE("the N=4 expansion reproduces the known coefficients exactly") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    auto s = expand_series(spec, dec, 4, Precision::decimal(40));

    // lambda_1 = i/2 + b/4 - b^3/96 + i b^4/256, lambda_2 conjugate pattern
    using C = cmp50;
    const C quarter = C(1) / C(4);
    const C c3 = C(-1) / C(96);
    const C c4 = C(0, 1) / C(256);
    auto close = [](const C& a, const C& b) {
        return abs_as_double(a - b) < 1e-30;
    };
    CHECK(close(s.coefficients[0][0].to<C>(), quarter));
    CHECK(close(s.coefficients[0][1].to<C>(), C(0)));
    CHECK(close(s.coefficients[0][2].to<C>(), c3));
    CHECK(close(s.coefficients[0][3].to<C>(), c4));
    CHECK(close(s.coefficients[1][0].to<C>(), quarter));
    CHECK(close(s.coefficients[1][3].to<C>(), -c4));
}

TEST_CASE("first-order correction") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    auto fo = first_order_correction(spec, dec);
    CHECK(std::abs(fo.common_value() - cd(0.25, 0)) < 1e-14);
    CHECK(fo.remainder.empty());

    // both string rows carry the same first-order coefficient
    auto s = expand_series(spec, dec, 2);
    CHECK(std::abs(coeff50(s, 0, 1) - coeff50(s, 1, 1)) < 1e-14);

    // the remainder root of (6,3) acquires a consistent first-order shift:
    // the order-1 truncation leaves an O(beta^2) residual
    auto spec6 = ModelSpec::xxx(6, 3);
    auto dec6 = dec_of(spec6, {{0, 0.5}, {0, -0.5}, {0, 0}});
    auto s6 = expand_series(spec6, dec6, 1);
    const double r1 = series_residual(s6, 1e-4);
    const double r2 = series_residual(s6, 5e-5);
    CHECK(r1 < 1e-6);
    CHECK(r2 / r1 < 0.3); // O(beta^2): halving beta quarters the residual

    // order 1 of the full expansion equals the dedicated first-order solve
    auto fo6 = first_order_correction(spec6, dec6);
    CHECK(std::abs(coeff50(s6, 0, 1) - fo6.common_value()) < 1e-14);
    REQUIRE(fo6.remainder.size() == 1);
    CHECK(std::abs(coeff50(s6, 2, 1) - fo6.remainder[0].to_cdouble()) < 1e-14);
}

TEST_CASE("unphysical input is rejected as inconsistent") {
    auto spec = ModelSpec::xxx(5, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    CHECK_THROWS_AS(first_order_correction(spec, dec), NumericError);
    CHECK_THROWS_AS(expand_series(spec, dec, 3), NumericError);
}

TEST_CASE("series residual decays at the truncation order") {
    auto spec = ModelSpec::xxx(6, 3);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}, {0, 0}});
    auto s = expand_series(spec, dec, 6, Precision::decimal(40));

    CHECK(series_residual(s, 1e-2) < 1e-13);
    // ratio between beta = 1e-2 and 5e-3 consistent with O(beta^7)
    const double r1 = series_residual(s, 1e-2);
    const double r2 = series_residual(s, 5e-3);
    CHECK(r2 / r1 < 2.0 * std::pow(0.5, 7));
    CHECK(r2 / r1 > 0.1 * std::pow(0.5, 7));
}

TEST_CASE("order consistency: lower orders are stable under deeper expansion") {
    auto spec = ModelSpec::xxx(6, 3);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}, {0, 0}});
    auto s4 = expand_series(spec, dec, 4);
    auto s6 = expand_series(spec, dec, 6);
    for (int j = 0; j < 3; ++j)
        for (int l = 1; l <= 4; ++l)
            CHECK(std::abs(coeff50(s4, j, l) - coeff50(s6, j, l)) < 1e-25);
}

TEST_CASE("series evaluation") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    auto s = expand_series(spec, dec, 4);

    auto at0 = evaluate_series(s, 0.0);
    CHECK(std::abs(at0.roots[0] - cd(0, 0.5)) == 0.0);
    CHECK(std::abs(at0.roots[1] - cd(0, -0.5)) == 0.0);

    // odd-order parity of the truncation
    auto plus = evaluate_series(s, 0.2);
    auto minus = evaluate_series(s, -0.2);
    // match roots to the two branches by imaginary part
    auto pick = [](const RootSet& rs, double target_im) {
        for (const auto& z : rs.roots)
            if (std::abs(z.imag() - target_im) < 0.2) return z;
        REQUIRE(false);
        return cd(0, 0);
    };
    const cd base(0, 0.5);
    const cd odd = 0.5 * (pick(plus, 0.5) - pick(minus, 0.5));
    const cd even = 0.5 * (pick(plus, 0.5) + pick(minus, 0.5)) - base;
    CHECK(std::abs(odd - (cd(0.05, 0) + cd(-0.2 * 0.2 * 0.2 / 96.0, 0))) < 1e-12);
    CHECK(std::abs(even - cd(0, 0.2 * 0.2 * 0.2 * 0.2 / 256.0)) < 1e-12);
}

TEST_CASE("homotopy tracking meets the series") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    auto s = expand_series(spec, dec, 4, Precision::decimal(40));

    ModelSpec start = spec;
    start.beta = 0.5;
    SolveOptions opts;
    opts.residual_tolerance = 1e-30;
    auto path = homotopy_track(start, evaluate_series(s, 0.5), 1e-3, 10, opts,
                               Precision::decimal(50));
    REQUIRE(!path.empty());
    CHECK(path.back().beta == doctest::Approx(1e-3));
    auto expect = evaluate_series(s, 1e-3);
    for (int j = 0; j < 2; ++j)
        CHECK(std::abs(path.back().roots.roots[j] - expect.roots[j]) < 1e-8);

    // each intermediate point solves the system at its twist
    for (const auto& p : path) {
        ModelSpec sp = spec;
        sp.beta = p.beta;
        CHECK(bethe_residual_norm(sp, p.roots) < 1e-9);
    }

    // identity track
    auto idp = homotopy_track(start, evaluate_series(s, 0.5), 0.5, 1, opts,
                              Precision::decimal(50));
    CHECK(idp.back().beta == 0.5);

    // tracking cannot start on the untwisted chain
    ModelSpec zero = spec;
    zero.beta = 0.0;
    CHECK_THROWS_AS(homotopy_track(zero, RootSet(std::vector<cd>{{0, 0.5}, {0, -0.5}}), 1e-3, 5),
                    SpecError);
}

TEST_CASE("regularization routes agree on the constraint value") {
    // physical solution: both limits converge to 1
    auto spec = ModelSpec::xxx(6, 3);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}, {0, 0}});
    auto s = expand_series(spec, dec, 6, Precision::decimal(40));

    std::vector<double> betas{1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
    auto pi_beta = product_identity_on_series(s, betas);
    auto lim_beta = extrapolate_to_zero(betas, pi_beta);

    std::vector<double> epss{1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
    auto pi_eps = epsilon_constraint_check(spec, dec, epss);
    auto lim_eps = extrapolate_to_zero(epss, pi_eps);

    auto lhs = physical_constraint(spec, dec).lhs;
    CHECK(std::abs(lim_beta - lhs) < 1e-8);
    CHECK(std::abs(lim_eps - lhs) < 1e-8);

    // unphysical N=5 pair: the epsilon route converges to (-1)^5 = -1
    auto spec5 = ModelSpec::xxx(5, 2);
    auto dec5 = dec_of(spec5, {{0, 0.5}, {0, -0.5}});
    auto vals5 = epsilon_constraint_check(spec5, dec5, epss);
    auto lim5 = extrapolate_to_zero(epss, vals5);
    CHECK(std::abs(lim5 - cd(-1, 0)) < 1e-8);
    // improving linearly in epsilon
    CHECK(std::abs(vals5[4] - cd(-1, 0)) < 0.5 * std::abs(vals5[0] - cd(-1, 0)));
}

TEST_CASE("epsilon check guards and exact finite values") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});

    CHECK_THROWS_AS(epsilon_constraint_check(spec, dec, std::vector<double>{1e-50}), NumericError);
    CHECK_THROWS_AS(epsilon_constraint_check(spec, dec, std::vector<double>{1e-3, 1e-2}), SpecError);

    // finite, exactly computable value at fixed epsilon:
    // [(i+e)/e * e/(e-i)]^N = [(i+e)/(e-i)]^N
    const double e = 1e-3;
    auto vals = epsilon_constraint_check(spec, dec, std::vector<double>{e});
    const cd expect = std::pow((cd(e, 1)) / (cd(e, -1)), 4);
    CHECK(std::abs(vals[0] - expect) < 1e-12);
    CHECK(std::abs(vals[0] - cd(1, 0)) < 1e-2); // within 1e-2 of 1 at e = 1e-3
}

TEST_CASE("expansion handles remainders in the XXZ and higher-spin families") {
    // XXZ spin-1/2, N=6, M=3: remainder {0} is a physical singular solution
    {
        auto spec = ModelSpec::xxz(6, 3, 0.5);
        SingularDecomposition dec;
        dec.string_part = string_values(spec);
        dec.remainder = RootSet(std::vector<cd>{{0, 0}});
        REQUIRE(reduced_residual_norm(spec, dec.remainder) < 1e-14);
        REQUIRE(physical_constraint(spec, dec).physical);
        auto s = expand_series(spec, dec, 4, Precision::decimal(40));
        const double r1 = series_residual(s, 1e-2);
        const double r2 = series_residual(s, 5e-3);
        CHECK(r1 < 1e-9);
        CHECK(r2 / r1 < 2.0 * std::pow(0.5, 5));
    }
    // spin 1, N=6, M=5: a physical candidate with a real remainder pair
    {
        auto spec = ModelSpec::xxx(6, 5, 0.0, 2);
        SolveOptions opts;
        auto rp = newton_solve_reduced(spec, RootSet(std::vector<cd>{{0.62, 0}, {-0.62, 0}}),
                                       opts);
        REQUIRE(rp.ok());
        SingularDecomposition dec;
        dec.string_part = string_values(spec);
        dec.remainder = *rp.roots;
        REQUIRE(physical_constraint(spec, dec).physical);
        auto s = expand_series(spec, dec, 4, Precision::decimal(40));
        const double r1 = series_residual(s, 1e-2);
        const double r2 = series_residual(s, 5e-3);
        CHECK(r1 < 1e-8);
        CHECK(r2 / r1 < 2.0 * std::pow(0.5, 5));
        // all string rows share the first-order coefficient
        CHECK(std::abs(coeff50(s, 0, 1) - coeff50(s, 1, 1)) < 1e-20);
        CHECK(std::abs(coeff50(s, 1, 1) - coeff50(s, 2, 1)) < 1e-20);
    }
}

TEST_CASE("the carried counterterm does not change the constraint limit") {
    auto spec = ModelSpec::xxx(4, 2);
    auto dec = dec_of(spec, {{0, 0.5}, {0, -0.5}});
    std::vector<EpsilonReg> regs;
    std::vector<double> eps{1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
    for (double e : eps) regs.push_back(EpsilonReg{e, cd(0.7, -0.3)});
    auto with_c = extrapolate_to_zero(eps, epsilon_constraint_check(spec, dec, regs));
    auto without = extrapolate_to_zero(eps, epsilon_constraint_check(spec, dec, eps));
    CHECK(std::abs(with_c - without) < 1e-7);
}

TEST_CASE("expansion works for the higher-spin and XXZ families") {
    // spin 1, pure string {i, 0, -i}: always physical
    auto spec_s1 = ModelSpec::xxx(6, 3, 0.0, 2);
    SingularDecomposition dec1;
    dec1.string_part = string_values(spec_s1);
    auto s1 = expand_series(spec_s1, dec1, 4, Precision::decimal(40));
    const double r1 = series_residual(s1, 1e-2);
    const double r2 = series_residual(s1, 5e-3);
    CHECK(r1 < 1e-9);
    CHECK(r2 / r1 < 2.0 * std::pow(0.5, 5));

    // all three string coefficients share the first order
    CHECK(std::abs(coeff50(s1, 0, 1) - coeff50(s1, 1, 1)) < 1e-20);
    CHECK(std::abs(coeff50(s1, 1, 1) - coeff50(s1, 2, 1)) < 1e-20);

    // XXZ spin 1/2, string {eta/2, -eta/2}, N even: physical
    auto spec_z = ModelSpec::xxz(4, 2, 0.7);
    SingularDecomposition decz;
    decz.string_part = string_values(spec_z);
    auto sz = expand_series(spec_z, decz, 4, Precision::decimal(40));
    const double z1 = series_residual(sz, 1e-2);
    const double z2 = series_residual(sz, 5e-3);
    CHECK(z1 < 1e-9);
    CHECK(z2 / z1 < 2.0 * std::pow(0.5, 5));
}
