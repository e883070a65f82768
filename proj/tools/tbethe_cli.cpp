#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "tbethe/aba.hpp"
#include "tbethe/census.hpp"
#include "tbethe/io.hpp"
#include "tbethe/model_core.hpp"
#include "tbethe/root_solver.hpp"
#include "tbethe/twist_flow.hpp"

namespace {

using namespace tbethe;

struct Args {
    std::string model = "xxx";
    std::string spin = "1/2";
    double eta = 0.5;
    int sites = 4;
    int magnons = 0;
    double beta = 0.0;
    int order = 0;
    int precision = 0; // 0 = machine double
    double tol = 0.0;  // 0 = derive from precision
    int seeds = 2000;
    std::uint64_t rng = 12345;
    std::string roots;
    std::string out;
    std::string format = "json";
};

int parse_spin(const std::string& s) {
    // accepted: "1/2", "1", "3/2", "2", "0.5", "1.5", ...
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const int num = std::stoi(s.substr(0, slash));
        const int den = std::stoi(s.substr(slash + 1));
        if (den != 2 || num < 1) throw SpecError("spin must be a positive half-integer");
        return num;
    }
    const double v = std::stod(s);
    const int twice = int(std::lround(2 * v));
    if (twice < 1 || std::abs(2 * v - twice) > 1e-9)
        throw SpecError("spin must be a positive half-integer");
    return twice;
}

ModelSpec build_spec(const Args& a) {
    ModelSpec spec;
    spec.family = (a.model == "xxz") ? Family::XXZ : Family::XXX;
    spec.twice_spin = parse_spin(a.spin);
    spec.sites = a.sites;
    spec.magnons = a.magnons;
    spec.eta = (spec.family == Family::XXZ) ? a.eta : 0.0;
    spec.beta = a.beta;
    spec.validate();
    return spec;
}

Tolerances tolerances(const Args& a) {
    auto t = Tolerances::for_precision(Precision{a.precision});
    if (a.tol > 0) t.solution = a.tol;
    return t;
}

SolveOptions solve_options(const Args& a) {
    SolveOptions opts;
    opts.seed_count = a.seeds;
    opts.random_seed = a.rng;
    if (a.tol > 0) opts.residual_tolerance = a.tol;
    return opts;
}

void add_model_flags(CLI::App* cmd, Args& a) {
    cmd->add_option("--model", a.model, "chain family")->check(CLI::IsMember({"xxx", "xxz"}));
    cmd->add_option("--spin", a.spin, "spin s (1/2, 1, 3/2, ...)");
    cmd->add_option("--eta", a.eta, "XXZ anisotropy");
    cmd->add_option("-N,--sites", a.sites, "number of sites")->required();
    cmd->add_option("-M,--magnons", a.magnons, "magnon number");
    cmd->add_option("--beta", a.beta, "twist angle");
}

void add_common_flags(CLI::App* cmd, Args& a) {
    cmd->add_option("--precision", a.precision, "decimal digits (0 = machine double)")
        ->envname("TBETHE_PRECISION");
    cmd->add_option("--tol", a.tol, "residual tolerance override");
    cmd->add_option("--out", a.out, "output path (default stdout)");
    cmd->add_option("--format", a.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
}

SingularDecomposition decomposition_from_args(const ModelSpec& spec, const Args& a) {
    const int sl = spec.string_length();
    if (a.roots.empty()) {
        if (spec.magnons != sl)
            throw SpecError("M > string length: pass --roots with the remainder "
                            "(or the full singular root set)");
        SingularDecomposition dec;
        dec.string_part = string_values(spec);
        return dec;
    }
    auto parsed = io::parse_roots(a.roots);
    if (int(parsed.size()) == spec.magnons) {
        auto det = detect_singular(spec, RootSet(parsed), 1e-6);
        if (!det.is_singular_candidate())
            throw SpecError("roots do not contain the exact singular string" +
                            (det.diagnostics.empty() ? "" : ": " + det.diagnostics));
        return *det.decomposition;
    }
    if (int(parsed.size()) == spec.magnons - sl) {
        SingularDecomposition dec;
        dec.string_part = string_values(spec);
        dec.remainder = canonicalize(RootSet(parsed));
        return dec;
    }
    throw SpecError("--roots must list either the full M roots or the M - (2s+1) remainder");
}

int cmd_classify(const Args& a) {
    auto spec = build_spec(a);
    RootSet roots(io::parse_roots(a.roots));
    auto result = classify(spec, roots, tolerances(a));
    if (a.format == "table")
        io::emit_text(io::table(result), a.out);
    else
        io::emit(io::to_json(result), a.out);
    return 0;
}

int cmd_solve(const Args& a) {
    auto spec = build_spec(a);
    auto opts = solve_options(a);
    if (!a.roots.empty()) {
        RootSet seed(io::parse_roots(a.roots));
        auto res = newton_solve(spec, seed, opts,
                                a.precision > 0 ? Precision::decimal(a.precision)
                                                : Precision::machine());
        if (!res.ok())
            throw NumericError(std::string("newton did not converge (") +
                               (res.failure->reason == SolveFailure::Reason::SingularJacobian
                                    ? "singular jacobian"
                                    : "no convergence") +
                               ")");
        SolutionSet out;
        out.spec = spec;
        out.seeds_tried = 1;
        out.solutions.emplace_back(*res.roots, classify(spec, *res.roots, tolerances(a)));
        if (a.format == "table")
            io::emit_text(io::table(out), a.out);
        else
            io::emit(io::to_json(out), a.out);
        return 0;
    }
    auto sols = enumerate_solutions(spec, opts);
    if (a.format == "table")
        io::emit_text(io::table(sols), a.out);
    else
        io::emit(io::to_json(sols), a.out);
    return 0;
}

int cmd_expand(const Args& a) {
    auto spec = build_spec(a);
    auto dec = decomposition_from_args(spec, a);
    const int order = a.order > 0 ? a.order : spec.sites;
    const Precision prec = a.precision > 0 ? Precision::decimal(a.precision)
                                           : Precision::decimal(40);
    auto series = expand_series(spec, dec, order, prec);
    if (a.format == "table")
        io::emit_text(io::table(series), a.out);
    else
        io::emit(io::to_json(series), a.out);
    return 0;
}

int cmd_verify(const Args& a) {
    auto spec = build_spec(a);
    RootSet roots(io::parse_roots(a.roots));
    auto result = classify(spec, roots, tolerances(a));

    io::json out{{"schema", io::schema_version}, {"kind", "verify"}};
    out["model"] = io::to_json(spec);
    out["classification"] = io::to_json(result);
    io::json residuals = io::json::array();
    if (result.kind == SolutionKind::Regular || result.kind == SolutionKind::NotASolution)
        for (const auto& r : bethe_residual(spec, roots)) residuals.push_back(io::complex_to_json(r));
    out["residuals"] = residuals;
    try {
        out["product_identity"] = io::complex_to_json(product_identity(spec, roots));
    } catch (const PoleError&) {
        out["product_identity"] = nullptr; // singular string: the ratio form has a pole
    }
    out["energy"] = nullptr;
    if (spec.is_xxx_half()) {
        try {
            if (result.kind == SolutionKind::Regular)
                out["energy"] = energy(spec, roots);
            else if (result.kind == SolutionKind::SingularPhysical) {
                auto det = detect_singular(spec, roots, tolerances(a).detection);
                out["energy"] = energy(spec, *det.decomposition);
            }
        } catch (const NumericError&) {
        }
    }
    if (a.format == "table") {
        std::string text = io::table(result);
        io::emit_text(text, a.out);
    } else {
        io::emit(out, a.out);
    }
    return 0;
}

int cmd_census(const Args& a) {
    auto opts = solve_options(a);
    auto rep = run_census(a.sites, opts);
    auto ed_check = census_ed_check(rep);
    if (a.format == "table") {
        std::string text = io::table(rep);
        text += ed_check.all_matched ? "ED cross-check: all energies matched\n"
                                     : "ED cross-check: MISMATCH\n";
        io::emit_text(text, a.out);
    } else {
        auto j = io::to_json(rep);
        j["ed_all_matched"] = ed_check.all_matched;
        io::emit(j, a.out);
    }
    return 0;
}

int cmd_spectrum(const Args& a, bool match) {
    auto spec = build_spec(a); // validates N, M
    if (!match) {
        auto spectrum = ed::sector_spectrum(a.sites, a.magnons, a.beta);
        ed::SpectrumReport rep;
        rep.sector_magnons = a.magnons;
        rep.ed_eigenvalues = spectrum.eigenvalues;
        if (a.format == "table")
            io::emit_text(io::table(rep), a.out);
        else
            io::emit(io::to_json(rep), a.out);
        return 0;
    }
    if (a.beta != 0.0) throw SpecError("--match runs at beta = 0");
    auto opts = solve_options(a);
    std::vector<ed::BetheLevel> levels;
    for (int mp = 0; mp <= std::min(a.magnons, a.sites / 2); ++mp) {
        ModelSpec s = ModelSpec::xxx(a.sites, mp);
        auto sols = enumerate_solutions(s, opts);
        for (const auto& [rs, cls] : sols.solutions) {
            if (cls.kind == SolutionKind::Regular)
                levels.push_back({rs, mp, energy(s, rs)});
            else if (cls.kind == SolutionKind::SingularPhysical) {
                auto det = detect_singular(s, rs);
                levels.push_back({rs, mp, energy(s, *det.decomposition)});
            }
        }
    }
    auto rep = ed::match_spectrum(a.sites, a.magnons, 0.0, levels);
    if (a.format == "table")
        io::emit_text(io::table(rep), a.out);
    else
        io::emit(io::to_json(rep), a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted Bethe equations: solve, classify, expand, verify"};
    app.require_subcommand(1);

    Args a;
    bool match = false;

    auto* classify_cmd = app.add_subcommand("classify", "classify a root set");
    add_model_flags(classify_cmd, a);
    add_common_flags(classify_cmd, a);
    classify_cmd->add_option("--roots", a.roots, "comma-separated roots")->required();

    auto* solve_cmd = app.add_subcommand("solve", "newton solve or enumerate solutions");
    add_model_flags(solve_cmd, a);
    add_common_flags(solve_cmd, a);
    solve_cmd->add_option("--roots", a.roots, "seed roots (omit to enumerate)");
    solve_cmd->add_option("--seeds", a.seeds, "random seed count");
    solve_cmd->add_option("--rng", a.rng, "random generator seed");

    auto* expand_cmd = app.add_subcommand("expand", "twist expansion of a singular solution");
    add_model_flags(expand_cmd, a);
    add_common_flags(expand_cmd, a);
    expand_cmd->add_option("--order", a.order, "series order (default N)");
    expand_cmd->add_option("--roots", a.roots, "remainder or full singular root set");

    auto* verify_cmd = app.add_subcommand("verify", "residuals, identity and classification");
    add_model_flags(verify_cmd, a);
    add_common_flags(verify_cmd, a);
    verify_cmd->add_option("--roots", a.roots, "comma-separated roots")->required();

    auto* census_cmd = app.add_subcommand("census", "per-sector solution census at beta = 0");
    census_cmd->add_option("-N,--sites", a.sites, "number of sites")->required();
    census_cmd->add_option("--seeds", a.seeds, "random seed count");
    census_cmd->add_option("--rng", a.rng, "random generator seed");
    add_common_flags(census_cmd, a);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "exact sector spectrum");
    add_model_flags(spectrum_cmd, a);
    add_common_flags(spectrum_cmd, a);
    spectrum_cmd->add_flag("--match", match, "match enumerated Bethe energies");
    spectrum_cmd->add_option("--seeds", a.seeds, "random seed count");
    spectrum_cmd->add_option("--rng", a.rng, "random generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(classify_cmd)) return cmd_classify(a);
        if (app.got_subcommand(solve_cmd)) return cmd_solve(a);
        if (app.got_subcommand(expand_cmd)) return cmd_expand(a);
        if (app.got_subcommand(verify_cmd)) return cmd_verify(a);
        if (app.got_subcommand(census_cmd)) return cmd_census(a);
        if (app.got_subcommand(spectrum_cmd)) return cmd_spectrum(a, match);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
