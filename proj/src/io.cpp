#include "tbethe/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tbethe::io {

namespace {

std::string fmt_double(double x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

json complex_to_json(const cdouble& z, int digits) {
    return json::array({fmt_double(z.real(), digits), fmt_double(z.imag(), digits)});
}

json complex_to_json(const ComplexDec& z) { return json::array({z.re, z.im}); }

cdouble complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw SpecError("complex value must be [re, im]");
    auto get = [](const json& v) {
        return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>();
    };
    return {get(j[0]), get(j[1])};
}

ComplexDec complexdec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw SpecError("complex value must be [re, im]");
    ComplexDec d;
    d.re = j[0].is_string() ? j[0].get<std::string>() : fmt_double(j[0].get<double>(), 17);
    d.im = j[1].is_string() ? j[1].get<std::string>() : fmt_double(j[1].get<double>(), 17);
    return d;
}

cdouble parse_complex(const std::string& raw) {
    std::string t = trim(raw);
    if (t.empty()) throw SpecError("empty root token");
    // exact string-value shorthands
    if (t == "i/2" || t == "+i/2") return {0.0, 0.5};
    if (t == "-i/2") return {0.0, -0.5};
    if (t == "i" || t == "+i") return {0.0, 1.0};
    if (t == "-i") return {0.0, -1.0};

    // split "a+bi" / "a-bi" at the last +/- not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto checked_stod = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw SpecError("bad numeric token '" + s + "'");
        }
        if (used != s.size()) throw SpecError("bad numeric token '" + s + "'");
        return v;
    };
    auto parse_imag = [&](std::string s) {
        if (s.empty() || s.back() != 'i') throw SpecError("bad imaginary token");
        s.pop_back();
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return checked_stod(s);
    };
    auto parse_real = [&](const std::string& s) { return checked_stod(s); };

    if (t.back() == 'i') {
        if (split == std::string::npos) return {0.0, parse_imag(t)};
        return {parse_real(t.substr(0, split)), parse_imag(t.substr(split))};
    }
    if (split != std::string::npos && t.find('i') != std::string::npos)
        throw SpecError("bad complex token '" + t + "'");
    return {parse_real(t), 0.0};
}

std::vector<cdouble> parse_roots(const std::string& list) {
    std::vector<cdouble> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(parse_complex(tok));
    }
    return out;
}

json to_json(const ModelSpec& spec) {
    return json{{"family", spec.family == Family::XXX ? "xxx" : "xxz"},
                {"twice_spin", spec.twice_spin},
                {"sites", spec.sites},
                {"magnons", spec.magnons},
                {"eta", spec.eta},
                {"beta", spec.beta}};
}

ModelSpec modelspec_from_json(const json& j) {
    ModelSpec s;
    s.family = j.at("family").get<std::string>() == "xxx" ? Family::XXX : Family::XXZ;
    s.twice_spin = j.at("twice_spin").get<int>();
    s.sites = j.at("sites").get<int>();
    s.magnons = j.at("magnons").get<int>();
    s.eta = j.at("eta").get<double>();
    s.beta = j.at("beta").get<double>();
    s.validate();
    return s;
}

json to_json(const RootSet& roots, int digits) {
    json arr = json::array();
    for (const auto& z : roots.roots) arr.push_back(complex_to_json(z, digits));
    return json{{"schema", schema_version},
                {"kind", "root_set"},
                {"roots", arr},
                {"canonical", roots.canonical_order}};
}

RootSet rootset_from_json(const json& j) {
    RootSet rs;
    for (const auto& v : j.at("roots")) rs.roots.push_back(complex_from_json(v));
    rs.canonical_order = j.value("canonical", false);
    return rs;
}

json to_json(const ClassificationResult& r) {
    json out{{"schema", schema_version},
             {"kind", "classification"},
             {"classification", to_string(r.kind)},
             {"residual_norm", r.residual_norm}};
    out["constraint_value"] =
        r.constraint_value ? complex_to_json(*r.constraint_value) : json(nullptr);
    return out;
}

ClassificationResult classification_from_json(const json& j) {
    ClassificationResult r;
    const auto k = j.at("classification").get<std::string>();
    if (k == "Regular") r.kind = SolutionKind::Regular;
    else if (k == "SingularPhysical") r.kind = SolutionKind::SingularPhysical;
    else if (k == "SingularUnphysical") r.kind = SolutionKind::SingularUnphysical;
    else r.kind = SolutionKind::NotASolution;
    r.residual_norm = j.at("residual_norm").get<double>();
    if (!j.at("constraint_value").is_null())
        r.constraint_value = complex_from_json(j.at("constraint_value"));
    return r;
}

json to_json(const SolutionSet& s) {
    json sols = json::array();
    for (const auto& [rs, cls] : s.solutions) {
        json roots = json::array();
        for (const auto& z : rs.roots) roots.push_back(complex_to_json(z));
        sols.push_back(json{{"roots", roots}, {"classification", to_json(cls)}});
    }
    return json{{"schema", schema_version}, {"kind", "solution_set"},
                {"model", to_json(s.spec)}, {"solutions", sols},
                {"seeds_tried", s.seeds_tried}, {"failures", s.failures}};
}

json to_json(const TwistSeries& s) {
    json base = json::array();
    for (const auto& b : s.base_values) base.push_back(complex_to_json(b));
    json coeffs = json::array();
    for (const auto& row : s.coefficients) {
        json r = json::array();
        for (const auto& c : row) r.push_back(complex_to_json(c));
        coeffs.push_back(r);
    }
    return json{{"schema", schema_version}, {"kind", "twist_series"},
                {"model", to_json(s.spec)},  {"order", s.order},
                {"digits", s.digits},        {"base", base},
                {"coefficients", coeffs}};
}

TwistSeries twistseries_from_json(const json& j) {
    TwistSeries s;
    s.spec = modelspec_from_json(j.at("model"));
    s.order = j.at("order").get<int>();
    s.digits = j.at("digits").get<int>();
    for (const auto& b : j.at("base")) s.base_values.push_back(complexdec_from_json(b));
    for (const auto& row : j.at("coefficients")) {
        std::vector<ComplexDec> r;
        for (const auto& c : row) r.push_back(complexdec_from_json(c));
        s.coefficients.push_back(std::move(r));
    }
    // rebuild the decomposition from the base values
    const int sl = s.spec.string_length();
    s.base.string_part = string_values(s.spec);
    for (std::size_t k = sl; k < s.base_values.size(); ++k)
        s.base.remainder.roots.push_back(s.base_values[k].to_cdouble());
    s.base.remainder = canonicalize(s.base.remainder);
    return s;
}

json to_json(const FirstOrderShift& s) {
    json rem = json::array();
    for (const auto& r : s.remainder) rem.push_back(complex_to_json(r));
    return json{{"schema", schema_version},
                {"kind", "first_order"},
                {"digits", s.digits},
                {"common", complex_to_json(s.common)},
                {"remainder_shifts", rem}};
}

json to_json(const CensusReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(json{{"magnons", row.magnons},
                            {"regular", row.n_regular},
                            {"singular_physical", row.n_singular_physical},
                            {"singular_unphysical", row.n_singular_unphysical},
                            {"expected", row.expected},
                            {"seeds_tried", row.seeds_tried},
                            {"complete", row.complete}});
    }
    return json{{"schema", schema_version},
                {"kind", "census"},
                {"sites", r.sites},
                {"rows", rows},
                {"weighted_state_count", r.weighted_state_count()},
                {"hilbert_dimension", 1L << r.sites},
                {"all_complete", r.all_complete}};
}

CensusReport census_from_json(const json& j) {
    CensusReport r;
    r.sites = j.at("sites").get<int>();
    r.all_complete = j.at("all_complete").get<bool>();
    for (const auto& row : j.at("rows")) {
        CensusRow cr;
        cr.magnons = row.at("magnons").get<int>();
        cr.n_regular = row.at("regular").get<int>();
        cr.n_singular_physical = row.at("singular_physical").get<int>();
        cr.n_singular_unphysical = row.at("singular_unphysical").get<int>();
        cr.expected = row.at("expected").get<long>();
        cr.seeds_tried = row.at("seeds_tried").get<long>();
        cr.complete = row.at("complete").get<bool>();
        r.rows.push_back(std::move(cr));
    }
    return r;
}

json to_json(const ed::SpectrumReport& r) {
    json evals = json::array();
    for (double e : r.ed_eigenvalues) evals.push_back(fmt_double(e, 17));
    json matches = json::array();
    for (const auto& m : r.matches) {
        json roots = json::array();
        for (const auto& z : m.roots.roots) roots.push_back(complex_to_json(z));
        matches.push_back(json{{"roots", roots},
                               {"energy", fmt_double(m.energy, 17)},
                               {"ed_index", m.matched_ed_index},
                               {"abs_delta", m.abs_delta},
                               {"ambiguous", m.ambiguous}});
    }
    return json{{"schema", schema_version},
                {"kind", "spectrum"},
                {"sector_magnons", r.sector_magnons},
                {"ed_eigenvalues", evals},
                {"matches", matches},
                {"unmatched_ed", r.unmatched_ed},
                {"unmatched_bethe", r.unmatched_bethe}};
}

std::string table(const RootSet& roots) {
    std::ostringstream os;
    os << "  #            Re                    Im\n";
    for (std::size_t j = 0; j < roots.size(); ++j) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "%3zu  %20.15f  %20.15f\n", j + 1, roots.roots[j].real(),
                      roots.roots[j].imag());
        os << buf;
    }
    return os.str();
}

std::string table(const ClassificationResult& r) {
    std::ostringstream os;
    os << "classification : " << to_string(r.kind) << "\n";
    os << "residual norm  : " << fmt_double(r.residual_norm, 6) << "\n";
    if (r.constraint_value)
        os << "constraint LHS : (" << fmt_double(r.constraint_value->real(), 15) << ", "
           << fmt_double(r.constraint_value->imag(), 15) << ")\n";
    return os.str();
}

std::string table(const SolutionSet& s) {
    std::ostringstream os;
    os << "solutions: " << s.solutions.size() << "  (seeds tried " << s.seeds_tried
       << ", failures " << s.failures << ")\n";
    for (const auto& [rs, cls] : s.solutions) {
        os << "- " << to_string(cls.kind) << "  residual " << fmt_double(cls.residual_norm, 3)
           << "\n";
        os << table(rs);
    }
    return os.str();
}

std::string table(const TwistSeries& s) {
    std::ostringstream os;
    os << "twist series to order " << s.order << " (" << s.digits << " digits)\n";
    for (std::size_t j = 0; j < s.coefficients.size(); ++j) {
        os << "lambda_" << (j + 1) << " = (" << s.base_values[j].re << ", "
           << s.base_values[j].im << ")\n";
        for (int l = 1; l <= s.order; ++l) {
            const auto& c = s.coefficients[j][l - 1];
            os << "  c^(" << l << ") = (" << c.re << ", " << c.im << ")\n";
        }
    }
    return os.str();
}

std::string table(const CensusReport& r) {
    std::ostringstream os;
    os << "census N=" << r.sites << "\n";
    os << "  M   regular  sing.phys  sing.unphys  expected  complete  seeds\n";
    for (const auto& row : r.rows) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "%3d  %8d  %9d  %11d  %8ld  %8s  %5ld\n", row.magnons,
                      row.n_regular, row.n_singular_physical, row.n_singular_unphysical,
                      row.expected, row.complete ? "yes" : "NO", row.seeds_tried);
        os << buf;
    }
    os << "weighted state count " << r.weighted_state_count() << " / " << (1L << r.sites) << "\n";
    return os.str();
}

std::string table(const ed::SpectrumReport& r) {
    std::ostringstream os;
    os << "sector M=" << r.sector_magnons << ": " << r.ed_eigenvalues.size() << " levels\n";
    for (std::size_t e = 0; e < r.ed_eigenvalues.size(); ++e) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "%4zu  %20.15f\n", e, r.ed_eigenvalues[e]);
        os << buf;
    }
    os << "matched " << r.matches.size() << ", unmatched ED " << r.unmatched_ed.size()
       << ", unmatched Bethe " << r.unmatched_bethe.size() << "\n";
    return os.str();
}

void emit(const json& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw NumericError("cannot open output file " + out_path);
    f << payload.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw NumericError("cannot open output file " + out_path);
    f << text;
}

} // namespace tbethe::io
