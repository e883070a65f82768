#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tbethe/aba.hpp"
#include "tbethe/census.hpp"
#include "tbethe/ed.hpp"
#include "tbethe/io.hpp"
#include "tbethe/model_core.hpp"
#include "tbethe/root_solver.hpp"
#include "tbethe/twist_flow.hpp"

namespace py = pybind11;
using namespace tbethe;

namespace {

Precision prec_of(int digits) {
    return digits > 0 ? Precision::decimal(digits) : Precision::machine();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Twisted Bethe equations for XXX/XXZ spin chains: solving, "
              "classification of singular solutions, twist expansions and the "
              "exact-diagonalization cross-checks.";

    py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::enum_<Family>(m, "Family").value("XXX", Family::XXX).value("XXZ", Family::XXZ);

    py::enum_<SolutionKind>(m, "SolutionKind")
        .value("Regular", SolutionKind::Regular)
        .value("SingularPhysical", SolutionKind::SingularPhysical)
        .value("SingularUnphysical", SolutionKind::SingularUnphysical)
        .value("NotASolution", SolutionKind::NotASolution);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_static("xxx", &ModelSpec::xxx, py::arg("sites"), py::arg("magnons"),
                    py::arg("beta") = 0.0, py::arg("twice_spin") = 1)
        .def_static("xxz", &ModelSpec::xxz, py::arg("sites"), py::arg("magnons"), py::arg("eta"),
                    py::arg("beta") = 0.0, py::arg("twice_spin") = 1)
        .def_readwrite("family", &ModelSpec::family)
        .def_readwrite("twice_spin", &ModelSpec::twice_spin)
        .def_readwrite("sites", &ModelSpec::sites)
        .def_readwrite("magnons", &ModelSpec::magnons)
        .def_readwrite("eta", &ModelSpec::eta)
        .def_readwrite("beta", &ModelSpec::beta)
        .def_property_readonly("spin", &ModelSpec::spin)
        .def("validate", [](const ModelSpec& s) { s.validate(); });

    py::class_<RootSet>(m, "RootSet")
        .def(py::init<>())
        .def(py::init<std::vector<cdouble>, bool>(), py::arg("roots"),
             py::arg("canonical") = false)
        .def_readwrite("roots", &RootSet::roots)
        .def_readonly("canonical_order", &RootSet::canonical_order)
        .def("__len__", &RootSet::size)
        .def("__repr__", [](const RootSet& r) {
            std::string s = "RootSet([";
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j) s += ", ";
                s += std::to_string(r.roots[j].real()) + (r.roots[j].imag() < 0 ? "-" : "+") +
                     std::to_string(std::abs(r.roots[j].imag())) + "j";
            }
            return s + "])";
        });
    py::implicitly_convertible<std::vector<cdouble>, RootSet>();

    py::class_<SingularDecomposition>(m, "SingularDecomposition")
        .def_readonly("string_part", &SingularDecomposition::string_part)
        .def_readonly("remainder", &SingularDecomposition::remainder);

    py::class_<ClassificationResult>(m, "ClassificationResult")
        .def_readonly("kind", &ClassificationResult::kind)
        .def_readonly("constraint_value", &ClassificationResult::constraint_value)
        .def_readonly("residual_norm", &ClassificationResult::residual_norm);

    py::class_<DetectionResult>(m, "DetectionResult")
        .def_property_readonly("is_singular",
                               [](const DetectionResult& d) { return d.is_singular_candidate(); })
        .def_readonly("decomposition", &DetectionResult::decomposition)
        .def_readonly("diagnostics", &DetectionResult::diagnostics);

    py::class_<Tolerances>(m, "Tolerances")
        .def(py::init<>())
        .def_readwrite("detection", &Tolerances::detection)
        .def_readwrite("solution", &Tolerances::solution);

    m.def("canonicalize", &tbethe::canonicalize);
    m.def("string_values", &string_values);
    m.def("bethe_residual", &bethe_residual);
    m.def("bethe_residual_norm", &bethe_residual_norm);
    m.def("reduced_residual", &reduced_residual);
    m.def("reduced_residual_norm", &reduced_residual_norm);
    m.def("detect_singular", &detect_singular, py::arg("spec"), py::arg("roots"),
          py::arg("detection_tol") = 1e-8);
    m.def(
        "physical_constraint",
        [](const ModelSpec& spec, const SingularDecomposition& dec, double tol) {
            auto r = physical_constraint(spec, dec, tol);
            return py::make_tuple(r.lhs, r.physical);
        },
        py::arg("spec"), py::arg("decomposition"), py::arg("tol") = 1e-8);
    m.def("product_identity", &product_identity);
    m.def("classify", &classify, py::arg("spec"), py::arg("roots"),
          py::arg("tolerances") = Tolerances{});
    m.def("energy", py::overload_cast<const ModelSpec&, const RootSet&>(&energy));
    m.def("energy_singular",
          py::overload_cast<const ModelSpec&, const SingularDecomposition&>(&energy));

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &SolveOptions::max_iterations)
        .def_readwrite("residual_tolerance", &SolveOptions::residual_tolerance)
        .def_readwrite("step_damping", &SolveOptions::step_damping)
        .def_readwrite("seed_count", &SolveOptions::seed_count)
        .def_readwrite("dedup_distance", &SolveOptions::dedup_distance)
        .def_readwrite("random_seed", &SolveOptions::random_seed)
        .def_readwrite("threads", &SolveOptions::threads);

    py::class_<SolutionSet>(m, "SolutionSet")
        .def_readonly("solutions", &SolutionSet::solutions)
        .def_readonly("spec", &SolutionSet::spec)
        .def_readonly("seeds_tried", &SolutionSet::seeds_tried)
        .def_readonly("failures", &SolutionSet::failures);

    m.def(
        "newton_solve",
        [](const ModelSpec& spec, const RootSet& seed, const SolveOptions& opts, int digits) {
            auto res = newton_solve(spec, seed, opts, prec_of(digits));
            if (!res.ok()) throw NumericError("newton did not converge");
            return *res.roots;
        },
        py::arg("spec"), py::arg("seed"), py::arg("options") = SolveOptions{},
        py::arg("digits") = 0);
    m.def("solve_reduced", &solve_reduced, py::arg("spec"), py::arg("options") = SolveOptions{});
    m.def("enumerate_solutions", &enumerate_solutions, py::arg("spec"),
          py::arg("options") = SolveOptions{}, py::arg("warm_starts") = std::vector<RootSet>{});

    py::class_<ComplexDec>(m, "ComplexDec")
        .def_readonly("re", &ComplexDec::re)
        .def_readonly("im", &ComplexDec::im)
        .def("__complex__", &ComplexDec::to_cdouble)
        .def("__repr__",
             [](const ComplexDec& c) { return "(" + c.re + ", " + c.im + ")"; });

    py::class_<TwistSeries>(m, "TwistSeries")
        .def_readonly("spec", &TwistSeries::spec)
        .def_readonly("order", &TwistSeries::order)
        .def_readonly("digits", &TwistSeries::digits)
        .def_readonly("base_values", &TwistSeries::base_values)
        .def_readonly("coefficients", &TwistSeries::coefficients)
        .def("coefficient", &TwistSeries::coefficient, py::arg("root"), py::arg("order"));

    py::class_<FirstOrderShift>(m, "FirstOrderShift")
        .def_readonly("common", &FirstOrderShift::common)
        .def_readonly("remainder", &FirstOrderShift::remainder)
        .def_property_readonly("common_value", &FirstOrderShift::common_value);

    m.def(
        "first_order_correction",
        [](const ModelSpec& spec, const SingularDecomposition& dec, int digits) {
            return first_order_correction(spec, dec, prec_of(digits));
        },
        py::arg("spec"), py::arg("decomposition"), py::arg("digits") = 40);
    m.def(
        "expand_series",
        [](const ModelSpec& spec, const SingularDecomposition& dec, int order, int digits) {
            return expand_series(spec, dec, order, prec_of(digits));
        },
        py::arg("spec"), py::arg("decomposition"), py::arg("order"), py::arg("digits") = 40);
    m.def("evaluate_series", &evaluate_series);
    m.def("series_residual", &series_residual);
    m.def("product_identity_on_series", &product_identity_on_series);

    py::class_<HomotopyPoint>(m, "HomotopyPoint")
        .def_readonly("beta", &HomotopyPoint::beta)
        .def_readonly("roots", &HomotopyPoint::roots);
    m.def(
        "homotopy_track",
        [](const ModelSpec& spec, const RootSet& start, double beta_end, int steps,
           const SolveOptions& opts, int digits) {
            return homotopy_track(spec, start, beta_end, steps, opts, prec_of(digits));
        },
        py::arg("spec"), py::arg("start"), py::arg("beta_end"), py::arg("steps") = 12,
        py::arg("options") = SolveOptions{}, py::arg("digits") = 0);
    py::class_<EpsilonReg>(m, "EpsilonReg")
        .def(py::init([](double eps, cdouble c) {
                 return EpsilonReg{eps, c};
             }),
             py::arg("epsilon"), py::arg("c") = cdouble(0))
        .def_readwrite("epsilon", &EpsilonReg::epsilon)
        .def_readwrite("c", &EpsilonReg::c);
    m.def(
        "epsilon_constraint_check",
        [](const ModelSpec& spec, const SingularDecomposition& dec,
           const std::vector<double>& epsilons, int digits) {
            return epsilon_constraint_check(spec, dec, epsilons, prec_of(digits));
        },
        py::arg("spec"), py::arg("decomposition"), py::arg("epsilons"), py::arg("digits") = 40);
    m.def("extrapolate_to_zero", &extrapolate_to_zero);

    // exact diagonalization
    auto ed_mod = m.def_submodule("ed", "exact-diagonalization oracle");
    ed_mod.def("build_hamiltonian", &ed::build_hamiltonian, py::arg("sites"), py::arg("beta"),
               py::arg("size_cap") = 14);
    ed_mod.def("sector_basis", &ed::sector_basis);
    ed_mod.def(
        "sector_spectrum",
        [](int sites, int magnons, double beta) {
            return ed::sector_spectrum(sites, magnons, beta).eigenvalues;
        },
        py::arg("sites"), py::arg("magnons"), py::arg("beta") = 0.0);
    ed_mod.def("eigvec_overlap", &ed::eigvec_overlap);
    ed_mod.def("sz_total", &ed::sz_total);
    ed_mod.def("sx_total", &ed::sx_total);
    ed_mod.def("lowering", &ed::lowering);

    py::class_<ed::BetheLevel>(ed_mod, "BetheLevel")
        .def(py::init([](const RootSet& r, int mm, double e) {
                 return ed::BetheLevel{r, mm, e};
             }),
             py::arg("roots"), py::arg("magnons"), py::arg("energy"))
        .def_readonly("roots", &ed::BetheLevel::roots)
        .def_readonly("magnons", &ed::BetheLevel::magnons)
        .def_readonly("energy", &ed::BetheLevel::energy);
    py::class_<ed::SpectrumMatch>(ed_mod, "SpectrumMatch")
        .def_readonly("energy", &ed::SpectrumMatch::energy)
        .def_readonly("matched_ed_index", &ed::SpectrumMatch::matched_ed_index)
        .def_readonly("abs_delta", &ed::SpectrumMatch::abs_delta)
        .def_readonly("ambiguous", &ed::SpectrumMatch::ambiguous);
    py::class_<ed::SpectrumReport>(ed_mod, "SpectrumReport")
        .def_readonly("sector_magnons", &ed::SpectrumReport::sector_magnons)
        .def_readonly("ed_eigenvalues", &ed::SpectrumReport::ed_eigenvalues)
        .def_readonly("matches", &ed::SpectrumReport::matches)
        .def_readonly("unmatched_ed", &ed::SpectrumReport::unmatched_ed)
        .def_readonly("unmatched_bethe", &ed::SpectrumReport::unmatched_bethe)
        .def("complete", &ed::SpectrumReport::complete);
    ed_mod.def("match_spectrum", &ed::match_spectrum, py::arg("sites"), py::arg("magnons"),
               py::arg("beta"), py::arg("levels"), py::arg("threshold") = 1e-8);

    // algebraic Bethe ansatz
    auto aba_mod = m.def_submodule("aba", "monodromy, transfer matrix, Bethe vectors");
    py::enum_<aba::Entry>(aba_mod, "Entry")
        .value("A", aba::Entry::A)
        .value("B", aba::Entry::B)
        .value("C", aba::Entry::C)
        .value("D", aba::Entry::D);
    py::class_<aba::StateVector>(aba_mod, "StateVector")
        .def_readonly("amplitudes", &aba::StateVector::amplitudes)
        .def_readonly("magnon_number", &aba::StateVector::magnon_number);
    aba_mod.def("monodromy_entry", &aba::monodromy_entry, py::arg("sites"), py::arg("entry"),
                py::arg("lam"), py::arg("size_cap") = 12);
    aba_mod.def("transfer_matrix", &aba::transfer_matrix, py::arg("sites"), py::arg("lam"),
                py::arg("beta"), py::arg("size_cap") = 12);
    aba_mod.def("hamiltonian_from_transfer", &aba::hamiltonian_from_transfer, py::arg("sites"),
                py::arg("size_cap") = 12);
    aba_mod.def("bethe_vector", &aba::bethe_vector, py::arg("sites"), py::arg("roots"),
                py::arg("size_cap") = 14);
    aba_mod.def("bethe_vector_unchecked", &aba::bethe_vector_unchecked, py::arg("sites"),
                py::arg("roots"), py::arg("size_cap") = 14);
    py::class_<aba::LimitVector>(aba_mod, "LimitVector")
        .def_readonly("vector", &aba::LimitVector::vector)
        .def_readonly("extrapolation_error", &aba::LimitVector::extrapolation_error);
    aba_mod.def("singular_limit_vector", &aba::singular_limit_vector, py::arg("spec"),
                py::arg("series"), py::arg("size_cap") = 14);
    py::class_<aba::EigenCheckPoint>(aba_mod, "EigenCheckPoint")
        .def_readonly("test_point", &aba::EigenCheckPoint::test_point)
        .def_readonly("rayleigh", &aba::EigenCheckPoint::rayleigh)
        .def_readonly("residual", &aba::EigenCheckPoint::residual);
    py::class_<aba::EigenCheckReport>(aba_mod, "EigenCheckReport")
        .def_readonly("points", &aba::EigenCheckReport::points)
        .def_readonly("max_residual", &aba::EigenCheckReport::max_residual);
    aba_mod.def("transfer_eigenvalue_check", &aba::transfer_eigenvalue_check, py::arg("sites"),
                py::arg("roots"), py::arg("beta"), py::arg("test_points"),
                py::arg("size_cap") = 12);

    // census
    py::class_<CensusRow>(m, "CensusRow")
        .def_readonly("magnons", &CensusRow::magnons)
        .def_readonly("n_regular", &CensusRow::n_regular)
        .def_readonly("n_singular_physical", &CensusRow::n_singular_physical)
        .def_readonly("n_singular_unphysical", &CensusRow::n_singular_unphysical)
        .def_readonly("expected", &CensusRow::expected)
        .def_readonly("seeds_tried", &CensusRow::seeds_tried)
        .def_readonly("complete", &CensusRow::complete);
    py::class_<CensusReport>(m, "CensusReport")
        .def_readonly("sites", &CensusReport::sites)
        .def_readonly("rows", &CensusReport::rows)
        .def_readonly("all_complete", &CensusReport::all_complete)
        .def("weighted_state_count", &CensusReport::weighted_state_count);
    py::class_<CensusEdCheck>(m, "CensusEdCheck")
        .def_readonly("all_matched", &CensusEdCheck::all_matched)
        .def_readonly("sector_reports", &CensusEdCheck::sector_reports);
    m.def("binomial", &binomial);
    m.def("run_census", &run_census, py::arg("sites"), py::arg("options") = SolveOptions{},
          py::arg("size_cap") = 10);
    m.def("multiplet_sum_check", &multiplet_sum_check);
    m.def("census_ed_check", &census_ed_check, py::arg("report"), py::arg("threshold") = 1e-8);

    m.def("parse_roots", &io::parse_roots);
    m.attr("__version__") = "1.0.0";
}
