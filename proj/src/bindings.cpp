#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tatlab/critical.hpp"
#include "tatlab/dynamics.hpp"
#include "tatlab/field.hpp"
#include "tatlab/hodge.hpp"
#include "tatlab/paths.hpp"

namespace py = pybind11;
using namespace tatlab;

namespace {

Polynomial make_polynomial(int nvars,
                           const std::vector<std::pair<double, std::vector<int>>>& terms) {
    std::vector<Polynomial::Term> ts;
    ts.reserve(terms.size());
    for (const auto& [c, powers] : terms) ts.push_back(Polynomial::Term{c, powers});
    return Polynomial(nvars, std::move(ts));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Price-adjustment dynamics laboratory: fields, decomposition, "
              "critical points, noisy dynamics and path actions";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Box>(m, "Box")
        .def(py::init<Vec, Vec>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &Box::lo)
        .def_readonly("hi", &Box::hi)
        .def("contains", &Box::contains, py::arg("p"), py::arg("slack") = 0.0)
        .def_property_readonly("dim", &Box::dim);

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init(&make_polynomial), py::arg("nvars"), py::arg("terms"))
        .def("eval", &Polynomial::eval)
        .def("derivative", &Polynomial::derivative)
        .def_property_readonly("nvars", &Polynomial::nvars);

    py::class_<DoubleWellParams>(m, "DoubleWellParams")
        .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("k"))
        .def(py::init<double, double, double, Vec>(), py::arg("a"), py::arg("b"), py::arg("k"),
             py::arg("reference_point"))
        .def_readwrite("a", &DoubleWellParams::a)
        .def_readwrite("b", &DoubleWellParams::b)
        .def_readwrite("k", &DoubleWellParams::k)
        .def_readwrite("reference_point", &DoubleWellParams::reference_point)
        .def("two_well", &DoubleWellParams::two_well)
        .def("well_abscissa", &DoubleWellParams::well_abscissa)
        .def("well", &DoubleWellParams::well, py::arg("sign"))
        .def("saddle", &DoubleWellParams::saddle);

    py::class_<FieldSpec>(m, "FieldSpec")
        .def_property_readonly("dimension", &FieldSpec::dimension)
        .def_property_readonly("parameters", &FieldSpec::parameters)
        .def_property_readonly("family", &FieldSpec::family)
        .def_property_readonly("domain", &FieldSpec::domain)
        .def("has_potential", &FieldSpec::has_potential)
        .def("has_solenoidal", &FieldSpec::has_solenoidal)
        .def("has_jacobian", &FieldSpec::has_jacobian)
        .def("evaluate", &FieldSpec::evaluate)
        .def("potential", &FieldSpec::potential_at)
        .def("potential_gradient", &FieldSpec::potential_gradient_at)
        .def("solenoidal", &FieldSpec::solenoidal_at)
        .def("jacobian", &FieldSpec::jacobian_at)
        .def("with_parameters", &FieldSpec::with_parameters);

    m.def("make_double_well_field",
          py::overload_cast<const DoubleWellParams&>(&make_double_well_field));
    m.def("make_double_well_field",
          py::overload_cast<const DoubleWellParams&, const Box&>(&make_double_well_field),
          py::arg("params"), py::arg("box"));
    m.def("make_polynomial_field", &make_polynomial_field, py::arg("components"),
          py::arg("potential") = std::nullopt, py::arg("solenoidal") = std::nullopt,
          py::arg("box"));

    py::enum_<JacobianMode>(m, "JacobianMode")
        .value("ANALYTIC", JacobianMode::Analytic)
        .value("FINITE_DIFFERENCE", JacobianMode::FiniteDifference);

    m.def("eval_excess_demand", &eval_excess_demand);
    m.def("eval_jacobian", &eval_jacobian, py::arg("field"), py::arg("p"),
          py::arg("mode") = JacobianMode::Analytic, py::arg("step_rel") = 1e-5);
    m.def("asymmetry_norm", &asymmetry_norm, py::arg("field"), py::arg("p"),
          py::arg("step_rel") = 1e-5);

    py::enum_<Stability>(m, "Stability")
        .value("STABLE", Stability::Stable)
        .value("SADDLE", Stability::Saddle)
        .value("UNSTABLE", Stability::Unstable)
        .value("MARGINAL", Stability::Marginal);

    py::class_<CriticalPoint>(m, "CriticalPoint")
        .def_readonly("location", &CriticalPoint::location)
        .def_readonly("eigenvalues", &CriticalPoint::eigenvalues)
        .def_readonly("index", &CriticalPoint::index)
        .def_readonly("stability", &CriticalPoint::stability)
        .def_readonly("residual", &CriticalPoint::residual)
        .def("__repr__", [](const CriticalPoint& cp) {
            std::string s = "CriticalPoint(index=" + std::to_string(cp.index) + ", " +
                            to_string(cp.stability) + ")";
            return s;
        });

    m.def("find_critical_points", &find_critical_points, py::arg("field"), py::arg("box"),
          py::arg("multistart_per_axis") = 16, py::arg("tol") = 1e-10);
    m.def("classify", &classify);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<Box, std::vector<int>>(), py::arg("box"), py::arg("resolution"))
        .def_readonly("box", &GridSpec::box)
        .def_readonly("resolution", &GridSpec::resolution)
        .def("total_nodes", &GridSpec::total_nodes)
        .def("spacing", &GridSpec::spacing)
        .def("node", &GridSpec::node)
        .def("unflatten", &GridSpec::unflatten);

    py::class_<BasinMap>(m, "BasinMap")
        .def_readonly("grid", &BasinMap::grid)
        .def_readonly("labels", &BasinMap::labels);

    m.def("basin_of_attraction", &basin_of_attraction, py::arg("field"), py::arg("points"),
          py::arg("grid"), py::arg("capture_radius"), py::arg("t_max"), py::arg("dt") = 1e-2);

    py::class_<MatchedPair>(m, "MatchedPair")
        .def_readonly("base", &MatchedPair::base)
        .def_readonly("variant", &MatchedPair::variant)
        .def_readonly("displacement", &MatchedPair::displacement)
        .def_readonly("index_changed", &MatchedPair::index_changed);

    py::class_<ScenarioComparison>(m, "ScenarioComparison")
        .def_readonly("base_points", &ScenarioComparison::base_points)
        .def_readonly("variant_points", &ScenarioComparison::variant_points)
        .def_readonly("pairs", &ScenarioComparison::pairs)
        .def_readonly("unmatched_base", &ScenarioComparison::unmatched_base)
        .def_readonly("unmatched_variant", &ScenarioComparison::unmatched_variant);

    m.def("compare_scenarios", &compare_scenarios, py::arg("field"), py::arg("params"),
          py::arg("params_prime"), py::arg("box"), py::arg("tol") = 1e-10,
          py::arg("multistart_per_axis") = 16);

    py::class_<DecompositionResult>(m, "DecompositionResult")
        .def_readonly("grid", &DecompositionResult::grid)
        .def_readonly("potential", &DecompositionResult::potential)
        .def_readonly("solenoidal", &DecompositionResult::solenoidal)
        .def_readonly("field_samples", &DecompositionResult::field_samples)
        .def_readonly("reconstruction_residual", &DecompositionResult::reconstruction_residual)
        .def_readonly("divergence_residual", &DecompositionResult::divergence_residual)
        .def_readonly("solver_residual", &DecompositionResult::solver_residual)
        .def_readonly("solver_iterations", &DecompositionResult::solver_iterations)
        .def_readonly("solver", &DecompositionResult::solver)
        .def_readonly("used_analytic_solenoidal", &DecompositionResult::used_analytic_solenoidal)
        .def_readonly("gauge_note", &DecompositionResult::gauge_note);

    m.def("decompose_on_grid", &decompose_on_grid, py::arg("field"), py::arg("grid"),
          py::arg("poisson_tol") = 1e-10, py::arg("max_iterations") = 20000);
    m.def("check_divergence_free", &check_divergence_free);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](Mat cov, std::uint64_t seed) {
                 NoiseSpec n{std::move(cov), seed};
                 n.validate();
                 return n;
             }),
             py::arg("covariance"), py::arg("seed") = 0)
        .def_static("isotropic", &NoiseSpec::isotropic, py::arg("dim"), py::arg("epsilon"),
                    py::arg("seed") = 0)
        .def_readonly("covariance", &NoiseSpec::covariance)
        .def_readonly("seed", &NoiseSpec::seed);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("dt", &Trajectory::dt)
        .def_readonly("scheme", &Trajectory::scheme)
        .def_readonly("truncated", &Trajectory::truncated)
        .def_readonly("record_stride", &Trajectory::record_stride)
        .def("final_state", &Trajectory::final_state)
        .def("__len__", &Trajectory::size);

    m.def("integrate_deterministic", &integrate_deterministic, py::arg("field"), py::arg("p0"),
          py::arg("T"), py::arg("dt"), py::arg("record_stride") = 1);
    m.def("simulate_sde", &simulate_sde, py::arg("field"), py::arg("noise"), py::arg("p0"),
          py::arg("T"), py::arg("dt"), py::arg("record_stride") = 1);

    py::class_<TransitionEvent>(m, "TransitionEvent")
        .def_readonly("from_point", &TransitionEvent::from_point)
        .def_readonly("to_point", &TransitionEvent::to_point)
        .def_readonly("departure_time", &TransitionEvent::departure_time)
        .def_readonly("arrival_time", &TransitionEvent::arrival_time)
        .def_readonly("path_slice", &TransitionEvent::path_slice)
        .def_readonly("saddle_distances", &TransitionEvent::saddle_distances)
        .def_readonly("min_distance_to_saddle", &TransitionEvent::min_distance_to_saddle);

    m.def("detect_transitions", &detect_transitions, py::arg("traj"), py::arg("points"),
          py::arg("capture_radius"), py::arg("hysteresis_radius"));

    py::class_<MfptRow>(m, "MfptRow")
        .def_readonly("epsilon", &MfptRow::epsilon)
        .def_readonly("mean", &MfptRow::mean)
        .def_readonly("std_error", &MfptRow::std_error)
        .def_readonly("ensemble", &MfptRow::ensemble)
        .def_readonly("censored", &MfptRow::censored)
        .def_readonly("t_cap", &MfptRow::t_cap);

    py::class_<MfptTable>(m, "MfptTable")
        .def_readonly("rows", &MfptTable::rows)
        .def_readonly("passage_times", &MfptTable::passage_times);

    m.def("mean_first_passage", &mean_first_passage, py::arg("field"), py::arg("start"),
          py::arg("target"), py::arg("epsilons"), py::arg("ensemble"), py::arg("dt"),
          py::arg("t_cap"), py::arg("master_seed"), py::arg("capture_radius") = 0.1,
          py::arg("workers") = 1);
    m.def("arrhenius_slope", &arrhenius_slope);
    m.def("energy_identity_check", &energy_identity_check);

    py::class_<PiecewisePath>(m, "PiecewisePath")
        .def_static("geometric", &PiecewisePath::geometric, py::arg("nodes"))
        .def_static("timed", &PiecewisePath::timed, py::arg("nodes"), py::arg("total_time"))
        .def_static("from_trajectory", &PiecewisePath::from_trajectory)
        .def_readonly("nodes", &PiecewisePath::nodes)
        .def_readonly("times", &PiecewisePath::times)
        .def("reversed", &PiecewisePath::reversed)
        .def("__len__", &PiecewisePath::size);

    m.def("line_integral_solenoidal",
          py::overload_cast<const PiecewisePath&, const FieldSpec&>(&line_integral_solenoidal));
    m.def("positivity_margin", &positivity_margin);

    py::class_<ActionValue>(m, "ActionValue")
        .def_readonly("total", &ActionValue::total)
        .def_readonly("per_segment", &ActionValue::per_segment)
        .def_readonly("node_residual", &ActionValue::node_residual)
        .def_readonly("epsilon", &ActionValue::epsilon);

    m.def("onsager_machlup_action", &onsager_machlup_action, py::arg("path"), py::arg("field"),
          py::arg("epsilon"));

    py::class_<MinimizeActionResult>(m, "MinimizeActionResult")
        .def_readonly("path", &MinimizeActionResult::path)
        .def_readonly("action", &MinimizeActionResult::action)
        .def_readonly("converged", &MinimizeActionResult::converged)
        .def_readonly("iterations", &MinimizeActionResult::iterations);

    m.def("minimize_action", &minimize_action, py::arg("field"), py::arg("epsilon"),
          py::arg("start"), py::arg("end"), py::arg("n_nodes"), py::arg("total_time"),
          py::arg("max_iterations") = 20000, py::arg("tol") = 1e-10,
          py::arg("ridge_hint") = std::nullopt);

    py::class_<LPathReport>(m, "LPathReport")
        .def_readonly("path_a", &LPathReport::path_a)
        .def_readonly("path_b", &LPathReport::path_b)
        .def_readonly("integral_a_closed", &LPathReport::integral_a_closed)
        .def_readonly("integral_b_closed", &LPathReport::integral_b_closed)
        .def_readonly("integral_a_quadrature", &LPathReport::integral_a_quadrature)
        .def_readonly("integral_b_quadrature", &LPathReport::integral_b_quadrature)
        .def_readonly("margin_a", &LPathReport::margin_a)
        .def_readonly("margin_b", &LPathReport::margin_b)
        .def_readonly("potential_drop", &LPathReport::potential_drop)
        .def_readonly("favored", &LPathReport::favored);

    m.def("l_path_report", &l_path_report);

    m.attr("__version__") = "0.1.0";
}
