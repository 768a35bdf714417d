// pybind11 bindings for the serrinlab core library.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "serrinlab/errors.hpp"
#include "serrinlab/identities.hpp"
#include "serrinlab/quadrature.hpp"
#include "serrinlab/runconfig.hpp"
#include "serrinlab/tolerances.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace geo = serrinlab::geometry;
namespace fem = serrinlab::fem2d;
namespace rad = serrinlab::radial;
namespace idn = serrinlab::identities;
namespace cfg = serrinlab::config;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Semilinear Dirichlet problems on constant-curvature space forms: "
      "radial and P1 finite-element solvers with integral-identity and "
      "rigidity checkers";

  // ------------------------------------------------------------ errors ---
  // Register the base first so the derived translators, which pybind11
  // prepends, run before it.
  auto base = py::register_exception<serrinlab::Error>(m, "SerrinlabError");
  py::register_exception<serrinlab::InadmissibleDomain>(m, "InadmissibleDomain",
                                                        base.ptr());
  py::register_exception<serrinlab::DegenerateAnnulus>(m, "DegenerateAnnulus",
                                                       base.ptr());
  py::register_exception<serrinlab::NonConvergence>(m, "NonConvergence",
                                                    base.ptr());
  py::register_exception<serrinlab::NewtonDivergence>(m, "NewtonDivergence",
                                                      base.ptr());
  py::register_exception<serrinlab::SingularStiffness>(m, "SingularStiffness",
                                                       base.ptr());
  py::register_exception<serrinlab::MeshFailure>(m, "MeshFailure", base.ptr());
  py::register_exception<serrinlab::NotAnnular>(m, "NotAnnular", base.ptr());
  py::register_exception<serrinlab::NotSingleBoundary>(m, "NotSingleBoundary",
                                                       base.ptr());
  py::register_exception<serrinlab::DegenerateDenominator>(
      m, "DegenerateDenominator", base.ptr());
  py::register_exception<serrinlab::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<serrinlab::IoError>(m, "IoError", base.ptr());
  py::register_exception<serrinlab::InvalidArgument>(m, "InvalidArgument",
                                                     base.ptr());

  // ---------------------------------------------------------- geometry ---
  py::class_<geo::SpaceForm>(m, "SpaceForm")
      .def(py::init<int, double>(), "n"_a, "k"_a)
      .def_readonly("n", &geo::SpaceForm::n)
      .def_readonly("k", &geo::SpaceForm::k)
      .def("max_radius", &geo::SpaceForm::max_radius)
      .def("radius_admissible", &geo::SpaceForm::radius_admissible, "R"_a)
      .def("__repr__", [](const geo::SpaceForm& s) {
        std::ostringstream os;
        os << "SpaceForm(n=" << s.n << ", k=" << s.k << ")";
        return os.str();
      });

  py::class_<geo::RadialDomain>(m, "RadialDomain")
      .def_static("ball", &geo::RadialDomain::ball, "R"_a)
      .def_static("annulus", &geo::RadialDomain::annulus, "R_in"_a, "R_out"_a)
      .def_readonly("R_in", &geo::RadialDomain::R_in)
      .def_readonly("R_out", &geo::RadialDomain::R_out)
      .def("is_ball", &geo::RadialDomain::is_ball);

  py::class_<geo::Nonlinearity>(m, "Nonlinearity")
      .def(py::init<std::vector<double>>(), "coeffs"_a)
      .def_static("linear_family", &geo::Nonlinearity::linear_family, "sf"_a)
      .def_readonly("coeffs", &geo::Nonlinearity::coeffs)
      .def("__call__", &geo::Nonlinearity::operator(), "u"_a)
      .def("deriv", &geo::Nonlinearity::deriv, "u"_a)
      .def("antideriv", &geo::Nonlinearity::antideriv, "u"_a)
      .def("f0", &geo::Nonlinearity::f0)
      .def("degree", &geo::Nonlinearity::degree)
      .def("is_linear_family", &geo::Nonlinearity::is_linear_family, "sf"_a)
      .def("sup_deriv", &geo::Nonlinearity::sup_deriv, "lo"_a, "hi"_a)
      .def("fprime_bounded", &geo::Nonlinearity::fprime_bounded, "k"_a, "n"_a,
           "lo"_a, "hi"_a)
      .def("describe", &geo::Nonlinearity::describe)
      .def("__repr__", &geo::Nonlinearity::describe);

  py::class_<geo::Measures>(m, "Measures")
      .def_readonly("volume", &geo::Measures::volume)
      .def_readonly("boundary_areas", &geo::Measures::boundary_areas);

  m.def("validate_domain", &geo::validate_domain, "sf"_a, "dom"_a);
  m.def("warp", &geo::warp, "k"_a, "t"_a);
  m.def("warp_deriv", &geo::warp_deriv, "k"_a, "t"_a);
  m.def("conformal_factor", &geo::conformal_factor, "k"_a, "t"_a);
  m.def("sphere_mean_curvature", &geo::sphere_mean_curvature, "sf"_a, "R"_a);
  m.def("unit_sphere_area", &geo::unit_sphere_area, "n"_a);
  m.def("ball_measures", &geo::ball_measures, "sf"_a, "dom"_a);

  // ------------------------------------------------------------ radial ---
  py::class_<rad::BoundaryData>(m, "BoundaryData")
      .def_readonly("radius", &rad::BoundaryData::radius)
      .def_readonly("u", &rad::BoundaryData::u)
      .def_readonly("u_nu", &rad::BoundaryData::u_nu)
      .def_readonly("H", &rad::BoundaryData::H)
      .def_readonly("area", &rad::BoundaryData::area);

  py::class_<rad::RadialSolution>(m, "RadialSolution")
      .def_readonly("sf", &rad::RadialSolution::sf)
      .def_readonly("dom", &rad::RadialSolution::dom)
      .def_readonly("f", &rad::RadialSolution::f)
      .def_readonly("r", &rad::RadialSolution::r)
      .def_readonly("u", &rad::RadialSolution::u)
      .def_readonly("du", &rad::RadialSolution::du)
      .def_readonly("boundary", &rad::RadialSolution::boundary)
      .def_readonly("residual_max", &rad::RadialSolution::residual_max)
      .def_readonly("newton_iters", &rad::RadialSolution::newton_iters)
      .def("spacing", &rad::RadialSolution::spacing)
      .def("u_max", &rad::RadialSolution::u_max)
      .def("value_at", &rad::RadialSolution::value_at, "x"_a)
      .def("deriv_at", &rad::RadialSolution::deriv_at, "x"_a);

  py::class_<rad::ClosedForm>(m, "ClosedForm")
      .def_readonly("sol", &rad::ClosedForm::sol)
      .def_readonly("c0", &rad::ClosedForm::c0)
      .def_readonly("a", &rad::ClosedForm::a)
      .def_readonly("c1", &rad::ClosedForm::c1);

  py::class_<rad::GateReport>(m, "GateReport")
      .def_readonly("holds", &rad::GateReport::holds)
      .def_readonly("lhs", &rad::GateReport::lhs)
      .def_readonly("rhs", &rad::GateReport::rhs);

  m.def("solve_radial", &rad::solve_radial, "sf"_a, "dom"_a, "f"_a,
        "inner_value"_a, "grid_size"_a, "tol_scale"_a = 1e-12,
        "max_iters"_a = 50);
  m.def("closed_form_linear", &rad::closed_form_linear, "sf"_a, "dom"_a,
        "grid_size"_a = 256);
  m.def("rigidity_gate", &rad::rigidity_gate, "sf"_a, "R"_a, "f"_a,
        "psi_at_R"_a,
        "Ball-rigidity hypothesis gate: (n-1) f(0) h(R) / (n h'(R)) <= psi");

  // --------------------------------------------------------------- fem ---
  py::class_<fem::StarCurve>(m, "StarCurve")
      .def(py::init([](double base, std::vector<double> cos_coeffs,
                       std::vector<double> sin_coeffs) {
             return fem::StarCurve{base, std::move(cos_coeffs),
                                   std::move(sin_coeffs)};
           }),
           "base"_a, "cos_coeffs"_a = std::vector<double>{},
           "sin_coeffs"_a = std::vector<double>{})
      .def_static("circle", &fem::StarCurve::circle, "R"_a)
      .def_readonly("base", &fem::StarCurve::base)
      .def_readonly("cos_coeffs", &fem::StarCurve::cos_coeffs)
      .def_readonly("sin_coeffs", &fem::StarCurve::sin_coeffs)
      .def("r", &fem::StarCurve::r, "theta"_a)
      .def("dr", &fem::StarCurve::dr, "theta"_a)
      .def("ddr", &fem::StarCurve::ddr, "theta"_a)
      .def("min_radius", &fem::StarCurve::min_radius)
      .def("max_radius", &fem::StarCurve::max_radius)
      .def("is_circle", &fem::StarCurve::is_circle);

  py::class_<fem::PlanarDomain>(m, "PlanarDomain")
      .def(py::init<const geo::SpaceForm&, fem::StarCurve,
                    std::optional<fem::StarCurve>>(),
           "sf"_a, "outer"_a, "inner"_a = std::nullopt)
      .def_readonly("sf", &fem::PlanarDomain::sf)
      .def_readonly("outer", &fem::PlanarDomain::outer)
      .def_readonly("inner", &fem::PlanarDomain::inner)
      .def("has_inner", &fem::PlanarDomain::has_inner);

  m.def("boundary_curvature", &fem::boundary_curvature, "sf"_a, "curve"_a,
        "theta"_a, "outer_loop"_a);
  m.def("conformal_normal_component", &fem::conformal_normal_component,
        "sf"_a, "curve"_a, "theta"_a, "outer_loop"_a);

  py::class_<fem::Mesh2D>(m, "Mesh2D")
      .def_readonly("k", &fem::Mesh2D::k)
      .def_readonly("xy", &fem::Mesh2D::xy)
      .def_readonly("tris", &fem::Mesh2D::tris)
      .def_readonly("loops", &fem::Mesh2D::loops)
      .def_readonly("loop_theta", &fem::Mesh2D::loop_theta)
      .def_readonly("max_metric_edge", &fem::Mesh2D::max_metric_edge)
      .def("has_inner", &fem::Mesh2D::has_inner)
      .def("n_vertices", &fem::Mesh2D::n_vertices)
      .def("n_triangles", &fem::Mesh2D::n_triangles);

  py::class_<fem::MeshQuality>(m, "MeshQuality")
      .def_readonly("min_angle_deg", &fem::MeshQuality::min_angle_deg)
      .def_readonly("min_chart_area", &fem::MeshQuality::min_chart_area)
      .def_readonly("max_metric_edge", &fem::MeshQuality::max_metric_edge)
      .def_readonly("boundary_vertices", &fem::MeshQuality::boundary_vertices);

  m.def("build_mesh", &fem::build_mesh, "dom"_a, "target_h"_a);
  m.def("mesh_quality", &fem::mesh_quality, "mesh"_a);
  m.def("metric_s", &fem::metric_s, "k"_a, "r"_a);
  m.def("metric_sqrt_det", &fem::metric_sqrt_det, "k"_a, "r"_a);
  m.def("metric_edge_length", &fem::metric_edge_length, "k"_a, "p"_a, "q"_a);
  m.def(
      "mesh_to_text",
      [](const fem::Mesh2D& mesh) {
        std::ostringstream os;
        fem::save_mesh(mesh, os);
        return os.str();
      },
      "mesh"_a);
  m.def(
      "mesh_from_text",
      [](const std::string& text) {
        std::istringstream is(text);
        return fem::load_mesh(is);
      },
      "text"_a);

  py::class_<fem::ScalarField>(m, "ScalarField")
      .def(py::init([](std::vector<double> values) {
             return fem::ScalarField{std::move(values)};
           }),
           "values"_a)
      .def_readonly("values", &fem::ScalarField::values);

  py::class_<fem::SolveStats>(m, "SolveStats")
      .def_readonly("newton_iters", &fem::SolveStats::newton_iters)
      .def_readonly("residual_inf", &fem::SolveStats::residual_inf)
      .def_readonly("energy_trace", &fem::SolveStats::energy_trace);

  py::class_<fem::FemSolution>(m, "FemSolution")
      .def_readonly("u", &fem::FemSolution::u)
      .def_readonly("stats", &fem::FemSolution::stats);

  py::class_<fem::TraceSample>(m, "TraceSample")
      .def_readonly("vertex", &fem::TraceSample::vertex)
      .def_readonly("theta", &fem::TraceSample::theta)
      .def_readonly("weight", &fem::TraceSample::weight)
      .def_readonly("flux_moment", &fem::TraceSample::flux_moment)
      .def_readonly("u_nu", &fem::TraceSample::u_nu)
      .def_readonly("H", &fem::TraceSample::H)
      .def_readonly("X_nu", &fem::TraceSample::X_nu)
      .def_readonly("u", &fem::TraceSample::u);

  py::class_<fem::BoundaryTrace>(m, "BoundaryTrace")
      .def_readonly("loops", &fem::BoundaryTrace::loops);

  m.def("solve_fem", &fem::solve_fem, "dom"_a, "mesh"_a, "f"_a, "dirichlet"_a,
        "tol"_a = 1e-11, "max_iters"_a = 60);
  m.def("boundary_trace", &fem::boundary_trace, "dom"_a, "mesh"_a, "u"_a,
        "f"_a);

  // -------------------------------------------------------- identities ---
  py::enum_<idn::Verdict>(m, "Verdict")
      .value("PASS", idn::Verdict::pass)
      .value("FAIL", idn::Verdict::fail)
      .value("HYPOTHESIS_NOT_MET", idn::Verdict::hypothesis_not_met);

  py::class_<idn::IdentityReport>(m, "IdentityReport")
      .def_readonly("name", &idn::IdentityReport::name)
      .def_readonly("lhs", &idn::IdentityReport::lhs)
      .def_readonly("rhs", &idn::IdentityReport::rhs)
      .def_readonly("residual", &idn::IdentityReport::residual)
      .def_readonly("tolerance", &idn::IdentityReport::tolerance)
      .def_readonly("verdict", &idn::IdentityReport::verdict)
      .def_readonly("values", &idn::IdentityReport::values)
      .def_readonly("hypotheses", &idn::IdentityReport::hypotheses)
      .def_readonly("domain", &idn::IdentityReport::domain)
      .def_readonly("h_eff", &idn::IdentityReport::h_eff)
      .def("to_json", &idn::IdentityReport::to_json)
      .def_static("csv_header", &idn::IdentityReport::csv_header)
      .def("csv_row", &idn::IdentityReport::csv_row)
      .def("__repr__", [](const idn::IdentityReport& r) {
        return "IdentityReport(" + r.name + ": " + idn::to_string(r.verdict) +
               ")";
      });

  py::class_<idn::Sample>(m, "Sample")
      .def_readonly("weight", &idn::Sample::weight)
      .def_readonly("flux_moment", &idn::Sample::flux_moment)
      .def_readonly("u_nu", &idn::Sample::u_nu)
      .def_readonly("H", &idn::Sample::H)
      .def_readonly("u", &idn::Sample::u)
      .def_readonly("X_nu", &idn::Sample::X_nu);

  py::class_<idn::BoundaryComponent>(m, "BoundaryComponent")
      .def_readonly("tag", &idn::BoundaryComponent::tag)
      .def_readonly("samples", &idn::BoundaryComponent::samples)
      .def_readonly("area", &idn::BoundaryComponent::area)
      .def("integral_flux", &idn::BoundaryComponent::integral_flux)
      .def("integral", &idn::BoundaryComponent::integral, "g"_a)
      .def("mean_u_nu", &idn::BoundaryComponent::mean_u_nu)
      .def("max_dev_u_nu", &idn::BoundaryComponent::max_dev_u_nu);

  py::class_<idn::SolvedProblem>(m, "SolvedProblem")
      .def_static("from_radial", &idn::SolvedProblem::from_radial, "sol"_a)
      .def_static("from_fem", &idn::SolvedProblem::from_fem, "dom"_a, "mesh"_a,
                  "f"_a, "dirichlet"_a, "tol"_a = 1e-11)
      .def("sf", &idn::SolvedProblem::sf)
      .def("f", &idn::SolvedProblem::f)
      .def("n_components", &idn::SolvedProblem::n_components)
      .def("outer", &idn::SolvedProblem::outer)
      .def("inner", &idn::SolvedProblem::inner)
      .def("components", &idn::SolvedProblem::components)
      .def("is_radial", &idn::SolvedProblem::is_radial)
      .def("bulk_integral", &idn::SolvedProblem::bulk_integral, "g"_a)
      .def("volume", &idn::SolvedProblem::volume)
      .def("u_max", &idn::SolvedProblem::u_max)
      .def("u_min", &idn::SolvedProblem::u_min)
      .def("fprime_ok", &idn::SolvedProblem::fprime_ok)
      .def("fprime_sup", &idn::SolvedProblem::fprime_sup)
      .def("h_eff", &idn::SolvedProblem::h_eff)
      .def("description", &idn::SolvedProblem::description)
      .def("traceless_hessian_sq", &idn::SolvedProblem::traceless_hessian_sq);

  py::class_<idn::PFunctionResult>(m, "PFunctionResult")
      .def_readonly("p", &idn::PFunctionResult::p)
      .def_readonly("report", &idn::PFunctionResult::report);

  m.def("resolution_tolerance", &idn::resolution_tolerance, "problem"_a);
  m.def("heintze_karcher", &idn::heintze_karcher, "problem"_a);
  m.def("soap_bubble", &idn::soap_bubble, "problem"_a);
  m.def("reilly_residual", &idn::reilly_residual, "problem"_a);
  m.def("shear_stress", &idn::shear_stress, "problem"_a);
  m.def("minkowski_annulus", &idn::minkowski_annulus, "problem"_a);
  m.def("umbilicity_check", &idn::umbilicity_check, "problem"_a);
  m.def("divergence_closure", &idn::divergence_closure, "problem"_a);
  m.def("p_function", &idn::p_function, "problem"_a);
  m.def("check_names", &idn::check_names);
  m.def("run_checks", &idn::run_checks, "problem"_a, "names"_a);

  // ------------------------------------------------------------ config ---
  py::class_<cfg::StarSpec>(m, "StarSpec")
      .def_readonly("base", &cfg::StarSpec::base)
      .def_readonly("cos_coeffs", &cfg::StarSpec::cos_coeffs)
      .def_readonly("sin_coeffs", &cfg::StarSpec::sin_coeffs);

  py::class_<cfg::RunConfig>(m, "RunConfig")
      .def_readonly("schema_version", &cfg::RunConfig::schema_version)
      .def_readonly("n", &cfg::RunConfig::n)
      .def_readonly("k", &cfg::RunConfig::k)
      .def_readonly("domain_type", &cfg::RunConfig::domain_type)
      .def_readonly("radius", &cfg::RunConfig::radius)
      .def_readonly("inner_radius", &cfg::RunConfig::inner_radius)
      .def_readonly("outer_radius", &cfg::RunConfig::outer_radius)
      .def_readonly("outer_curve", &cfg::RunConfig::outer_curve)
      .def_readonly("inner_curve", &cfg::RunConfig::inner_curve)
      .def_readonly("linear_family", &cfg::RunConfig::linear_family)
      .def_readonly("coeffs", &cfg::RunConfig::coeffs)
      .def_readonly("inner_value", &cfg::RunConfig::inner_value)
      .def_readonly("mode", &cfg::RunConfig::mode)
      .def_readonly("grid_size", &cfg::RunConfig::grid_size)
      .def_readonly("target_h", &cfg::RunConfig::target_h)
      .def_readonly("newton_tol", &cfg::RunConfig::newton_tol)
      .def_readonly("max_newton_iters", &cfg::RunConfig::max_newton_iters)
      .def_readonly("checks", &cfg::RunConfig::checks)
      .def_readonly("out_dir", &cfg::RunConfig::out_dir)
      .def_readonly("formats", &cfg::RunConfig::formats)
      .def_readonly("canonical_text", &cfg::RunConfig::canonical_text)
      .def_readonly("digest", &cfg::RunConfig::digest)
      .def("wants_format", &cfg::RunConfig::wants_format, "fmt"_a)
      .def("is_annular", &cfg::RunConfig::is_annular)
      .def("space_form", &cfg::RunConfig::space_form)
      .def("nonlinearity", &cfg::RunConfig::nonlinearity)
      .def("radial_domain", &cfg::RunConfig::radial_domain)
      .def("planar_domain", &cfg::RunConfig::planar_domain);

  m.def("parse_config_text", &cfg::parse_config_text, "text"_a);
  m.def("load_config_file", &cfg::load_config_file, "path"_a);
  m.def("patch_config_text", &cfg::patch_config_text, "text"_a,
        "dotted_path"_a, "value_literal"_a);
  m.def("fnv1a_digest", &cfg::fnv1a_digest, "text"_a);

  // calibrated tolerance constants (documentation / reproducibility)
  m.attr("K_INEQ_C") = idn::kIneqC;
  m.attr("K_LAP_C") = idn::kLapC;
  m.attr("K_TOL_FLOOR") = idn::kTolFloor;
}
