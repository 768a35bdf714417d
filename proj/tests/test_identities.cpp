#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "serrinlab/errors.hpp"
#include "serrinlab/identities.hpp"
#include "serrinlab/tolerances.hpp"

namespace geo = serrinlab::geometry;
namespace fem = serrinlab::fem2d;
namespace rad = serrinlab::radial;
namespace idn = serrinlab::identities;

using idn::SolvedProblem;
using idn::Verdict;

namespace {
constexpr double kPi = 3.14159265358979323846;

SolvedProblem radial_linear(int n, double k, double R_in, double R_out,
                            int grid = 256) {
  geo::SpaceForm sf(n, k);
  auto dom = R_in == 0.0 ? geo::RadialDomain::ball(R_out)
                         : geo::RadialDomain::annulus(R_in, R_out);
  auto cf = rad::closed_form_linear(sf, dom, grid);
  return SolvedProblem::from_radial(std::move(cf.sol));
}

SolvedProblem fem_disk(const fem::StarCurve& curve, double k, double target_h,
                       geo::Nonlinearity f) {
  geo::SpaceForm sf(2, k);
  fem::PlanarDomain dom(sf, curve);
  auto mesh = fem::build_mesh(dom, target_h);
  return SolvedProblem::from_fem(dom, std::move(mesh), f, {0.0});
}

const idn::IdentityReport& find(const std::vector<idn::IdentityReport>& v,
                                const std::string& name) {
  auto it = std::find_if(v.begin(), v.end(),
                         [&](const auto& r) { return r.name == name; });
  REQUIRE(it != v.end());
  return *it;
}
}  // namespace

TEST_CASE("flat disk equality oracle: every ball identity is sharp") {
  auto p = radial_linear(2, 0.0, 0.0, 1.0);
  auto reports = idn::run_checks(p, {"all"});

  const auto& hk = find(reports, "heintze_karcher");
  CHECK(hk.verdict == Verdict::pass);
  CHECK(hk.lhs == doctest::Approx(4 * kPi).epsilon(1e-11));
  CHECK(hk.rhs == doctest::Approx(4 * kPi).epsilon(1e-11));
  CHECK(std::abs(hk.residual) < 1e-9);

  const auto& sb = find(reports, "soap_bubble");
  CHECK(sb.verdict == Verdict::pass);
  CHECK(std::abs(sb.lhs) < 1e-9);  // H == H0 on the rigid configuration

  const auto& re = find(reports, "reilly_residual");
  CHECK(re.verdict == Verdict::pass);
  CHECK(std::abs(re.lhs) < 1e-9);
  CHECK(std::abs(re.rhs) < 1e-9);

  const auto& sh = find(reports, "shear_stress");
  CHECK(sh.lhs == doctest::Approx(1.0).epsilon(1e-9));  // tau = 2/n = 1
  CHECK(sh.values.at("rigidity_flag") == doctest::Approx(1.0));

  const auto& dc = find(reports, "divergence_closure");
  CHECK(dc.verdict == Verdict::pass);
  CHECK(std::abs(dc.residual) < 1e-9);
}

TEST_CASE("flat 3-ball oracle: Heintze-Karcher saturates at 12 pi") {
  auto p = radial_linear(3, 0.0, 0.0, 1.0);
  auto hk = idn::heintze_karcher(p);
  CHECK(hk.lhs == doctest::Approx(12 * kPi).epsilon(1e-11));
  CHECK(hk.rhs == doctest::Approx(12 * kPi).epsilon(1e-11));
  CHECK(hk.verdict == Verdict::pass);
  auto sh = idn::shear_stress(p);
  CHECK(sh.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("P-function is the expected constant on model balls") {
  {
    // flat disk radius R: P = |grad u|^2 + 2u = R^2 everywhere
    auto p = radial_linear(2, 0.0, 0.0, 1.3);
    auto res = idn::p_function(p);
    CHECK(res.report.verdict == Verdict::pass);
    for (double v : res.p) CHECK(v == doctest::Approx(1.69).epsilon(1e-9));
  }
  {
    // spherical cap radius R on k=1: P = tan^2(R)
    const double R = 0.8;
    auto p = radial_linear(2, 1.0, 0.0, R);
    auto res = idn::p_function(p);
    CHECK(res.report.verdict == Verdict::pass);
    const double expect = std::tan(R) * std::tan(R);
    CHECK(res.p.front() == doctest::Approx(expect).epsilon(1e-9));
    CHECK(res.p.back() == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("annular equality oracles on all three space forms") {
  struct Case {
    int n;
    double k, R_in, R_out;
  } cases[] = {{3, 0.0, 0.5, 1.5}, {3, 1.0, 0.4, 1.0}, {3, -1.0, 0.6, 1.6}};
  for (const auto& c : cases) {
    CAPTURE(c.k);
    auto p = radial_linear(c.n, c.k, c.R_in, c.R_out);
    auto reports = idn::run_checks(p, {"all"});
    const auto& mk = find(reports, "minkowski_annulus");
    CHECK(mk.verdict == Verdict::pass);
    CHECK(std::abs(mk.residual) < 1e-9);
    const auto& um = find(reports, "umbilicity_check");
    CHECK(um.verdict == Verdict::pass);
    CHECK(std::abs(um.values.at("bracket_gamma0")) < 1e-9);
    CHECK(std::abs(um.values.at("bracket_gamma1")) < 1e-9);
    const auto& re = find(reports, "reilly_residual");
    CHECK(re.verdict == Verdict::pass);
    CHECK(std::abs(re.rhs) < 1e-9);
    // balls-only checks are not expanded on annuli
    CHECK(std::none_of(reports.begin(), reports.end(), [](const auto& r) {
      return r.name == "heintze_karcher" || r.name == "soap_bubble" ||
             r.name == "shear_stress";
    }));
  }
}

TEST_CASE("hypothesis gates report hypothesis_not_met, never fail") {
  {
    // spherical cap beyond the equator: boundary H <= 0
    auto p = radial_linear(2, 1.0, 0.0, 2.0);
    auto hk = idn::heintze_karcher(p);
    CHECK(hk.verdict == Verdict::hypothesis_not_met);
    CHECK(hk.values.at("min_H") < 0.0);
  }
  {
    // f' = 1 > n k = 0 breaks the standing hypothesis on flat charts
    geo::SpaceForm sf(2, 0.0);
    auto sol = rad::solve_radial(sf, geo::RadialDomain::ball(1.0),
                                 geo::Nonlinearity({2.0, 1.0}), 0.0, 128);
    auto p = SolvedProblem::from_radial(std::move(sol));
    CHECK_FALSE(p.fprime_ok());
    CHECK(idn::heintze_karcher(p).verdict == Verdict::hypothesis_not_met);
    CHECK(idn::soap_bubble(p).verdict == Verdict::hypothesis_not_met);
  }
}

TEST_CASE("structural misuse throws typed errors") {
  auto ball = radial_linear(2, 0.0, 0.0, 1.0);
  auto ann = radial_linear(3, 0.0, 0.5, 1.5);

  CHECK_THROWS_AS(idn::heintze_karcher(ann), serrinlab::NotSingleBoundary);
  CHECK_THROWS_AS(idn::soap_bubble(ann), serrinlab::NotSingleBoundary);
  CHECK_THROWS_AS(idn::shear_stress(ann), serrinlab::NotSingleBoundary);
  CHECK_THROWS_AS(idn::minkowski_annulus(ball), serrinlab::NotAnnular);
  CHECK_THROWS_AS(idn::umbilicity_check(ball), serrinlab::NotAnnular);

  // annular Reilly decomposition assumes the linear family
  geo::SpaceForm sf(3, 0.0);
  auto sol = rad::solve_radial(sf, geo::RadialDomain::annulus(0.5, 1.5),
                               geo::Nonlinearity({1.0, 0.0, 0.1}), 0.5, 128);
  auto p = SolvedProblem::from_radial(std::move(sol));
  CHECK_THROWS_AS(idn::reilly_residual(p), serrinlab::InvalidArgument);

  // shear stress with a non-positive denominator
  geo::SpaceForm flat(2, 0.0);
  auto neg = rad::solve_radial(flat, geo::RadialDomain::ball(1.0),
                               geo::Nonlinearity({-2.0}), 0.0, 64);
  auto pneg = SolvedProblem::from_radial(std::move(neg));
  CHECK_THROWS_AS(idn::shear_stress(pneg), serrinlab::DegenerateDenominator);

  CHECK_THROWS_AS(idn::run_checks(ball, {"no_such_check"}),
                  serrinlab::ConfigError);
}

TEST_CASE("run_checks 'all' expansion respects topology and family") {
  auto ball = radial_linear(2, 0.0, 0.0, 1.0);
  auto names_of = [](const std::vector<idn::IdentityReport>& v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(r.name);
    return out;
  };
  CHECK(names_of(idn::run_checks(ball, {"all"})) ==
        std::vector<std::string>{"divergence_closure", "heintze_karcher",
                                 "soap_bubble", "reilly_residual", "p_function",
                                 "shear_stress"});
  auto ann = radial_linear(3, 0.0, 0.5, 1.5);
  CHECK(names_of(idn::run_checks(ann, {"all"})) ==
        std::vector<std::string>{"divergence_closure", "reilly_residual",
                                 "p_function", "minkowski_annulus",
                                 "umbilicity_check"});
  // non-linear annulus: only the family-free checks remain
  geo::SpaceForm sf(3, 0.0);
  auto sol = rad::solve_radial(sf, geo::RadialDomain::annulus(0.5, 1.5),
                               geo::Nonlinearity({1.0, 0.0, 0.1}), 0.5, 128);
  auto pnl = SolvedProblem::from_radial(std::move(sol));
  CHECK(names_of(idn::run_checks(pnl, {"all"})) ==
        std::vector<std::string>{"divergence_closure", "p_function"});
}

TEST_CASE("flat scaling law: both sides of Heintze-Karcher scale by lambda^n") {
  auto p1 = radial_linear(2, 0.0, 0.0, 1.0);
  auto p2 = radial_linear(2, 0.0, 0.0, 2.0);
  auto h1 = idn::heintze_karcher(p1);
  auto h2 = idn::heintze_karcher(p2);
  CHECK(h2.lhs / h1.lhs == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(h2.rhs / h1.rhs == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(h2.verdict == Verdict::pass);
}

TEST_CASE("FEM inequality gaps are rotation-invariant up to discretization") {
  // the same peanut-shaped domain, rotated by pi/6
  geo::Nonlinearity f({2.0});
  auto p0 = fem_disk(fem::StarCurve{1.0, {0.0, 0.2}, {}}, 0.0, 0.05, f);
  auto p1 = fem_disk(
      fem::StarCurve{1.0, {0.0, 0.2 * std::cos(kPi / 3)}, {0.0, 0.2 * std::sin(kPi / 3)}},
      0.0, 0.05, f);
  auto s0 = idn::soap_bubble(p0);
  auto s1 = idn::soap_bubble(p1);
  CHECK(s0.verdict == Verdict::pass);
  CHECK(s1.verdict == Verdict::pass);
  CHECK(s0.lhs > 5.0 * s0.tolerance);  // genuinely non-rigid domain
  CHECK(s1.lhs == doctest::Approx(s0.lhs).epsilon(0.1));
  auto t0 = idn::shear_stress(p0);
  auto t1 = idn::shear_stress(p1);
  CHECK(t1.lhs == doctest::Approx(t0.lhs).epsilon(0.05));
  CHECK(t0.lhs > 2.0 / 2 + 5.0 * t0.tolerance);  // tau strictly above 2/n
}

TEST_CASE("FEM p-function calibration: asserted bounds hold with margin") {
  geo::Nonlinearity f({2.0});
  auto p = fem_disk(fem::StarCurve::circle(1.0), 0.0, 0.05, f);
  auto res = idn::p_function(p);
  CHECK(res.report.verdict == Verdict::pass);
  const double h = p.h_eff();
  // patch-recovered Delta P floor stays well inside the tolerance band
  const double min_lap = res.report.values.at("min_p_laplacian");
  CHECK(min_lap >= -idn::kLapC * h * h);
  CHECK(min_lap >= -0.5 * idn::kLapC * h * h);  // 2x margin
  // interior maximum-principle surrogate with margin
  const double max_int = res.report.values.at("max_interior_p");
  const double max_bdy = res.report.values.at("max_boundary_p");
  CHECK(max_int <= max_bdy + idn::kMaxPC * h);
}

TEST_CASE("report serialization is stable and well-formed") {
  auto p = radial_linear(2, 0.0, 0.0, 1.0);
  auto rep = idn::heintze_karcher(p);
  CHECK(rep.to_json() == rep.to_json());
  const std::string js = rep.to_json();
  // canonical key order: name first, then the numeric block
  CHECK(js.find("\"name\"") != std::string::npos);
  CHECK(js.find("\"name\"") < js.find("\"lhs\""));
  CHECK(js.find("\"lhs\"") < js.find("\"rhs\""));
  CHECK(js.find("\"verdict\"") != std::string::npos);

  const std::string header = idn::IdentityReport::csv_header();
  const std::string row = rep.csv_row();
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(row.begin(), row.end(), ','));
}

TEST_CASE("resolution tolerance follows the calibrated h^2 law") {
  auto p = radial_linear(2, 0.0, 0.0, 1.0, 128);
  const double h = p.h_eff();
  CHECK(h == doctest::Approx(1.0 / 128).epsilon(1e-12));
  CHECK(idn::resolution_tolerance(p) ==
        doctest::Approx(std::max(idn::kTolFloor, idn::kIneqC * h * h)));
}
