#include <doctest.h>

#include <cmath>

#include "serrinlab/errors.hpp"
#include "serrinlab/fem.hpp"

namespace geo = serrinlab::geometry;
namespace fem = serrinlab::fem2d;
using serrinlab::NewtonDivergence;

namespace {
constexpr double kPi = 3.14159265358979323846;

// L-infinity error of a FEM field against an exact radial profile.
double linf_error(const fem::Mesh2D& mesh, const fem::ScalarField& u,
                  const std::function<double(double)>& exact) {
  double err = 0.0;
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const double r = std::hypot(mesh.xy[i][0], mesh.xy[i][1]);
    err = std::max(err, std::abs(u.values[i] - exact(r)));
  }
  return err;
}

double solve_disk_error(double k, double R, double target_h,
                        const std::function<double(double)>& exact) {
  geo::SpaceForm sf(2, k);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(R));
  auto mesh = fem::build_mesh(dom, target_h);
  auto f = geo::Nonlinearity::linear_family(sf);
  auto sol = fem::solve_fem(dom, mesh, f, {0.0});
  return linf_error(mesh, sol.u, exact);
}
}  // namespace

TEST_CASE("flat torsion problem converges at second order") {
  auto exact = [](double r) { return (1.0 - r * r) / 2.0; };
  const double e1 = solve_disk_error(0.0, 1.0, 0.1, exact);
  const double e2 = solve_disk_error(0.0, 1.0, 0.05, exact);
  CHECK(e1 < 2e-3);
  CHECK(e2 < e1 / 3.0);  // second order would give 4x
}

TEST_CASE("spherical cap matches the closed form") {
  const double R = kPi / 4;
  auto exact = [&](double r) { return std::cos(r) / std::cos(R) - 1.0; };
  CHECK(solve_disk_error(1.0, R, 0.05, exact) < 5e-4);
}

TEST_CASE("hyperbolic disk matches the closed form") {
  auto exact = [](double r) { return 1.0 - std::cosh(r) / std::cosh(1.0); };
  CHECK(solve_disk_error(-1.0, 1.0, 0.05, exact) < 5e-4);
}

TEST_CASE("flux recovery closes the divergence balance to near rounding") {
  geo::SpaceForm sf(2, 0.0);
  fem::PlanarDomain dom(sf, fem::StarCurve{1.0, {0.0, 0.2}, {}});
  auto mesh = fem::build_mesh(dom, 0.05);
  geo::Nonlinearity f({2.0});
  fem::FemProblem prob(dom, mesh);
  auto sol = prob.solve(f, {0.0});
  auto trace = prob.boundary_trace(sol.u, f);

  double flux = 0.0;
  for (const auto& s : trace.loops[0]) flux += s.flux_moment;
  const double bulk = prob.bulk_integral([&](double u) { return f(u); }, sol.u);
  // weak-form exactness: sum of flux moments = -integral of f(u)
  CHECK(std::abs(flux + bulk) < 1e-9 * std::abs(bulk));
}

TEST_CASE("boundary trace carries consistent signs and data") {
  geo::SpaceForm sf(2, 0.0);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(1.5),
                        fem::StarCurve::circle(0.5));
  auto mesh = fem::build_mesh(dom, 0.08);
  auto f = geo::Nonlinearity::linear_family(sf);
  fem::FemProblem prob(dom, mesh);
  auto sol = prob.solve(f, {0.0, 1.0});  // outer 0, inner 1
  auto trace = prob.boundary_trace(sol.u, f);
  REQUIRE(trace.loops.size() == 2);

  for (const auto& s : trace.loops[0]) {
    CHECK(s.u == doctest::Approx(0.0));
    CHECK(s.u_nu < 0.0);       // u decreases toward the outer boundary
    CHECK(s.X_nu > 0.0);       // conformal field exits through Gamma_0
    CHECK(s.H == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
    CHECK(s.weight > 0.0);
  }
  for (const auto& s : trace.loops[1]) {
    CHECK(s.u == doctest::Approx(1.0));
    CHECK(s.X_nu < 0.0);
    CHECK(s.H == doctest::Approx(-1.0 / 0.5).epsilon(1e-12));
  }
  // weights of each loop sum to its metric length
  double len0 = 0.0, len1 = 0.0;
  for (const auto& s : trace.loops[0]) len0 += s.weight;
  for (const auto& s : trace.loops[1]) len1 += s.weight;
  CHECK(len0 == doctest::Approx(2 * kPi * 1.5).epsilon(1e-3));
  CHECK(len1 == doctest::Approx(2 * kPi * 0.5).epsilon(1e-3));
}

TEST_CASE("zero source with zero data gives the zero solution") {
  geo::SpaceForm sf(2, 0.0);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(1.0));
  auto mesh = fem::build_mesh(dom, 0.1);
  geo::Nonlinearity f(std::vector<double>{});
  auto sol = fem::solve_fem(dom, mesh, f, {0.0});
  for (double v : sol.u.values) CHECK(std::abs(v) < 1e-14);
  CHECK(sol.stats.newton_iters <= 2);
}

TEST_CASE("energy decreases along accepted Newton iterates") {
  geo::SpaceForm sf(2, 0.0);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(1.0));
  auto mesh = fem::build_mesh(dom, 0.1);
  geo::Nonlinearity f({2.0, 0.0, -1.0});  // f = 2 - u^2
  auto sol = fem::solve_fem(dom, mesh, f, {0.0});
  const auto& e = sol.stats.energy_trace;
  REQUIRE(e.size() >= 2);
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] <= e[i - 1] + 1e-12);
}

TEST_CASE("runaway source throws NewtonDivergence") {
  geo::SpaceForm sf(2, 0.0);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(1.0));
  auto mesh = fem::build_mesh(dom, 0.1);
  geo::Nonlinearity f({100.0, 0.0, 100.0});
  CHECK_THROWS_AS(fem::solve_fem(dom, mesh, f, {0.0}), NewtonDivergence);
}

TEST_CASE("patch-recovered Hessian integral converges on the flat disk") {
  // torsion solution u = (1 - r^2)/2 has Hessian -I, traceless part 0
  geo::SpaceForm sf(2, 0.0);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(1.0));
  geo::Nonlinearity f({2.0});
  double prev = 0.0;
  int step = 0;
  for (double h : {0.1, 0.05}) {
    auto mesh = fem::build_mesh(dom, h);
    fem::FemProblem prob(dom, mesh);
    auto sol = prob.solve(f, {0.0});
    const double I = prob.traceless_hessian_sq_integral(sol.u, f);
    CHECK(I >= 0.0);
    CHECK(I < 1e-3);
    if (step++ > 0) CHECK(I < prev / 2.0);
    prev = I;
  }
}

TEST_CASE("p_laplacian_flat refuses curved charts") {
  geo::SpaceForm sf(2, 1.0);
  fem::PlanarDomain dom(sf, fem::StarCurve::circle(0.8));
  auto mesh = fem::build_mesh(dom, 0.1);
  auto f = geo::Nonlinearity::linear_family(sf);
  fem::FemProblem prob(dom, mesh);
  auto sol = prob.solve(f, {0.0});
  CHECK_THROWS_AS(prob.p_laplacian_flat(sol.u, f), serrinlab::InvalidArgument);
}
