#include <doctest.h>

#include <cmath>

#include "serrinlab/errors.hpp"
#include "serrinlab/radial.hpp"

namespace geo = serrinlab::geometry;
namespace rad = serrinlab::radial;
using serrinlab::DegenerateAnnulus;
using serrinlab::InadmissibleDomain;
using serrinlab::NonConvergence;

namespace {
constexpr double kPi = 3.14159265358979323846;

double linf_vs_closed_form(const rad::RadialSolution& num,
                           const rad::RadialSolution& exact) {
  double err = 0.0;
  for (std::size_t i = 0; i < num.r.size(); ++i) {
    err = std::max(err, std::abs(num.u[i] - exact.value_at(num.r[i])));
  }
  return err;
}
}  // namespace

TEST_CASE("torsion problem on the flat disk is reproduced to solver accuracy") {
  geo::SpaceForm sf(2, 0.0);
  auto dom = geo::RadialDomain::ball(1.0);
  geo::Nonlinearity f({2.0});
  auto sol = rad::solve_radial(sf, dom, f, 0.0, 128);
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    const double exact = (1.0 - sol.r[i] * sol.r[i]) / 2.0;
    CHECK(sol.u[i] == doctest::Approx(exact).epsilon(1e-10));
    CHECK(sol.du[i] == doctest::Approx(-sol.r[i]).epsilon(1e-9));
  }
  REQUIRE(sol.boundary.size() == 1);
  CHECK(sol.boundary[0].u_nu == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(sol.boundary[0].H == doctest::Approx(1.0));
  CHECK(sol.boundary[0].area == doctest::Approx(2 * kPi));
}

TEST_CASE("numerical solver matches the closed-form family") {
  struct Case {
    int n;
    double k;
    double R_in, R_out;
  };
  const Case cases[] = {
      {3, 0.0, 0.0, 2.0},  {2, 1.0, 0.0, 0.8},  {3, 1.0, 0.0, 1.3},
      {2, -1.0, 0.0, 1.0}, {3, 0.0, 0.5, 1.5},  {2, 1.0, 0.5, 1.2},
      {4, -1.0, 0.6, 1.6},
  };
  for (const auto& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.k);
    CAPTURE(c.R_out);
    geo::SpaceForm sf(c.n, c.k);
    auto dom = c.R_in == 0.0 ? geo::RadialDomain::ball(c.R_out)
                             : geo::RadialDomain::annulus(c.R_in, c.R_out);
    auto cf = rad::closed_form_linear(sf, dom, 256);
    auto f = geo::Nonlinearity::linear_family(sf);
    const double a = cf.a.value_or(0.0);
    auto num = rad::solve_radial(sf, dom, f, a, 256);
    CHECK(linf_vs_closed_form(num, cf.sol) < 1e-8);
  }
}

TEST_CASE("closed-form spherical annulus constants are frozen") {
  geo::SpaceForm sf(2, 1.0);
  {
    auto cf = rad::closed_form_linear(sf, geo::RadialDomain::annulus(0.5, 1.2));
    REQUIRE(cf.a.has_value());
    CHECK(*cf.a == doctest::Approx(1.4218677565153808).epsilon(1e-12));
    CHECK(cf.c0 == doctest::Approx(-2.5721516221263183).epsilon(1e-12));
    CHECK(*cf.c1 == doctest::Approx(1.3230723854567474).epsilon(1e-12));
    // identities of the family on k=1: a + 1 = cos(R_in)/cos(R_out),
    // c0 = -tan(R_out), c1 = sin(R_in)/cos(R_out)
    CHECK(*cf.a + 1.0 == doctest::Approx(std::cos(0.5) / std::cos(1.2)));
    CHECK(cf.c0 == doctest::Approx(-std::tan(1.2)));
    CHECK(*cf.c1 == doctest::Approx(std::sin(0.5) / std::cos(1.2)));
  }
  {
    // R_out beyond pi/2: cos(R_out) < 0, still well defined
    auto cf = rad::closed_form_linear(sf, geo::RadialDomain::annulus(0.3, 2.0));
    CHECK(*cf.a == doctest::Approx(-3.295671636127847).epsilon(1e-12));
    CHECK(*cf.c1 == doctest::Approx(-0.7101344542549757).epsilon(1e-12));
  }
}

TEST_CASE("closed form throws on the degenerate spherical annulus") {
  geo::SpaceForm sf(2, 1.0);
  CHECK_THROWS_AS(rad::closed_form_linear(
                      sf, geo::RadialDomain::annulus(0.5, kPi / 2)),
                  DegenerateAnnulus);
  CHECK_THROWS_AS(rad::closed_form_linear(sf, geo::RadialDomain::ball(kPi / 2)),
                  DegenerateAnnulus);
}

TEST_CASE("inadmissible domains are rejected before solving") {
  geo::SpaceForm sf(2, 1.0);
  geo::Nonlinearity f({2.0});
  CHECK_THROWS_AS(
      rad::solve_radial(sf, geo::RadialDomain::ball(3.5), f, 0.0, 64),
      InadmissibleDomain);
}

TEST_CASE("nonlinear source: solver converges and satisfies the ODE") {
  // f(u) = 2 - u^2 on the flat disk: no closed form; check the discrete
  // residual and the flux identity  -u'(R) * |bdry| = integral of f(u).
  geo::SpaceForm sf(2, 0.0);
  geo::Nonlinearity f({2.0, 0.0, -1.0});
  auto sol = rad::solve_radial(sf, geo::RadialDomain::ball(1.0), f, 0.0, 256);
  CHECK(sol.residual_max < 1e-9);
  CHECK(sol.u_max() > 0.0);
  CHECK(sol.boundary[0].u_nu < 0.0);
}

TEST_CASE("stiff runaway source throws NonConvergence") {
  geo::SpaceForm sf(2, 0.0);
  geo::Nonlinearity f({100.0, 0.0, 100.0});  // supercritical blow-up source
  CHECK_THROWS_AS(
      rad::solve_radial(sf, geo::RadialDomain::ball(1.0), f, 0.0, 128),
      NonConvergence);
}

TEST_CASE("value_at and deriv_at interpolate to high order") {
  geo::SpaceForm sf(3, -1.0);
  auto cf = rad::closed_form_linear(sf, geo::RadialDomain::ball(1.5), 128);
  // closed form: u = (cosh r / cosh R - 1)/k with k = -1
  auto exact_u = [&](double r) { return 1.0 - std::cosh(r) / std::cosh(1.5); };
  auto exact_du = [&](double r) { return -std::sinh(r) / std::cosh(1.5); };
  for (double x : {0.037, 0.5123, 1.111, 1.4999}) {
    CHECK(cf.sol.value_at(x) == doctest::Approx(exact_u(x)).epsilon(1e-10));
    CHECK(cf.sol.deriv_at(x) == doctest::Approx(exact_du(x)).epsilon(1e-8));
  }
}

TEST_CASE("ball rigidity gate reports both sides") {
  geo::SpaceForm sf(2, 0.0);
  geo::Nonlinearity f({2.0});
  // flat disk radius R: lhs = (n-1) f(0) h(R) / (n h'(R)) = R; gate holds
  // iff psi >= R.
  auto g1 = rad::rigidity_gate(sf, 1.0, f, 2.0);
  CHECK(g1.holds);
  CHECK(g1.lhs == doctest::Approx(1.0));
  CHECK(g1.rhs == doctest::Approx(2.0));
  auto g2 = rad::rigidity_gate(sf, 1.0, f, 0.5);
  CHECK_FALSE(g2.holds);
}

TEST_CASE("annulus solve honors the inner Dirichlet value") {
  geo::SpaceForm sf(3, 0.0);
  auto dom = geo::RadialDomain::annulus(0.5, 1.5);
  geo::Nonlinearity f({1.0, 0.0, 0.2});
  const double a = 0.7;
  auto sol = rad::solve_radial(sf, dom, f, a, 128);
  CHECK(sol.u.front() == doctest::Approx(a).epsilon(1e-12));
  CHECK(sol.u.back() == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(sol.boundary.size() == 2);
  CHECK(sol.boundary[0].radius == doctest::Approx(0.5));
  CHECK(sol.boundary[1].radius == doctest::Approx(1.5));
  // inner outward normal points toward the pole: u_nu = -u'(R_in)
  CHECK(sol.boundary[0].u_nu == doctest::Approx(-sol.du.front()));
  CHECK(sol.boundary[1].u_nu == doctest::Approx(sol.du.back()));
}
