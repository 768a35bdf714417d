#pragma once

#include <optional>
#include <vector>

#include "serrinlab/geometry.hpp"

namespace serrinlab::radial {

using geometry::Nonlinearity;
using geometry::RadialDomain;
using geometry::SpaceForm;

// Boundary trace of a radial solution on one geodesic sphere.
struct BoundaryData {
  double radius = 0.0;  // geodesic radius of the sphere
  double u = 0.0;       // Dirichlet value
  double u_nu = 0.0;    // outward-normal derivative (outward w.r.t. domain)
  double H = 0.0;       // trace mean curvature w.r.t. the outward normal
  double area = 0.0;    // sphere area
};

// Solution of u'' + (n-1)(h'/h) u' = -f(u) on a uniform radial grid.
struct RadialSolution {
  SpaceForm sf{2, 0.0};
  RadialDomain dom;
  Nonlinearity f;
  std::vector<double> r;   // grid radii, uniform, r.front()..r.back()
  std::vector<double> u;   // values
  std::vector<double> du;  // radial derivative values
  // Boundary components ordered inner-then-outer for annuli; balls have a
  // single (outer) entry.
  std::vector<BoundaryData> boundary;
  double residual_max = 0.0;  // max discrete PDE residual at interior nodes
  int newton_iters = 0;

  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
  double u_max() const;
  // 6-point Lagrange interpolation of u resp. u' at radius x.
  double value_at(double x) const;
  double deriv_at(double x) const;
};

// Damped-Newton collocation solve on m+1 uniform nodes with 4th-order
// finite-difference stencils. `inner_value` is the Dirichlet datum on the
// inner sphere of an annulus (ignored for balls); the outer value is 0.
// Falls back to continuation in the nonlinear coefficients when plain
// Newton stalls. The stopping tolerance is tol_scale * (1 + |f(0)| + |a|),
// floored at the stencil rounding plateau ~ 8 eps (1 + |f(0)| + |a|) / d^2.
// Throws NonConvergence / InadmissibleDomain.
RadialSolution solve_radial(const SpaceForm& sf, const RadialDomain& dom,
                            const Nonlinearity& f, double inner_value,
                            int grid_size, double tol_scale = 1e-12,
                            int max_iters = 50);

// Exact radial solution for the family f(u) = n + n k u:
//   k = 0:  u = (R_out^2 - r^2) / 2
//   k > 0:  u = (cos(s r)/cos(s R_out) - 1) / k,  s = sqrt(k)
//   k < 0:  u = (cosh(s r)/cosh(s R_out) - 1) / k, s = sqrt(-k)
// For annuli the derived constants are a = u(R_in), c1 = u_nu on the inner
// sphere, c0 = u_nu on the outer sphere. Throws DegenerateAnnulus when
// cos(sqrt(k) R_out) = 0.
struct ClosedForm {
  RadialSolution sol;
  double c0 = 0.0;                // outer u_nu
  std::optional<double> a;        // inner Dirichlet value (annuli only)
  std::optional<double> c1;       // inner u_nu (annuli only)
};

ClosedForm closed_form_linear(const SpaceForm& sf, const RadialDomain& dom,
                              int grid_size = 256);

// Hypothesis gate of the ball-rigidity criterion: checks
//   (n-1) f(0) h(R) / (n h'(R)) <= psi_at_R.
// Requires h'(R) > 0 and psi_at_R > 0; reports both sides.
struct GateReport {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

GateReport rigidity_gate(const SpaceForm& sf, double R, const Nonlinearity& f,
                         double psi_at_R);

}  // namespace serrinlab::radial
