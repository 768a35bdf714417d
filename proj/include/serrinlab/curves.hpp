#pragma once

#include <optional>
#include <vector>

#include "serrinlab/geometry.hpp"

namespace serrinlab::fem2d {

using geometry::SpaceForm;

// Smooth star-shaped boundary curve in the geodesic polar chart, given as a
// truncated Fourier series r(theta) = base + sum_j (A_j cos(j theta)
// + B_j sin(j theta)).
struct StarCurve {
  double base = 1.0;
  std::vector<double> cos_coeffs;  // A_j, j = 1..
  std::vector<double> sin_coeffs;  // B_j, j = 1..

  static StarCurve circle(double R);

  double r(double theta) const;
  double dr(double theta) const;    // dr/dtheta
  double ddr(double theta) const;   // d^2 r/dtheta^2
  double min_radius() const;        // sampled bound (4096 samples)
  double max_radius() const;
  bool is_circle() const;
};

// Star-shaped 2D domain in the polar chart of a space form with n = 2:
// one outer loop, optionally one inner loop (annular topology). The outer
// loop is traversed counterclockwise, the inner loop clockwise.
struct PlanarDomain {
  SpaceForm sf{2, 0.0};
  StarCurve outer;
  std::optional<StarCurve> inner;

  PlanarDomain(const SpaceForm& sf_, StarCurve outer_,
               std::optional<StarCurve> inner_ = std::nullopt);
  bool has_inner() const { return inner.has_value(); }
};

// Geodesic curvature of the curve (r(theta), theta) in the chart metric
// dr^2 + h(r)^2 dtheta^2, taken with respect to the domain's outward
// normal: positive-oriented for outer loops, negated for inner loops.
double boundary_curvature(const SpaceForm& sf, const StarCurve& c,
                          double theta, bool outer_loop);

// Inner product <X, nu> of the conformal position field X = h d/dt with the
// outward unit normal of the loop at parameter theta:
// +h^2/sqrt(h^2 + r'^2) on outer loops, negated on inner loops.
double conformal_normal_component(const SpaceForm& sf, const StarCurve& c,
                                  double theta, bool outer_loop);

}  // namespace serrinlab::fem2d
