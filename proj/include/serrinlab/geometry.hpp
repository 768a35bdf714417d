#pragma once

#include <string>
#include <vector>

namespace serrinlab::geometry {

// Ambient constant-curvature space form of dimension n and sectional
// curvature k, modelled as the warped product dt^2 + h(t)^2 dS^{n-1} with
// h(t) = t (k=0), sin(sqrt(k) t)/sqrt(k) (k>0), sinh(sqrt(-k) t)/sqrt(-k)
// (k<0).
struct SpaceForm {
  int n = 2;      // dimension, >= 2
  double k = 0.0; // sectional curvature

  SpaceForm(int n_, double k_);

  // Largest admissible geodesic radius (pi/sqrt(k) for k > 0, +inf else).
  double max_radius() const;
  bool radius_admissible(double R) const;
};

// Geodesic ball (R_in == 0) or standard annulus between concentric geodesic
// spheres of radii R_in < R_out.
struct RadialDomain {
  enum class Kind { Ball, Annulus };
  Kind kind = Kind::Ball;
  double R_in = 0.0;
  double R_out = 0.0;

  static RadialDomain ball(double R);
  static RadialDomain annulus(double R_in, double R_out);
  bool is_ball() const { return kind == Kind::Ball; }
};

// Throws InadmissibleDomain unless dom is valid for sf.
void validate_domain(const SpaceForm& sf, const RadialDomain& dom);

// Polynomial source term f(u) = sum_i coeffs[i] u^i.
struct Nonlinearity {
  std::vector<double> coeffs;

  Nonlinearity() = default;
  explicit Nonlinearity(std::vector<double> c);

  double operator()(double u) const;  // f(u), Horner evaluation
  double deriv(double u) const;       // f'(u)
  double antideriv(double u) const;   // F(u) = integral of f from 0 to u
  double f0() const;                  // f(0)
  int degree() const;

  // The family f(u) = n + n k u that admits the closed-form solutions.
  static Nonlinearity linear_family(const SpaceForm& sf);
  bool is_linear_family(const SpaceForm& sf) const;

  // sup of f' over [lo, hi] (exact: endpoint and critical-point evaluation).
  double sup_deriv(double lo, double hi) const;
  // Standing hypothesis f' <= n k over the value range [lo, hi].
  bool fprime_bounded(double k, int n, double lo, double hi) const;

  std::string describe() const;  // "f(u) = 2 + 1*u" style
};

// Warp function h(t) of the space form of curvature k and its derivative;
// conformal_factor is phi = h'(t) (X = h d/dt is closed conformal with
// factor phi, and Delta phi = -n k phi).
double warp(double k, double t);
double warp_deriv(double k, double t);
double conformal_factor(double k, double t);

// Unnormalized-trace mean curvature of the geodesic sphere of radius R with
// respect to the outward (d/dt) normal: H = (n-1) h'(R)/h(R).
double sphere_mean_curvature(const SpaceForm& sf, double R);

// Surface area of the unit (n-1)-sphere in R^n.
double unit_sphere_area(int n);

struct Measures {
  double volume = 0.0;
  // One entry per boundary component; annuli list {inner, outer}.
  std::vector<double> boundary_areas;
};

// Riemannian volume of dom and areas of its boundary spheres.
Measures ball_measures(const SpaceForm& sf, const RadialDomain& dom);

}  // namespace serrinlab::geometry
