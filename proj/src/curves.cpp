#include "serrinlab/curves.hpp"

#include <cmath>
#include <numbers>

#include "serrinlab/errors.hpp"

namespace serrinlab::fem2d {

StarCurve StarCurve::circle(double R) {
  StarCurve c;
  c.base = R;
  return c;
}

double StarCurve::r(double theta) const {
  double acc = base;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) {
    acc += cos_coeffs[j] * std::cos((j + 1) * theta);
  }
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) {
    acc += sin_coeffs[j] * std::sin((j + 1) * theta);
  }
  return acc;
}

double StarCurve::dr(double theta) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) {
    acc -= (j + 1) * cos_coeffs[j] * std::sin((j + 1) * theta);
  }
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) {
    acc += (j + 1) * sin_coeffs[j] * std::cos((j + 1) * theta);
  }
  return acc;
}

double StarCurve::ddr(double theta) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) {
    const double w = static_cast<double>(j + 1);
    acc -= w * w * cos_coeffs[j] * std::cos(w * theta);
  }
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) {
    const double w = static_cast<double>(j + 1);
    acc -= w * w * sin_coeffs[j] * std::sin(w * theta);
  }
  return acc;
}

namespace {
constexpr int kRadiusSamples = 4096;
}

double StarCurve::min_radius() const {
  double best = r(0.0);
  for (int i = 1; i < kRadiusSamples; ++i) {
    best = std::min(best, r(2.0 * std::numbers::pi * i / kRadiusSamples));
  }
  return best;
}

double StarCurve::max_radius() const {
  double best = r(0.0);
  for (int i = 1; i < kRadiusSamples; ++i) {
    best = std::max(best, r(2.0 * std::numbers::pi * i / kRadiusSamples));
  }
  return best;
}

bool StarCurve::is_circle() const {
  for (double v : cos_coeffs) {
    if (v != 0.0) return false;
  }
  for (double v : sin_coeffs) {
    if (v != 0.0) return false;
  }
  return true;
}

PlanarDomain::PlanarDomain(const SpaceForm& sf_, StarCurve outer_,
                           std::optional<StarCurve> inner_)
    : sf(sf_), outer(std::move(outer_)), inner(std::move(inner_)) {
  if (sf.n != 2) throw InadmissibleDomain("PlanarDomain: requires n = 2");
  if (!(outer.min_radius() > 0.0)) {
    throw InadmissibleDomain("PlanarDomain: outer curve must have positive radius");
  }
  if (!sf.radius_admissible(outer.max_radius())) {
    throw InadmissibleDomain("PlanarDomain: outer curve exceeds admissible radius");
  }
  if (inner) {
    if (!(inner->min_radius() > 0.0)) {
      throw InadmissibleDomain("PlanarDomain: inner curve must have positive radius");
    }
    for (int i = 0; i < kRadiusSamples; ++i) {
      const double th = 2.0 * std::numbers::pi * i / kRadiusSamples;
      if (!(inner->r(th) < outer.r(th))) {
        throw InadmissibleDomain(
            "PlanarDomain: inner curve must lie strictly inside the outer curve");
      }
    }
  }
}

double boundary_curvature(const SpaceForm& sf, const StarCurve& c,
                          double theta, bool outer_loop) {
  const double r = c.r(theta);
  const double rp = c.dr(theta);
  const double rpp = c.ddr(theta);
  const double h = geometry::warp(sf.k, r);
  const double hp = geometry::warp_deriv(sf.k, r);
  const double denom = std::pow(rp * rp + h * h, 1.5);
  const double kappa = (h * h * hp + 2.0 * hp * rp * rp - h * rpp) / denom;
  return outer_loop ? kappa : -kappa;
}

double conformal_normal_component(const SpaceForm& sf, const StarCurve& c,
                                  double theta, bool outer_loop) {
  const double r = c.r(theta);
  const double rp = c.dr(theta);
  const double h = geometry::warp(sf.k, r);
  const double val = h * h / std::sqrt(h * h + rp * rp);
  return outer_loop ? val : -val;
}

}  // namespace serrinlab::fem2d
