#include "serrinlab/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "serrinlab/errors.hpp"
#include "serrinlab/quadrature.hpp"

namespace serrinlab::geometry {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Real roots of the polynomial sum_i c[i] x^i inside (lo, hi), via the
// companion matrix of the trimmed polynomial.
std::vector<double> real_roots_in(const std::vector<double>& c, double lo,
                                  double hi) {
  std::vector<double> coeffs = c;
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  std::vector<double> roots;
  if (coeffs.size() < 2) return roots;  // constant: no roots of interest
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg == 1) {
    const double r = -coeffs[0] / coeffs[1];
    if (r > lo && r < hi) roots.push_back(r);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) {
      const double r = z.real();
      if (r > lo && r < hi) roots.push_back(r);
    }
  }
  return roots;
}

}  // namespace

SpaceForm::SpaceForm(int n_, double k_) : n(n_), k(k_) {
  if (n < 2) throw InadmissibleDomain("SpaceForm: dimension must be >= 2");
  if (!std::isfinite(k)) throw InadmissibleDomain("SpaceForm: curvature must be finite");
}

double SpaceForm::max_radius() const {
  if (k > 0.0) return std::numbers::pi / std::sqrt(k);
  return std::numeric_limits<double>::infinity();
}

bool SpaceForm::radius_admissible(double R) const {
  if (!(R > 0.0) || !std::isfinite(R)) return false;
  if (k > 0.0) return std::sqrt(k) * R <= std::numbers::pi - 1e-9;
  return true;
}

RadialDomain RadialDomain::ball(double R) {
  RadialDomain d;
  d.kind = Kind::Ball;
  d.R_in = 0.0;
  d.R_out = R;
  return d;
}

RadialDomain RadialDomain::annulus(double R_in, double R_out) {
  RadialDomain d;
  d.kind = Kind::Annulus;
  d.R_in = R_in;
  d.R_out = R_out;
  return d;
}

void validate_domain(const SpaceForm& sf, const RadialDomain& dom) {
  if (!sf.radius_admissible(dom.R_out)) {
    throw InadmissibleDomain("outer radius " + fmt_double(dom.R_out) +
                             " not admissible for curvature " + fmt_double(sf.k));
  }
  if (dom.is_ball()) {
    if (dom.R_in != 0.0) throw InadmissibleDomain("ball must have R_in = 0");
    return;
  }
  if (!(dom.R_in > 0.0)) throw InadmissibleDomain("annulus needs R_in > 0");
  if (!(dom.R_in < dom.R_out)) {
    throw InadmissibleDomain("annulus needs R_in < R_out (got R_in=" +
                             fmt_double(dom.R_in) + ", R_out=" +
                             fmt_double(dom.R_out) + ")");
  }
}

Nonlinearity::Nonlinearity(std::vector<double> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  for (double v : coeffs) {
    if (!std::isfinite(v)) throw InvalidArgument("Nonlinearity: non-finite coefficient");
  }
}

double Nonlinearity::operator()(double u) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double Nonlinearity::deriv(double u) const {
  double acc = 0.0;
  for (int i = degree(); i >= 1; --i) acc = acc * u + i * coeffs[i];
  return acc;
}

double Nonlinearity::antideriv(double u) const {
  double acc = 0.0;
  for (int i = degree(); i >= 0; --i) acc = acc * u + coeffs[i] / (i + 1);
  return acc * u;
}

double Nonlinearity::f0() const { return coeffs.empty() ? 0.0 : coeffs[0]; }

int Nonlinearity::degree() const { return static_cast<int>(coeffs.size()) - 1; }

Nonlinearity Nonlinearity::linear_family(const SpaceForm& sf) {
  if (sf.k == 0.0) return Nonlinearity({static_cast<double>(sf.n)});
  return Nonlinearity({static_cast<double>(sf.n), sf.n * sf.k});
}

bool Nonlinearity::is_linear_family(const SpaceForm& sf) const {
  const double c0 = f0();
  const double c1 = coeffs.size() > 1 ? coeffs[1] : 0.0;
  for (std::size_t i = 2; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) return false;
  }
  const double target1 = sf.n * sf.k;
  return std::abs(c0 - sf.n) <= 1e-12 * sf.n &&
         std::abs(c1 - target1) <= 1e-12 * (1.0 + std::abs(target1));
}

double Nonlinearity::sup_deriv(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  double best = std::max(deriv(lo), deriv(hi));
  // Interior criticals of f' are roots of f''.
  std::vector<double> d2;
  for (int i = 2; i <= degree(); ++i) d2.push_back(i * (i - 1) * coeffs[i]);
  for (double r : real_roots_in(d2, lo, hi)) best = std::max(best, deriv(r));
  return best;
}

bool Nonlinearity::fprime_bounded(double k, int n, double lo, double hi) const {
  const double bound = n * k;
  return sup_deriv(lo, hi) <= bound + 1e-10 * (1.0 + std::abs(bound));
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  os << "f(u) = ";
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0 && !(i == 0 && coeffs.size() == 1)) continue;
    if (!first) os << " + ";
    os << fmt_double(coeffs[i]);
    if (i == 1) os << "*u";
    if (i > 1) os << "*u^" << i;
    first = false;
  }
  return os.str();
}

double warp(double k, double t) {
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::sin(s * t) / s;
  }
  if (k < 0.0) {
    const double s = std::sqrt(-k);
    return std::sinh(s * t) / s;
  }
  return t;
}

double warp_deriv(double k, double t) {
  if (k > 0.0) return std::cos(std::sqrt(k) * t);
  if (k < 0.0) return std::cosh(std::sqrt(-k) * t);
  return 1.0;
}

double conformal_factor(double k, double t) { return warp_deriv(k, t); }

double sphere_mean_curvature(const SpaceForm& sf, double R) {
  const double h = warp(sf.k, R);
  if (!(R > 0.0) || std::abs(h) < 1e-14 * (1.0 + R)) {
    throw InadmissibleDomain("sphere_mean_curvature: degenerate sphere at R=" +
                             fmt_double(R));
  }
  return (sf.n - 1) * warp_deriv(sf.k, R) / h;
}

double unit_sphere_area(int n) {
  if (n < 2) throw InadmissibleDomain("unit_sphere_area: n must be >= 2");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Measures ball_measures(const SpaceForm& sf, const RadialDomain& dom) {
  validate_domain(sf, dom);
  const double sigma = unit_sphere_area(sf.n);
  const auto integrand = [&](double t) {
    return std::pow(warp(sf.k, t), sf.n - 1);
  };
  Measures m;
  m.volume =
      sigma *
      quadrature::integrate_to_tol(integrand, dom.R_in, dom.R_out, 1e-13).value;
  if (!dom.is_ball()) {
    m.boundary_areas.push_back(sigma * std::pow(warp(sf.k, dom.R_in), sf.n - 1));
  }
  m.boundary_areas.push_back(sigma * std::pow(warp(sf.k, dom.R_out), sf.n - 1));
  return m;
}

}  // namespace serrinlab::geometry
