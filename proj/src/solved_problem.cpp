#include "serrinlab/solved_problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "serrinlab/errors.hpp"
#include "serrinlab/quadrature.hpp"

namespace serrinlab::identities {

double BoundaryComponent::integral_flux() const {
  double acc = 0.0;
  for (const auto& s : samples) acc += s.flux_moment;
  return acc;
}

double BoundaryComponent::integral(
    const std::function<double(const Sample&)>& g) const {
  double acc = 0.0;
  for (const auto& s : samples) acc += s.weight * g(s);
  return acc;
}

double BoundaryComponent::mean_u_nu() const {
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    num += s.weight * s.u_nu;
    den += s.weight;
  }
  return num / den;
}

double BoundaryComponent::max_dev_u_nu() const {
  const double mean = mean_u_nu();
  double dev = 0.0;
  for (const auto& s : samples) dev = std::max(dev, std::abs(s.u_nu - mean));
  return dev;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SolvedProblem SolvedProblem::from_radial(radial::RadialSolution sol) {
  SolvedProblem p;
  p.sf_ = sol.sf;
  p.f_ = sol.f;

  // Radial traces are single-sample components with weight = sphere area and
  // an exact flux moment u_nu * area.
  auto make_component = [&](const radial::BoundaryData& bd, bool outer) {
    BoundaryComponent c;
    c.tag = outer ? "gamma0" : "gamma1";
    c.area = bd.area;
    Sample s;
    s.weight = bd.area;
    s.flux_moment = bd.u_nu * bd.area;
    s.u_nu = bd.u_nu;
    s.H = bd.H;
    s.u = bd.u;
    s.X_nu = (outer ? 1.0 : -1.0) * geometry::warp(sol.sf.k, bd.radius);
    c.samples.push_back(s);
    return c;
  };
  if (sol.dom.is_ball()) {
    p.components_.push_back(make_component(sol.boundary.back(), true));
  } else {
    p.components_.push_back(make_component(sol.boundary.back(), true));
    p.components_.push_back(make_component(sol.boundary.front(), false));
  }

  const geometry::Measures meas = geometry::ball_measures(sol.sf, sol.dom);
  p.volume_ = meas.volume;
  p.u_max_ = *std::max_element(sol.u.begin(), sol.u.end());
  p.u_min_ = *std::min_element(sol.u.begin(), sol.u.end());
  p.h_eff_ = sol.spacing();

  std::ostringstream desc;
  desc << (sol.dom.is_ball() ? "ball" : "annulus") << " k=" << fmt_double(sol.sf.k)
       << " n=" << sol.sf.n;
  if (!sol.dom.is_ball()) desc << " R_in=" << fmt_double(sol.dom.R_in);
  desc << " R_out=" << fmt_double(sol.dom.R_out) << " m=" << (sol.r.size() - 1)
       << " " << sol.f.describe();
  p.description_ = desc.str();

  p.radial_ = std::move(sol);
  p.finish_setup();
  return p;
}

SolvedProblem SolvedProblem::from_fem(const fem2d::PlanarDomain& dom,
                                      fem2d::Mesh2D mesh, const Nonlinearity& f,
                                      const std::vector<double>& dirichlet,
                                      double tol) {
  auto problem = std::make_shared<fem2d::FemProblem>(dom, std::move(mesh));
  fem2d::FemSolution sol = problem->solve(f, dirichlet, tol);
  return from_fem_solution(std::move(problem), std::move(sol.u), f);
}

SolvedProblem SolvedProblem::from_fem_solution(
    std::shared_ptr<fem2d::FemProblem> problem, fem2d::ScalarField field,
    const Nonlinearity& f) {
  SolvedProblem p;
  p.sf_ = problem->domain().sf;
  p.f_ = f;
  p.fem_ = problem;
  p.field_ = std::move(field);
  p.trace_ = problem->boundary_trace(p.field_, f);

  for (std::size_t l = 0; l < p.trace_->loops.size(); ++l) {
    BoundaryComponent c;
    c.tag = (l == 0) ? "gamma0" : "gamma1";
    for (const auto& t : p.trace_->loops[l]) {
      Sample s;
      s.weight = t.weight;
      s.flux_moment = t.flux_moment;
      s.u_nu = t.u_nu;
      s.H = t.H;
      s.u = t.u;
      s.X_nu = t.X_nu;
      c.samples.push_back(s);
      c.area += t.weight;
    }
    p.components_.push_back(std::move(c));
  }

  p.volume_ = problem->domain_area();
  p.u_max_ = *std::max_element(p.field_.values.begin(), p.field_.values.end());
  p.u_min_ = *std::min_element(p.field_.values.begin(), p.field_.values.end());
  p.h_eff_ = problem->h_eff();

  const auto& dom = problem->domain();
  std::ostringstream desc;
  desc << (dom.has_inner() ? "planar-annulus" : "planar") << " k="
       << fmt_double(dom.sf.k) << " n=2 vertices="
       << problem->mesh().n_vertices() << " h_eff=" << fmt_double(p.h_eff_)
       << " " << f.describe();
  p.description_ = desc.str();

  p.finish_setup();
  return p;
}

void SolvedProblem::finish_setup() {
  double lo = std::min(u_min_, 0.0);
  double hi = std::max(u_max_, 0.0);
  for (const auto& c : components_) {
    for (const auto& s : c.samples) {
      lo = std::min(lo, s.u);
      hi = std::max(hi, s.u);
    }
  }
  fprime_sup_ = f_.sup_deriv(lo, hi);
  fprime_ok_ = f_.fprime_bounded(sf_.k, sf_.n, lo, hi);
}

const BoundaryComponent& SolvedProblem::outer() const { return components_.at(0); }

const BoundaryComponent& SolvedProblem::inner() const {
  if (components_.size() < 2) {
    throw NotAnnular("inner(): problem has a single boundary component");
  }
  return components_[1];
}

const radial::RadialSolution& SolvedProblem::radial_solution() const {
  if (!radial_) throw InvalidArgument("radial_solution(): not a radial problem");
  return *radial_;
}

const fem2d::FemProblem& SolvedProblem::fem_problem() const {
  if (!fem_) throw InvalidArgument("fem_problem(): not a FEM problem");
  return *fem_;
}

const fem2d::ScalarField& SolvedProblem::fem_field() const {
  if (!fem_) throw InvalidArgument("fem_field(): not a FEM problem");
  return field_;
}

double SolvedProblem::bulk_integral(const std::function<double(double)>& g) const {
  if (radial_) {
    const auto& sol = *radial_;
    const double sigma = geometry::unit_sphere_area(sf_.n);
    std::vector<double> vals(sol.r.size());
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
      vals[i] = g(sol.u[i]) * std::pow(geometry::warp(sf_.k, sol.r[i]), sf_.n - 1);
    }
    return sigma * quadrature::simpson_uniform(vals, sol.spacing());
  }
  return fem_->bulk_integral(g, field_);
}

std::optional<double> SolvedProblem::traceless_hessian_sq() const {
  if (radial_) {
    const auto& sol = *radial_;
    // For radial u the traceless Hessian has squared norm
    // ((n-1)/n) (u'' - (h'/h) u')^2 with u'' obtained from the ODE.
    const int n = sf_.n;
    std::vector<double> vals(sol.r.size());
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
      const double r = sol.r[i];
      double diff;
      if (r == 0.0) {
        diff = 0.0;  // A and B share the limit -f(u(0))/n at the pole
      } else {
        const double hp_over_h =
            geometry::warp_deriv(sf_.k, r) / geometry::warp(sf_.k, r);
        const double upp = -sol.f(sol.u[i]) - (n - 1) * hp_over_h * sol.du[i];
        diff = upp - hp_over_h * sol.du[i];
      }
      vals[i] = diff * diff * std::pow(geometry::warp(sf_.k, r), n - 1);
    }
    const double sigma = geometry::unit_sphere_area(n);
    return (n - 1.0) / n * sigma *
           quadrature::simpson_uniform(vals, sol.spacing());
  }
  if (sf_.k == 0.0) {
    return fem_->traceless_hessian_sq_integral(field_, f_);
  }
  return std::nullopt;
}

}  // namespace serrinlab::identities
