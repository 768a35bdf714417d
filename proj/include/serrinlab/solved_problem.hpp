#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "serrinlab/fem.hpp"
#include "serrinlab/radial.hpp"

namespace serrinlab::identities {

using geometry::Nonlinearity;
using geometry::SpaceForm;

// One boundary sample in the unified trace view. `weight` integrates plain
// boundary densities; `flux_moment` integrates densities of the form
// u_nu * (smooth), which for FEM problems is exact in the weak sense.
struct Sample {
  double weight = 0.0;
  double flux_moment = 0.0;
  double u_nu = 0.0;
  double H = 0.0;
  double u = 0.0;
  double X_nu = 0.0;
};

struct BoundaryComponent {
  std::string tag;  // "gamma0" (outer) or "gamma1" (inner)
  std::vector<Sample> samples;
  double area = 0.0;

  double integral_flux() const;               // boundary integral of u_nu
  double integral(const std::function<double(const Sample&)>& g) const;
  double mean_u_nu() const;                    // area-weighted mean
  double max_dev_u_nu() const;                 // max |u_nu - mean|
};

// Unified wrapper around a solved radial or FEM problem, carrying the
// traces, bulk quadrature and hypothesis bookkeeping the identity checkers
// need. On these space forms Ric = (n-1) k g holds exactly, so the Ricci
// hypothesis is recorded as the constant (n-1) k.
class SolvedProblem {
 public:
  static SolvedProblem from_radial(radial::RadialSolution sol);
  static SolvedProblem from_fem(const fem2d::PlanarDomain& dom,
                                fem2d::Mesh2D mesh, const Nonlinearity& f,
                                const std::vector<double>& dirichlet,
                                double tol = 1e-11);
  // Wraps an already-solved FEM field on an existing assembly.
  static SolvedProblem from_fem_solution(
      std::shared_ptr<fem2d::FemProblem> problem, fem2d::ScalarField field,
      const Nonlinearity& f);

  const SpaceForm& sf() const { return sf_; }
  const Nonlinearity& f() const { return f_; }
  int n_components() const { return static_cast<int>(components_.size()); }
  const BoundaryComponent& outer() const;
  const BoundaryComponent& inner() const;  // throws NotAnnular if absent
  const std::vector<BoundaryComponent>& components() const { return components_; }

  bool is_radial() const { return radial_.has_value(); }
  const radial::RadialSolution& radial_solution() const;
  const fem2d::FemProblem& fem_problem() const;
  const fem2d::ScalarField& fem_field() const;

  // Integral of g(u) over the domain, on the native discretization.
  double bulk_integral(const std::function<double(double)>& g) const;
  double volume() const { return volume_; }

  double u_max() const { return u_max_; }
  double u_min() const { return u_min_; }
  // Standing hypothesis f' <= n k over the solution's value range.
  bool fprime_ok() const { return fprime_ok_; }
  double fprime_sup() const { return fprime_sup_; }

  // Resolution parameter: grid spacing (radial) or max metric edge (FEM).
  double h_eff() const { return h_eff_; }
  const std::string& description() const { return description_; }

  // Integral of |traceless Hessian of u|^2: analytic from the ODE for
  // radial solutions; least-squares recovery (diagnostic quality, flat
  // charts only) for FEM solutions. nullopt when not computable.
  std::optional<double> traceless_hessian_sq() const;

 private:
  SolvedProblem() = default;

  SpaceForm sf_{2, 0.0};
  Nonlinearity f_;
  std::vector<BoundaryComponent> components_;  // [0] outer, [1] inner (if any)
  std::optional<radial::RadialSolution> radial_;
  std::shared_ptr<fem2d::FemProblem> fem_;
  fem2d::ScalarField field_;
  std::optional<fem2d::BoundaryTrace> trace_;
  double volume_ = 0.0;
  double u_max_ = 0.0;
  double u_min_ = 0.0;
  bool fprime_ok_ = false;
  double fprime_sup_ = 0.0;
  double h_eff_ = 0.0;
  std::string description_;

  void finish_setup();

  friend class SolvedProblemAccess;
};

// Internal accessor used by the identity checkers for discretization-side
// structures (FEM laplacian, gradient recovery).
class SolvedProblemAccess {
 public:
  static const std::optional<fem2d::BoundaryTrace>& trace(const SolvedProblem& p) {
    return p.trace_;
  }
};

}  // namespace serrinlab::identities
