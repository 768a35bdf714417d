#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "serrinlab/mesh.hpp"

namespace serrinlab::fem2d {

using geometry::Nonlinearity;

// Per-vertex scalar field over a Mesh2D.
struct ScalarField {
  std::vector<double> values;
};

struct SolveStats {
  int newton_iters = 0;
  double residual_inf = 0.0;
  std::vector<double> energy_trace;  // discrete energy at accepted iterates
};

struct FemSolution {
  ScalarField u;
  SolveStats stats;
};

// One boundary sample produced by the variational flux recovery.
struct TraceSample {
  int vertex = -1;
  double theta = 0.0;        // curve parameter
  double weight = 0.0;       // metric arclength weight of the vertex
  double flux_moment = 0.0;  // weak residual R_i = boundary integral of u_nu phi_i
  double u_nu = 0.0;         // pointwise Neumann trace (mass-matrix solve)
  double H = 0.0;            // analytic geodesic curvature (outward normal)
  double X_nu = 0.0;         // <X, nu> of the conformal field
  double u = 0.0;            // Dirichlet value
};

struct BoundaryTrace {
  // loops[l] aligns with mesh.loops[l]: 0 = outer Gamma_0, 1 = inner Gamma_1.
  std::vector<std::vector<TraceSample>> loops;
};

// Assembled P1 finite-element context for a fixed mesh: metric stiffness,
// quadrature caches (6-point order-4 rule per triangle), lumped masses.
class FemProblem {
 public:
  FemProblem(const PlanarDomain& dom, Mesh2D mesh);

  const Mesh2D& mesh() const { return mesh_; }
  const PlanarDomain& domain() const { return dom_; }
  const std::vector<bool>& is_boundary() const { return is_boundary_; }
  double h_eff() const { return mesh_.max_metric_edge; }

  // Damped Newton on the discrete energy; `dirichlet` holds one constant
  // per boundary loop. Throws NewtonDivergence / SingularStiffness.
  FemSolution solve(const Nonlinearity& f, const std::vector<double>& dirichlet,
                    double tol = 1e-11, int max_iters = 60) const;

  // Variationally consistent Neumann trace plus analytic curvature data.
  BoundaryTrace boundary_trace(const ScalarField& u, const Nonlinearity& f) const;

  // Integral of g(u) over the domain with the metric area element.
  double bulk_integral(const std::function<double(double)>& g,
                       const ScalarField& u) const;
  double domain_area() const;

  // Discrete energy E(u) = integral of (|grad u|^2_g / 2 - F(u)).
  double energy(const Nonlinearity& f, const Eigen::VectorXd& u) const;

  // Recovered |grad u|^2_g per vertex: interior by lumped L2 projection of
  // the elementwise gradient, boundary from the Neumann trace (tangential
  // derivative vanishes for constant Dirichlet data).
  std::vector<double> gradient_sq(const ScalarField& u,
                                  const BoundaryTrace& trace) const;

  // Discrete Laplace-Beltrami of a vertex field: -(K p)_i / m_i at interior
  // vertices (boundary entries are 0 and must be ignored).
  std::vector<double> discrete_laplacian(const std::vector<double>& p) const;

  // Diagnostic integral of |traceless Hessian of u|^2 via quadratic
  // least-squares patch recovery; only supported on flat charts (k = 0).
  double traceless_hessian_sq_integral(const ScalarField& u,
                                       const Nonlinearity& f) const;

  // Pointwise Laplacian of P = |grad u|^2 + (2/n) F(u) at interior
  // vertices, evaluated through the differential identity
  //   Delta P = 2 |Hess u|^2 + (2/n - 2) f'(u) |grad u|^2 - (2/n) f(u)^2
  // (flat charts, Delta u = -f substituted) with patch-recovered
  // derivatives. Boundary/unfittable entries are NaN. Throws
  // InvalidArgument on curved charts.
  std::vector<double> p_laplacian_flat(const ScalarField& u,
                                       const Nonlinearity& f) const;

 private:
  using SpMat = Eigen::SparseMatrix<double>;

  void assemble_geometry();
  Eigen::VectorXd load_vector(const Nonlinearity& f, const Eigen::VectorXd& u) const;
  SpMat fprime_matrix(const Nonlinearity& f, const Eigen::VectorXd& u) const;

  // Quadratic least-squares fit over the 2-ring patch of each interior
  // vertex; `ok` is false at boundary vertices and degenerate patches.
  struct QuadFit {
    bool ok = false;
    double ux = 0.0, uy = 0.0, uxx = 0.0, uxy = 0.0, uyy = 0.0;
  };
  std::vector<QuadFit> quadratic_fits(const ScalarField& u) const;

  PlanarDomain dom_;
  Mesh2D mesh_;
  SpMat K_;                          // metric stiffness over all dofs
  std::vector<double> lumped_mass_;  // integral of phi_i
  std::vector<bool> is_boundary_;
  std::vector<int> interior_index_;  // dof -> interior index or -1

  struct TriCache {
    std::array<std::array<double, 2>, 3> grad;  // hat gradients (chart)
    std::array<double, 6> measure;              // w_q * A_chart * sqrt(det g)
    std::array<std::array<double, 3>, 6> ginv;  // (g^-1)_xx, _xy, _yy at q
  };
  std::vector<TriCache> tri_cache_;
};

// Free-function forms of the module operations.
FemSolution solve_fem(const PlanarDomain& dom, const Mesh2D& mesh,
                      const Nonlinearity& f,
                      const std::vector<double>& dirichlet, double tol = 1e-11,
                      int max_iters = 60);
BoundaryTrace boundary_trace(const PlanarDomain& dom, const Mesh2D& mesh,
                             const ScalarField& u, const Nonlinearity& f);

}  // namespace serrinlab::fem2d
