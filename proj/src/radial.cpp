#include "serrinlab/radial.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <string>

#include "serrinlab/errors.hpp"

namespace serrinlab::radial {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// 4th-order finite-difference stencils on a uniform grid (spacing d).
// First derivative rows of the (m+1)x(m+1) differentiation matrix.
void d1_row(int i, int m, double d, std::vector<Triplet>& out) {
  const double c = 1.0 / (12.0 * d);
  auto add = [&](int j, double v) { out.emplace_back(i, j, v * c); };
  if (i == 0) {
    add(0, -25); add(1, 48); add(2, -36); add(3, 16); add(4, -3);
  } else if (i == 1) {
    add(0, -3); add(1, -10); add(2, 18); add(3, -6); add(4, 1);
  } else if (i == m - 1) {
    add(m - 4, -1); add(m - 3, 6); add(m - 2, -18); add(m - 1, 10); add(m, 3);
  } else if (i == m) {
    add(m - 4, 3); add(m - 3, -16); add(m - 2, 36); add(m - 1, -48); add(m, 25);
  } else {
    add(i - 2, 1); add(i - 1, -8); add(i + 1, 8); add(i + 2, -1);
  }
}

// Second derivative rows (only needed at interior nodes 1..m-1).
void d2_row(int i, int m, double d, std::vector<Triplet>& out) {
  const double c = 1.0 / (12.0 * d * d);
  auto add = [&](int j, double v) { out.emplace_back(i, j, v * c); };
  if (i == 1) {
    add(0, 10); add(1, -15); add(2, -4); add(3, 14); add(4, -6); add(5, 1);
  } else if (i == m - 1) {
    add(m - 5, 1); add(m - 4, -6); add(m - 3, 14); add(m - 2, -4);
    add(m - 1, -15); add(m, 10);
  } else {
    add(i - 2, -1); add(i - 1, 16); add(i, -30); add(i + 1, 16); add(i + 2, -1);
  }
}

// Applies one D1 row to a value vector.
double apply_d1(int i, int m, double d, const std::vector<double>& u) {
  std::vector<Triplet> t;
  d1_row(i, m, d, t);
  double acc = 0.0;
  for (const auto& e : t) acc += e.value() * u[e.col()];
  return acc;
}

struct LinearOperator {
  SpMat L;              // D2 + diag(coef) * D1 on PDE rows, constraint rows empty
  std::vector<int> pde_rows;  // rows carrying the PDE
};

LinearOperator build_operator(const SpaceForm& sf, const std::vector<double>& r,
                              bool ball) {
  const int m = static_cast<int>(r.size()) - 1;
  const double d = r[1] - r[0];
  std::vector<Triplet> trips;
  LinearOperator op;
  for (int i = 1; i < m; ++i) {
    d2_row(i, m, d, trips);
    const double coef = (sf.n - 1) * geometry::warp_deriv(sf.k, r[i]) /
                        geometry::warp(sf.k, r[i]);
    std::vector<Triplet> d1t;
    d1_row(i, m, d, d1t);
    for (const auto& e : d1t) trips.emplace_back(e.row(), e.col(), coef * e.value());
    op.pde_rows.push_back(i);
  }
  // Row 0: regularity u'(0) = 0 for balls, Dirichlet for annuli.
  if (ball) {
    d1_row(0, m, d, trips);
  } else {
    trips.emplace_back(0, 0, 1.0);
  }
  // Row m: outer Dirichlet.
  trips.emplace_back(m, m, 1.0);
  op.L.resize(m + 1, m + 1);
  op.L.setFromTriplets(trips.begin(), trips.end());
  op.L.makeCompressed();
  return op;
}

// Residual of the discrete system for source f at state u.
Eigen::VectorXd residual(const LinearOperator& op, const Nonlinearity& f,
                         const Eigen::VectorXd& u, double inner_value,
                         bool ball) {
  Eigen::VectorXd g = op.L * u;
  const int m = static_cast<int>(u.size()) - 1;
  for (int i : op.pde_rows) g[i] += f(u[i]);
  if (!ball) g[0] -= inner_value;
  (void)m;
  return g;
}

struct NewtonOutcome {
  bool converged = false;
  int iters = 0;
};

NewtonOutcome newton_solve(const LinearOperator& op, const Nonlinearity& f,
                           Eigen::VectorXd& u, double inner_value, bool ball,
                           double tol, int max_iters) {
  const int size = static_cast<int>(u.size());
  Eigen::SparseLU<SpMat> lu;
  NewtonOutcome out;
  Eigen::VectorXd g = residual(op, f, u, inner_value, ball);
  for (out.iters = 0; out.iters < max_iters; ++out.iters) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm < tol) {
      out.converged = true;
      return out;
    }
    SpMat jac = op.L;
    for (int i : op.pde_rows) jac.coeffRef(i, i) += f.deriv(u[i]);
    jac.makeCompressed();
    lu.compute(jac);
    if (lu.info() != Eigen::Success) return out;
    const Eigen::VectorXd step = lu.solve(-g);
    // Armijo backtracking on the euclidean residual norm.
    const double g2 = g.norm();
    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      Eigen::VectorXd trial = u + t * step;
      Eigen::VectorXd gt = residual(op, f, trial, inner_value, ball);
      if (gt.norm() <= (1.0 - 1e-4 * t) * g2) {
        u = trial;
        g = gt;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return out;  // stalled
    (void)size;
  }
  out.converged = residual(op, f, u, inner_value, ball).lpNorm<Eigen::Infinity>() < tol;
  return out;
}

}  // namespace

double RadialSolution::u_max() const {
  return *std::max_element(u.begin(), u.end());
}

namespace {

double lagrange_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
  // xs/ys are the 6 interpolation nodes.
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    double term = ys[i];
    for (int j = 0; j < 6; ++j) {
      if (j != i) term *= (x - xs[j]) / (xs[i] - xs[j]);
    }
    acc += term;
  }
  return acc;
}

double interp6(const std::vector<double>& r, const std::vector<double>& v,
               double x) {
  const int m = static_cast<int>(r.size()) - 1;
  if (m < 5) throw InvalidArgument("interp6: grid too small");
  const double d = r[1] - r[0];
  int base = static_cast<int>(std::floor((x - r[0]) / d)) - 2;
  base = std::clamp(base, 0, m - 5);
  std::vector<double> xs(r.begin() + base, r.begin() + base + 6);
  std::vector<double> ys(v.begin() + base, v.begin() + base + 6);
  return lagrange_eval(xs, ys, x);
}

}  // namespace

double RadialSolution::value_at(double x) const { return interp6(r, u, x); }

double RadialSolution::deriv_at(double x) const { return interp6(r, du, x); }

namespace {

void fill_boundary(RadialSolution& sol) {
  const auto& sf = sol.sf;
  const auto& dom = sol.dom;
  const geometry::Measures meas = geometry::ball_measures(sf, dom);
  const int m = static_cast<int>(sol.r.size()) - 1;
  if (!dom.is_ball()) {
    BoundaryData inner;
    inner.radius = dom.R_in;
    inner.u = sol.u[0];
    inner.u_nu = -sol.du[0];  // outward normal points toward the pole
    inner.H = -geometry::sphere_mean_curvature(sf, dom.R_in);
    inner.area = meas.boundary_areas[0];
    sol.boundary.push_back(inner);
  }
  BoundaryData outer;
  outer.radius = dom.R_out;
  outer.u = sol.u[m];
  outer.u_nu = sol.du[m];
  outer.H = geometry::sphere_mean_curvature(sf, dom.R_out);
  outer.area = meas.boundary_areas.back();
  sol.boundary.push_back(outer);
}

}  // namespace

RadialSolution solve_radial(const SpaceForm& sf, const RadialDomain& dom,
                            const Nonlinearity& f, double inner_value,
                            int grid_size, double tol_scale, int max_iters) {
  geometry::validate_domain(sf, dom);
  if (grid_size < 16) throw InvalidArgument("solve_radial: grid_size must be >= 16");
  const int m = grid_size;
  const bool ball = dom.is_ball();

  RadialSolution sol;
  sol.sf = sf;
  sol.dom = dom;
  sol.f = f;
  sol.r.resize(m + 1);
  const double d = (dom.R_out - dom.R_in) / m;
  for (int i = 0; i <= m; ++i) sol.r[i] = dom.R_in + i * d;
  sol.r[m] = dom.R_out;

  const LinearOperator op = build_operator(sf, sol.r, ball);
  const double scale = 1.0 + std::abs(f.f0()) + std::abs(inner_value);
  // The 4th-order stencils amplify rounding by ~1/d^2; never demand a
  // residual below that plateau or Newton stalls on noise.
  const double rounding_floor =
      8.0 * std::numeric_limits<double>::epsilon() * scale / (d * d);
  const double tol = std::max(tol_scale * scale, rounding_floor);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m + 1);
  NewtonOutcome outcome = newton_solve(op, f, u, inner_value, ball, tol, max_iters);
  int total_iters = outcome.iters;
  if (!outcome.converged && f.degree() >= 2) {
    // Continuation from the linear truncation of f toward the full source.
    u.setZero();
    constexpr int kStages = 8;
    for (int s = 1; s <= kStages; ++s) {
      Nonlinearity fs = f;
      const double blend = static_cast<double>(s) / kStages;
      for (std::size_t i = 2; i < fs.coeffs.size(); ++i) fs.coeffs[i] *= blend;
      outcome = newton_solve(op, fs, u, inner_value, ball, tol, max_iters);
      total_iters += outcome.iters;
      if (!outcome.converged) break;
    }
  }
  if (!outcome.converged) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "solve_radial: Newton failed after %d iterations "
                  "(continuation included) for %s",
                  total_iters, f.describe().c_str());
    throw NonConvergence(buf);
  }

  sol.u.assign(u.data(), u.data() + m + 1);
  sol.du.resize(m + 1);
  for (int i = 0; i <= m; ++i) sol.du[i] = apply_d1(i, m, d, sol.u);
  const Eigen::VectorXd g = residual(op, f, u, inner_value, ball);
  double rmax = 0.0;
  for (int i : op.pde_rows) rmax = std::max(rmax, std::abs(g[i]));
  sol.residual_max = rmax;
  sol.newton_iters = total_iters;
  fill_boundary(sol);
  return sol;
}

ClosedForm closed_form_linear(const SpaceForm& sf, const RadialDomain& dom,
                              int grid_size) {
  geometry::validate_domain(sf, dom);
  if (grid_size < 16) throw InvalidArgument("closed_form_linear: grid_size must be >= 16");
  const double k = sf.k;
  const double R1 = dom.R_out;

  // u(r) and u'(r) for the family f(u) = n + n k u with u(R_out) = 0.
  auto eval = [&](double r, double& u, double& du) {
    if (k == 0.0) {
      u = 0.5 * (R1 * R1 - r * r);
      du = -r;
    } else if (k > 0.0) {
      const double s = std::sqrt(k);
      const double c = std::cos(s * R1);
      u = (std::cos(s * r) / c - 1.0) / k;
      du = -s * std::sin(s * r) / (k * c);
    } else {
      const double s = std::sqrt(-k);
      const double c = std::cosh(s * R1);
      u = (std::cosh(s * r) / c - 1.0) / k;
      du = s * std::sinh(s * r) / (k * c);
    }
  };
  if (k > 0.0 && std::abs(std::cos(std::sqrt(k) * R1)) < 1e-12) {
    throw DegenerateAnnulus("closed_form_linear: cos(sqrt(k) R_out) = 0 at R_out=" +
                            std::to_string(R1));
  }

  ClosedForm cf;
  RadialSolution& sol = cf.sol;
  sol.sf = sf;
  sol.dom = dom;
  sol.f = Nonlinearity::linear_family(sf);
  const int m = grid_size;
  sol.r.resize(m + 1);
  sol.u.resize(m + 1);
  sol.du.resize(m + 1);
  const double d = (dom.R_out - dom.R_in) / m;
  for (int i = 0; i <= m; ++i) {
    sol.r[i] = dom.R_in + i * d;
    eval(sol.r[i], sol.u[i], sol.du[i]);
  }
  sol.r[m] = dom.R_out;
  sol.residual_max = 0.0;
  sol.newton_iters = 0;
  fill_boundary(sol);
  cf.c0 = sol.boundary.back().u_nu;
  if (!dom.is_ball()) {
    cf.a = sol.boundary.front().u;
    cf.c1 = sol.boundary.front().u_nu;
  }
  return cf;
}

GateReport rigidity_gate(const SpaceForm& sf, double R, const Nonlinearity& f,
                         double psi_at_R) {
  if (!sf.radius_admissible(R)) {
    throw InadmissibleDomain("rigidity_gate: radius not admissible");
  }
  const double hp = geometry::warp_deriv(sf.k, R);
  if (!(hp > 0.0)) {
    throw InadmissibleDomain("rigidity_gate: requires h'(R) > 0");
  }
  if (!(psi_at_R > 0.0)) {
    throw InvalidArgument("rigidity_gate: psi(R) must be positive");
  }
  GateReport rep;
  rep.lhs = (sf.n - 1) * f.f0() * geometry::warp(sf.k, R) / (sf.n * hp);
  rep.rhs = psi_at_R;
  rep.holds = rep.lhs <= rep.rhs + 1e-12 * (1.0 + std::abs(rep.rhs));
  return rep;
}

}  // namespace serrinlab::radial
