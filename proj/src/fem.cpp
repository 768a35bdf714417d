#include "serrinlab/fem.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "serrinlab/errors.hpp"

namespace serrinlab::fem2d {

namespace {

// 6-point order-4 triangle quadrature rule (barycentric, weights sum to 1).
constexpr double kQA1 = 0.445948490915965;
constexpr double kQW1 = 0.223381589678011;
constexpr double kQA2 = 0.091576213509771;
constexpr double kQW2 = 0.109951743655322;

constexpr std::array<std::array<double, 3>, 6> kQBary = {{
    {1.0 - 2.0 * kQA1, kQA1, kQA1},
    {kQA1, 1.0 - 2.0 * kQA1, kQA1},
    {kQA1, kQA1, 1.0 - 2.0 * kQA1},
    {1.0 - 2.0 * kQA2, kQA2, kQA2},
    {kQA2, 1.0 - 2.0 * kQA2, kQA2},
    {kQA2, kQA2, 1.0 - 2.0 * kQA2},
}};
constexpr std::array<double, 6> kQWeights = {kQW1, kQW1, kQW1,
                                             kQW2, kQW2, kQW2};

using Triplet = Eigen::Triplet<double>;

}  // namespace

FemProblem::FemProblem(const PlanarDomain& dom, Mesh2D mesh)
    : dom_(dom), mesh_(std::move(mesh)) {
  if (dom_.has_inner() != mesh_.has_inner()) {
    throw InvalidArgument("FemProblem: domain/mesh topology mismatch");
  }
  assemble_geometry();
}

void FemProblem::assemble_geometry() {
  const int nv = mesh_.n_vertices();
  is_boundary_.assign(nv, false);
  for (const auto& loop : mesh_.loops) {
    for (int v : loop) is_boundary_[v] = true;
  }
  interior_index_.assign(nv, -1);
  int next = 0;
  for (int v = 0; v < nv; ++v) {
    if (!is_boundary_[v]) interior_index_[v] = next++;
  }

  tri_cache_.resize(mesh_.tris.size());
  lumped_mass_.assign(nv, 0.0);
  std::vector<Triplet> ktrips;
  ktrips.reserve(mesh_.tris.size() * 9);
  const double k = mesh_.k;

  for (std::size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& tri = mesh_.tris[t];
    const auto& p0 = mesh_.xy[tri[0]];
    const auto& p1 = mesh_.xy[tri[1]];
    const auto& p2 = mesh_.xy[tri[2]];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p1[1] - p0[1]) * (p2[0] - p0[0]);
    if (!(det > 0.0)) {
      throw MeshFailure("FemProblem: non-positive triangle in chart");
    }
    const double area = 0.5 * det;
    TriCache& cache = tri_cache_[t];
    // Gradients of the barycentric hat functions.
    cache.grad[0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
    cache.grad[1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
    cache.grad[2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};

    std::array<std::array<double, 3>, 3> kloc{};
    for (int q = 0; q < 6; ++q) {
      const double x = kQBary[q][0] * p0[0] + kQBary[q][1] * p1[0] +
                       kQBary[q][2] * p2[0];
      const double y = kQBary[q][0] * p0[1] + kQBary[q][1] * p1[1] +
                       kQBary[q][2] * p2[1];
      const double r2 = x * x + y * y;
      const double r = std::sqrt(r2);
      const double s = metric_s(k, r);
      const double sqrtdet = metric_sqrt_det(k, r);
      cache.measure[q] = kQWeights[q] * area * sqrtdet;
      // g^-1 = P_r + (1/s) P_theta with P_r the radial projector.
      double gxx, gxy, gyy;
      if (r2 < 1e-300) {
        gxx = 1.0;
        gxy = 0.0;
        gyy = 1.0;
      } else {
        const double cx = x / r, cy = y / r;
        const double inv_s = 1.0 / s;
        gxx = cx * cx + inv_s * cy * cy;
        gxy = cx * cy - inv_s * cx * cy;
        gyy = cy * cy + inv_s * cx * cx;
      }
      cache.ginv[q] = {gxx, gxy, gyy};
      for (int a = 0; a < 3; ++a) {
        lumped_mass_[tri[a]] += cache.measure[q] * kQBary[q][a];
        for (int b = 0; b < 3; ++b) {
          const double quad =
              cache.grad[a][0] * (gxx * cache.grad[b][0] + gxy * cache.grad[b][1]) +
              cache.grad[a][1] * (gxy * cache.grad[b][0] + gyy * cache.grad[b][1]);
          kloc[a][b] += cache.measure[q] * quad;
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        ktrips.emplace_back(tri[a], tri[b], kloc[a][b]);
      }
    }
  }
  K_.resize(nv, nv);
  K_.setFromTriplets(ktrips.begin(), ktrips.end());
  K_.makeCompressed();
}

Eigen::VectorXd FemProblem::load_vector(const Nonlinearity& f,
                                        const Eigen::VectorXd& u) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(u.size());
  for (std::size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& tri = mesh_.tris[t];
    const TriCache& cache = tri_cache_[t];
    for (int q = 0; q < 6; ++q) {
      const double uq = kQBary[q][0] * u[tri[0]] + kQBary[q][1] * u[tri[1]] +
                        kQBary[q][2] * u[tri[2]];
      const double fu = f(uq) * cache.measure[q];
      for (int a = 0; a < 3; ++a) b[tri[a]] += fu * kQBary[q][a];
    }
  }
  return b;
}

FemProblem::SpMat FemProblem::fprime_matrix(const Nonlinearity& f,
                                            const Eigen::VectorXd& u) const {
  std::vector<Triplet> trips;
  trips.reserve(mesh_.tris.size() * 9);
  for (std::size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& tri = mesh_.tris[t];
    const TriCache& cache = tri_cache_[t];
    std::array<std::array<double, 3>, 3> mloc{};
    for (int q = 0; q < 6; ++q) {
      const double uq = kQBary[q][0] * u[tri[0]] + kQBary[q][1] * u[tri[1]] +
                        kQBary[q][2] * u[tri[2]];
      const double fp = f.deriv(uq) * cache.measure[q];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          mloc[a][b] += fp * kQBary[q][a] * kQBary[q][b];
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        trips.emplace_back(tri[a], tri[b], mloc[a][b]);
      }
    }
  }
  SpMat mat(u.size(), u.size());
  mat.setFromTriplets(trips.begin(), trips.end());
  mat.makeCompressed();
  return mat;
}

double FemProblem::energy(const Nonlinearity& f, const Eigen::VectorXd& u) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& tri = mesh_.tris[t];
    const TriCache& cache = tri_cache_[t];
    const double gx = cache.grad[0][0] * u[tri[0]] + cache.grad[1][0] * u[tri[1]] +
                      cache.grad[2][0] * u[tri[2]];
    const double gy = cache.grad[0][1] * u[tri[0]] + cache.grad[1][1] * u[tri[1]] +
                      cache.grad[2][1] * u[tri[2]];
    for (int q = 0; q < 6; ++q) {
      const double uq = kQBary[q][0] * u[tri[0]] + kQBary[q][1] * u[tri[1]] +
                        kQBary[q][2] * u[tri[2]];
      const double quad = gx * (cache.ginv[q][0] * gx + cache.ginv[q][1] * gy) +
                          gy * (cache.ginv[q][1] * gx + cache.ginv[q][2] * gy);
      acc += cache.measure[q] * (0.5 * quad - f.antideriv(uq));
    }
  }
  return acc;
}

FemSolution FemProblem::solve(const Nonlinearity& f,
                              const std::vector<double>& dirichlet,
                              double tol, int max_iters) const {
  if (dirichlet.size() != mesh_.loops.size()) {
    throw InvalidArgument("solve: need one Dirichlet constant per boundary loop");
  }
  const int nv = mesh_.n_vertices();
  const int nint = nv - static_cast<int>(std::count(is_boundary_.begin(),
                                                    is_boundary_.end(), true));

  Eigen::VectorXd u = Eigen::VectorXd::Zero(nv);
  for (std::size_t l = 0; l < mesh_.loops.size(); ++l) {
    for (int v : mesh_.loops[l]) u[v] = dirichlet[l];
  }

  SolveStats stats;
  Eigen::SparseLU<SpMat> lu;
  std::ostringstream trace;
  double e_cur = energy(f, u);
  stats.energy_trace.push_back(e_cur);

  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::VectorXd grad_full = K_ * u - load_vector(f, u);
    Eigen::VectorXd grad(nint);
    for (int v = 0; v < nv; ++v) {
      if (interior_index_[v] >= 0) grad[interior_index_[v]] = grad_full[v];
    }
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    trace << "iter " << iter << " residual " << gnorm << "\n";
    if (gnorm <= tol) {
      stats.newton_iters = iter;
      stats.residual_inf = gnorm;
      FemSolution out;
      out.u.values.assign(u.data(), u.data() + nv);
      out.stats = std::move(stats);
      return out;
    }

    // Interior block of the Newton matrix K - M_{f'}.
    const SpMat mfp = fprime_matrix(f, u);
    std::vector<Triplet> trips;
    for (int col = 0; col < nv; ++col) {
      if (interior_index_[col] < 0) continue;
      for (SpMat::InnerIterator it(K_, col); it; ++it) {
        const int row = static_cast<int>(it.row());
        if (interior_index_[row] >= 0) {
          trips.emplace_back(interior_index_[row], interior_index_[col], it.value());
        }
      }
      for (SpMat::InnerIterator it(mfp, col); it; ++it) {
        const int row = static_cast<int>(it.row());
        if (interior_index_[row] >= 0) {
          trips.emplace_back(interior_index_[row], interior_index_[col], -it.value());
        }
      }
    }
    SpMat jac(nint, nint);
    jac.setFromTriplets(trips.begin(), trips.end());
    jac.makeCompressed();
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      throw SingularStiffness("solve: Newton matrix factorization failed\n" +
                              trace.str());
    }
    const Eigen::VectorXd step_int = lu.solve(-grad);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(nv);
    for (int v = 0; v < nv; ++v) {
      if (interior_index_[v] >= 0) step[v] = step_int[interior_index_[v]];
    }

    const double slope = grad.dot(step_int);  // directional derivative of E
    double t_step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd trial = u + t_step * step;
      const double e_trial = energy(f, trial);
      if (e_trial <= e_cur + 1e-4 * t_step * slope) {
        u = trial;
        e_cur = e_trial;
        stats.energy_trace.push_back(e_cur);
        accepted = true;
        break;
      }
      t_step *= 0.5;
    }
    if (!accepted) {
      throw NewtonDivergence("solve: line search stalled\n" + trace.str());
    }
  }
  throw NewtonDivergence("solve: Newton failed to converge\n" + trace.str());
}

BoundaryTrace FemProblem::boundary_trace(const ScalarField& field,
                                         const Nonlinearity& f) const {
  const int nv = mesh_.n_vertices();
  if (static_cast<int>(field.values.size()) != nv) {
    throw InvalidArgument("boundary_trace: field size mismatch");
  }
  Eigen::VectorXd u(nv);
  for (int v = 0; v < nv; ++v) u[v] = field.values[v];
  const Eigen::VectorXd resid = K_ * u - load_vector(f, u);

  BoundaryTrace out;
  for (std::size_t l = 0; l < mesh_.loops.size(); ++l) {
    const auto& loop = mesh_.loops[l];
    const auto& thetas = mesh_.loop_theta[l];
    const int len = static_cast<int>(loop.size());
    const bool outer = (l == 0);
    const StarCurve& curve = outer ? dom_.outer : *dom_.inner;

    // Metric lengths of consecutive loop edges.
    std::vector<double> edge_len(len);
    for (int i = 0; i < len; ++i) {
      edge_len[i] = metric_edge_length(mesh_.k, mesh_.xy[loop[i]],
                                       mesh_.xy[loop[(i + 1) % len]]);
    }
    // Cyclic tridiagonal boundary mass matrix (1D P1 elements on the loop).
    std::vector<Triplet> trips;
    Eigen::VectorXd rhs(len);
    for (int i = 0; i < len; ++i) {
      const double l_prev = edge_len[(i + len - 1) % len];
      const double l_next = edge_len[i];
      trips.emplace_back(i, i, (l_prev + l_next) / 3.0);
      trips.emplace_back(i, (i + 1) % len, l_next / 6.0);
      trips.emplace_back(i, (i + len - 1) % len, l_prev / 6.0);
      rhs[i] = resid[loop[i]];
    }
    SpMat mass(len, len);
    mass.setFromTriplets(trips.begin(), trips.end());
    mass.makeCompressed();
    Eigen::SparseLU<SpMat> lu(mass);
    if (lu.info() != Eigen::Success) {
      throw SingularStiffness("boundary_trace: boundary mass factorization failed");
    }
    const Eigen::VectorXd w = lu.solve(rhs);

    std::vector<TraceSample> samples(len);
    for (int i = 0; i < len; ++i) {
      TraceSample& smp = samples[i];
      smp.vertex = loop[i];
      smp.theta = thetas[i];
      smp.weight = 0.5 * (edge_len[i] + edge_len[(i + len - 1) % len]);
      smp.flux_moment = resid[loop[i]];
      smp.u_nu = w[i];
      smp.H = boundary_curvature(dom_.sf, curve, thetas[i], outer);
      smp.X_nu = conformal_normal_component(dom_.sf, curve, thetas[i], outer);
      smp.u = field.values[loop[i]];
    }
    out.loops.push_back(std::move(samples));
  }
  return out;
}

double FemProblem::bulk_integral(const std::function<double(double)>& g,
                                 const ScalarField& field) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& tri = mesh_.tris[t];
    const TriCache& cache = tri_cache_[t];
    for (int q = 0; q < 6; ++q) {
      const double uq = kQBary[q][0] * field.values[tri[0]] +
                        kQBary[q][1] * field.values[tri[1]] +
                        kQBary[q][2] * field.values[tri[2]];
      acc += cache.measure[q] * g(uq);
    }
  }
  return acc;
}

double FemProblem::domain_area() const {
  double acc = 0.0;
  for (const auto& cache : tri_cache_) {
    for (int q = 0; q < 6; ++q) acc += cache.measure[q];
  }
  return acc;
}

std::vector<double> FemProblem::gradient_sq(const ScalarField& field,
                                            const BoundaryTrace& trace) const {
  const int nv = mesh_.n_vertices();
  std::vector<double> gx(nv, 0.0), gy(nv, 0.0);
  for (std::size_t t = 0; t < mesh_.tris.size(); ++t) {
    const auto& tri = mesh_.tris[t];
    const TriCache& cache = tri_cache_[t];
    const double ux = cache.grad[0][0] * field.values[tri[0]] +
                      cache.grad[1][0] * field.values[tri[1]] +
                      cache.grad[2][0] * field.values[tri[2]];
    const double uy = cache.grad[0][1] * field.values[tri[0]] +
                      cache.grad[1][1] * field.values[tri[1]] +
                      cache.grad[2][1] * field.values[tri[2]];
    for (int q = 0; q < 6; ++q) {
      for (int a = 0; a < 3; ++a) {
        const double wgt = cache.measure[q] * kQBary[q][a];
        gx[tri[a]] += wgt * ux;
        gy[tri[a]] += wgt * uy;
      }
    }
  }
  std::vector<double> out(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (is_boundary_[v]) continue;
    const double px = gx[v] / lumped_mass_[v];
    const double py = gy[v] / lumped_mass_[v];
    const double x = mesh_.xy[v][0];
    const double y = mesh_.xy[v][1];
    const double r2 = x * x + y * y;
    double quad;
    if (r2 < 1e-300) {
      quad = px * px + py * py;
    } else {
      const double r = std::sqrt(r2);
      const double cx = x / r, cy = y / r;
      const double inv_s = 1.0 / metric_s(mesh_.k, r);
      quad = px * (cx * cx + inv_s * cy * cy) * px +
             2.0 * px * (cx * cy - inv_s * cx * cy) * py +
             py * (cy * cy + inv_s * cx * cx) * py;
    }
    out[v] = quad;
  }
  // Boundary: |grad u|^2 = u_nu^2 (tangential derivative vanishes for
  // constant Dirichlet data).
  for (const auto& loop : trace.loops) {
    for (const auto& smp : loop) out[smp.vertex] = smp.u_nu * smp.u_nu;
  }
  return out;
}

std::vector<double> FemProblem::discrete_laplacian(
    const std::vector<double>& p) const {
  const int nv = mesh_.n_vertices();
  if (static_cast<int>(p.size()) != nv) {
    throw InvalidArgument("discrete_laplacian: field size mismatch");
  }
  Eigen::VectorXd pv(nv);
  for (int v = 0; v < nv; ++v) pv[v] = p[v];
  const Eigen::VectorXd kp = K_ * pv;
  std::vector<double> out(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (!is_boundary_[v]) out[v] = -kp[v] / lumped_mass_[v];
  }
  return out;
}

std::vector<FemProblem::QuadFit> FemProblem::quadratic_fits(
    const ScalarField& field) const {
  const int nv = mesh_.n_vertices();
  // Vertex adjacency (1-ring), extended to 2-ring patches below.
  std::vector<std::set<int>> ring1(nv);
  for (const auto& tri : mesh_.tris) {
    for (int a = 0; a < 3; ++a) {
      ring1[tri[a]].insert(tri[(a + 1) % 3]);
      ring1[tri[a]].insert(tri[(a + 2) % 3]);
    }
  }
  std::vector<QuadFit> fits(nv);
  for (int v = 0; v < nv; ++v) {
    if (is_boundary_[v]) continue;
    std::set<int> patch = ring1[v];
    for (int w : ring1[v]) patch.insert(ring1[w].begin(), ring1[w].end());
    patch.insert(v);
    const int np = static_cast<int>(patch.size());
    if (np < 7) continue;
    Eigen::MatrixXd A(np, 6);
    Eigen::VectorXd rhs(np);
    int row = 0;
    for (int w : patch) {
      const double dx = mesh_.xy[w][0] - mesh_.xy[v][0];
      const double dy = mesh_.xy[w][1] - mesh_.xy[v][1];
      A(row, 0) = 1.0;
      A(row, 1) = dx;
      A(row, 2) = dy;
      A(row, 3) = 0.5 * dx * dx;
      A(row, 4) = dx * dy;
      A(row, 5) = 0.5 * dy * dy;
      rhs[row] = field.values[w];
      ++row;
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
    fits[v] = QuadFit{true, c[1], c[2], c[3], c[4], c[5]};
  }
  return fits;
}

double FemProblem::traceless_hessian_sq_integral(const ScalarField& field,
                                                 const Nonlinearity& f) const {
  if (mesh_.k != 0.0) {
    throw InvalidArgument(
        "traceless_hessian_sq_integral: supported on flat charts only");
  }
  const std::vector<QuadFit> fits = quadratic_fits(field);
  double acc = 0.0;
  for (int v = 0; v < mesh_.n_vertices(); ++v) {
    if (!fits[v].ok) continue;
    const double half_f = 0.5 * f(field.values[v]);
    const double sq = (fits[v].uxx + half_f) * (fits[v].uxx + half_f) +
                      2.0 * fits[v].uxy * fits[v].uxy +
                      (fits[v].uyy + half_f) * (fits[v].uyy + half_f);
    acc += lumped_mass_[v] * sq;
  }
  return acc;
}

std::vector<double> FemProblem::p_laplacian_flat(const ScalarField& field,
                                                 const Nonlinearity& f) const {
  if (mesh_.k != 0.0) {
    throw InvalidArgument("p_laplacian_flat: supported on flat charts only");
  }
  const std::vector<QuadFit> fits = quadratic_fits(field);
  const double n = 2.0;  // planar problems live on 2-dimensional space forms
  std::vector<double> out(mesh_.n_vertices(),
                          std::numeric_limits<double>::quiet_NaN());
  for (int v = 0; v < mesh_.n_vertices(); ++v) {
    if (!fits[v].ok) continue;
    const QuadFit& q = fits[v];
    const double hess_sq =
        q.uxx * q.uxx + 2.0 * q.uxy * q.uxy + q.uyy * q.uyy;
    const double grad_sq = q.ux * q.ux + q.uy * q.uy;
    const double fv = f(field.values[v]);
    out[v] = 2.0 * hess_sq + (2.0 / n - 2.0) * f.deriv(field.values[v]) * grad_sq -
             (2.0 / n) * fv * fv;
  }
  return out;
}

FemSolution solve_fem(const PlanarDomain& dom, const Mesh2D& mesh,
                      const Nonlinearity& f,
                      const std::vector<double>& dirichlet, double tol,
                      int max_iters) {
  FemProblem problem(dom, mesh);
  return problem.solve(f, dirichlet, tol, max_iters);
}

BoundaryTrace boundary_trace(const PlanarDomain& dom, const Mesh2D& mesh,
                             const ScalarField& u, const Nonlinearity& f) {
  FemProblem problem(dom, mesh);
  return problem.boundary_trace(u, f);
}

}  // namespace serrinlab::fem2d
