#include "serrinlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "serrinlab/errors.hpp"

namespace serrinlab::fem2d {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::array<double, 2> polar(double r, double theta) {
  return {r * std::cos(theta), r * std::sin(theta)};
}

double chart_area2(const std::array<double, 2>& a, const std::array<double, 2>& b,
                   const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

}  // namespace

double metric_s(double k, double r) {
  const double x = k * r * r;
  if (std::abs(x) < 1e-4) {
    // (h/r)^2 = (1 - x/6 + x^2/120 - x^3/5040)^2 expanded to O(x^3).
    return 1.0 - x / 3.0 + 2.0 * x * x / 45.0 - x * x * x / 315.0;
  }
  const double h = geometry::warp(k, r);
  return (h / r) * (h / r);
}

double metric_sqrt_det(double k, double r) {
  const double x = k * r * r;
  if (std::abs(x) < 1e-4) {
    return 1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0;
  }
  return geometry::warp(k, r) / r;
}

double metric_edge_length(double k, const std::array<double, 2>& p,
                          const std::array<double, 2>& q) {
  // 4-point Gauss-Legendre along the chart segment.
  static constexpr double nodes[2] = {0.33998104358485626, 0.86113631159405258};
  static constexpr double weights[2] = {0.65214515486254614, 0.34785484513745386};
  const double dx = q[0] - p[0];
  const double dy = q[1] - p[1];
  auto speed = [&](double t) {
    const double x = p[0] + t * dx;
    const double y = p[1] + t * dy;
    const double r2 = x * x + y * y;
    if (r2 == 0.0) return std::sqrt(dx * dx + dy * dy);
    const double radial = (x * dx + y * dy) / std::sqrt(r2);
    const double ang2 = (dx * dx + dy * dy) - radial * radial;
    const double s = metric_s(k, std::sqrt(r2));
    return std::sqrt(radial * radial + s * ang2);
  };
  double acc = 0.0;
  for (int i = 0; i < 2; ++i) {
    acc += weights[i] * (speed(0.5 + 0.5 * nodes[i]) + speed(0.5 - 0.5 * nodes[i]));
  }
  return 0.5 * acc;
}

namespace {

// Hex-ring triangulation of a single-loop star domain: ring j of N carries
// 6j vertices; the boundary ring lies exactly on the curve.
Mesh2D build_disk_mesh(const PlanarDomain& dom, double target_h) {
  const StarCurve& curve = dom.outer;
  const double rmax = curve.max_radius();
  // Metric stretch: for k < 0 azimuthal lengths exceed chart lengths.
  double stretch = 1.0;
  if (dom.sf.k < 0.0) stretch = geometry::warp(dom.sf.k, rmax) / rmax;
  int N = static_cast<int>(std::ceil(1.1 * stretch * rmax / target_h));
  N = std::max(N, 3);

  Mesh2D mesh;
  mesh.k = dom.sf.k;
  mesh.xy.push_back({0.0, 0.0});
  std::vector<int> ring_start(N + 1, 0);
  for (int j = 1; j <= N; ++j) {
    ring_start[j] = mesh.n_vertices();
    const double rho = static_cast<double>(j) / N;
    for (int i = 0; i < 6 * j; ++i) {
      const double theta = 2.0 * kPi * i / (6 * j);
      mesh.xy.push_back(polar(rho * curve.r(theta), theta));
    }
  }
  // Triangles between ring j-1 and ring j, per 60-degree sector.
  for (int j = 1; j <= N; ++j) {
    const int outer_n = 6 * j;
    const int inner_n = 6 * (j - 1);
    for (int s = 0; s < 6; ++s) {
      for (int t = 0; t < j; ++t) {
        const int a0 = ring_start[j] + (s * j + t) % outer_n;
        const int a1 = ring_start[j] + (s * j + t + 1) % outer_n;
        const int b0 = (j == 1) ? 0
                                : ring_start[j - 1] + (s * (j - 1) + t) % inner_n;
        mesh.tris.push_back({a0, a1, b0});
        if (t + 1 < j) {
          const int b1 = ring_start[j - 1] + (s * (j - 1) + t + 1) % inner_n;
          mesh.tris.push_back({a1, b1, b0});
        }
      }
    }
  }
  std::vector<int> loop;
  std::vector<double> thetas;
  for (int i = 0; i < 6 * N; ++i) {
    loop.push_back(ring_start[N] + i);
    thetas.push_back(2.0 * kPi * i / (6 * N));
  }
  mesh.loops.push_back(std::move(loop));
  mesh.loop_theta.push_back(std::move(thetas));
  return mesh;
}

// Structured quad grid between the two curves of an annular domain, each
// quad split along the (inner j, outer j+1) diagonal. Ring radii are
// log-graded so the chart cell aspect ratio is uniform in the radius.
Mesh2D build_annulus_mesh(const PlanarDomain& dom, double target_h) {
  const StarCurve& outer = dom.outer;
  const StarCurve& inner = *dom.inner;
  const double rmax = outer.max_radius();
  double stretch = 1.0;
  if (dom.sf.k < 0.0) stretch = geometry::warp(dom.sf.k, rmax) / rmax;
  double max_log_gap = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double th = 2.0 * kPi * i / 512;
    max_log_gap = std::max(max_log_gap, std::log(outer.r(th) / inner.r(th)));
  }
  int n_theta = static_cast<int>(std::ceil(2.0 * kPi * stretch * rmax / target_h));
  n_theta = std::max(n_theta, 16);
  int n_r = static_cast<int>(std::ceil(max_log_gap * n_theta / (2.0 * kPi)));
  n_r = std::max(n_r, 2);

  Mesh2D mesh;
  mesh.k = dom.sf.k;
  auto vid = [&](int i, int j) { return i * n_theta + (j % n_theta); };
  for (int i = 0; i <= n_r; ++i) {
    const double rho = static_cast<double>(i) / n_r;
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * kPi * j / n_theta;
      const double r = inner.r(th) * std::pow(outer.r(th) / inner.r(th), rho);
      mesh.xy.push_back(polar(r, th));
    }
  }
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int a = vid(i, j);        // inner, angle j
      const int b = vid(i, j + 1);    // inner, angle j+1
      const int c = vid(i + 1, j + 1);  // outer, angle j+1
      const int d = vid(i + 1, j);    // outer, angle j
      mesh.tris.push_back({a, d, c});
      mesh.tris.push_back({a, c, b});
    }
  }
  std::vector<int> outer_loop, inner_loop;
  std::vector<double> outer_theta, inner_theta;
  for (int j = 0; j < n_theta; ++j) {
    outer_loop.push_back(vid(n_r, j));
    outer_theta.push_back(2.0 * kPi * j / n_theta);
  }
  // Inner loop clockwise (domain on the left).
  inner_loop.push_back(vid(0, 0));
  inner_theta.push_back(0.0);
  for (int j = n_theta - 1; j >= 1; --j) {
    inner_loop.push_back(vid(0, j));
    inner_theta.push_back(2.0 * kPi * j / n_theta);
  }
  mesh.loops.push_back(std::move(outer_loop));
  mesh.loop_theta.push_back(std::move(outer_theta));
  mesh.loops.push_back(std::move(inner_loop));
  mesh.loop_theta.push_back(std::move(inner_theta));
  return mesh;
}

}  // namespace

MeshQuality mesh_quality(const Mesh2D& mesh) {
  MeshQuality q;
  q.min_angle_deg = 180.0;
  q.min_chart_area = std::numeric_limits<double>::infinity();
  for (const auto& t : mesh.tris) {
    const auto& a = mesh.xy[t[0]];
    const auto& b = mesh.xy[t[1]];
    const auto& c = mesh.xy[t[2]];
    q.min_chart_area = std::min(q.min_chart_area, 0.5 * chart_area2(a, b, c));
    const std::array<const std::array<double, 2>*, 3> v = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
      const auto& p0 = *v[i];
      const auto& p1 = *v[(i + 1) % 3];
      const auto& p2 = *v[(i + 2) % 3];
      const double ux = p1[0] - p0[0], uy = p1[1] - p0[1];
      const double wx = p2[0] - p0[0], wy = p2[1] - p0[1];
      const double cosang = (ux * wx + uy * wy) /
                            (std::hypot(ux, uy) * std::hypot(wx, wy));
      q.min_angle_deg = std::min(
          q.min_angle_deg,
          std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / kPi);
    }
    for (int i = 0; i < 3; ++i) {
      q.max_metric_edge = std::max(
          q.max_metric_edge,
          metric_edge_length(mesh.k, mesh.xy[t[i]], mesh.xy[t[(i + 1) % 3]]));
    }
  }
  for (const auto& loop : mesh.loops) {
    q.boundary_vertices += static_cast<int>(loop.size());
  }
  return q;
}

Mesh2D build_mesh(const PlanarDomain& dom, double target_h) {
  if (!(target_h > 0.0)) throw InvalidArgument("build_mesh: target_h must be > 0");
  Mesh2D mesh = dom.has_inner() ? build_annulus_mesh(dom, target_h)
                                : build_disk_mesh(dom, target_h);
  const MeshQuality q = mesh_quality(mesh);
  mesh.max_metric_edge = q.max_metric_edge;
  if (!(q.min_chart_area > 0.0)) {
    throw MeshFailure("build_mesh: non-positive triangle produced "
                      "(self-intersecting input curve?)");
  }
  if (q.min_angle_deg < 20.0) {
    throw MeshFailure("build_mesh: min chart angle " +
                      std::to_string(q.min_angle_deg) + " deg below 20");
  }
  if (q.max_metric_edge > 2.0 * target_h) {
    throw MeshFailure("build_mesh: max metric edge exceeds 2*target_h");
  }
  for (const auto& loop : mesh.loops) {
    if (loop.size() < 16) {
      throw MeshFailure("build_mesh: boundary loop has fewer than 16 vertices; "
                        "decrease target_h");
    }
  }
  return mesh;
}

void save_mesh(const Mesh2D& mesh, std::ostream& os) {
  os << "serrinlab-mesh 1\n";
  os << fmt_double(mesh.k) << "\n";
  os << mesh.n_vertices() << "\n";
  for (const auto& p : mesh.xy) {
    os << fmt_double(p[0]) << " " << fmt_double(p[1]) << "\n";
  }
  os << mesh.n_triangles() << "\n";
  for (const auto& t : mesh.tris) {
    os << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  os << mesh.loops.size() << "\n";
  for (std::size_t l = 0; l < mesh.loops.size(); ++l) {
    os << mesh.loops[l].size() << "\n";
    for (std::size_t i = 0; i < mesh.loops[l].size(); ++i) {
      os << mesh.loops[l][i] << " " << fmt_double(mesh.loop_theta[l][i]) << "\n";
    }
  }
}

Mesh2D load_mesh(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "serrinlab-mesh" || version != 1) {
    throw IoError("load_mesh: bad header (expected 'serrinlab-mesh 1')");
  }
  Mesh2D mesh;
  int nv = 0, nt = 0, nl = 0;
  if (!(is >> mesh.k >> nv) || nv < 3) throw IoError("load_mesh: bad vertex count");
  mesh.xy.resize(nv);
  for (auto& p : mesh.xy) {
    if (!(is >> p[0] >> p[1])) throw IoError("load_mesh: truncated vertex list");
  }
  if (!(is >> nt) || nt < 1) throw IoError("load_mesh: bad triangle count");
  mesh.tris.resize(nt);
  for (auto& t : mesh.tris) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw IoError("load_mesh: truncated triangles");
    for (int v : t) {
      if (v < 0 || v >= nv) throw IoError("load_mesh: triangle index out of range");
    }
  }
  if (!(is >> nl) || nl < 1 || nl > 2) throw IoError("load_mesh: bad loop count");
  mesh.loops.resize(nl);
  mesh.loop_theta.resize(nl);
  for (int l = 0; l < nl; ++l) {
    int len = 0;
    if (!(is >> len) || len < 3) throw IoError("load_mesh: bad loop length");
    mesh.loops[l].resize(len);
    mesh.loop_theta[l].resize(len);
    for (int i = 0; i < len; ++i) {
      if (!(is >> mesh.loops[l][i] >> mesh.loop_theta[l][i])) {
        throw IoError("load_mesh: truncated loop");
      }
      if (mesh.loops[l][i] < 0 || mesh.loops[l][i] >= nv) {
        throw IoError("load_mesh: loop index out of range");
      }
    }
  }
  mesh.max_metric_edge = mesh_quality(mesh).max_metric_edge;
  return mesh;
}

}  // namespace serrinlab::fem2d
