#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "serrinlab/curves.hpp"

namespace serrinlab::fem2d {

// Conforming triangulation of a PlanarDomain in Cartesian chart coordinates
// (x, y) = (r cos theta, r sin theta). Triangles are counterclockwise in the
// chart. Boundary loops are ordered: loops[0] is the outer loop Gamma_0
// (counterclockwise); loops[1], when present, is the inner loop Gamma_1
// (clockwise, i.e. domain on the left).
struct Mesh2D {
  double k = 0.0;  // curvature of the chart metric dr^2 + h(r)^2 dtheta^2
  std::vector<std::array<double, 2>> xy;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::vector<int>> loops;
  // Curve parameter of each boundary vertex, aligned with `loops`.
  std::vector<std::vector<double>> loop_theta;
  // Build metadata (not serialized): max metric edge length.
  double max_metric_edge = 0.0;

  bool has_inner() const { return loops.size() > 1; }
  int n_vertices() const { return static_cast<int>(xy.size()); }
  int n_triangles() const { return static_cast<int>(tris.size()); }
};

// Metric coefficient s(r) = (h(r)/r)^2 of the chart metric written as
// g = P_r + s P_theta in Cartesian chart coordinates; evaluated through a
// series expansion near the pole so it is smooth at r = 0.
double metric_s(double k, double r);
// sqrt(det g) = h(r)/r, with the same series treatment.
double metric_sqrt_det(double k, double r);

// Metric length of the chart segment from p to q (4-point Gauss rule).
double metric_edge_length(double k, const std::array<double, 2>& p,
                          const std::array<double, 2>& q);

// Builds a triangulation with max metric edge length <= 2*target_h and
// chart min angle >= 20 degrees. Single-loop domains use concentric
// hexagonal rings collapsing to the pole; annular domains use a structured
// quad grid between the two curves, split into triangles.
Mesh2D build_mesh(const PlanarDomain& dom, double target_h);

// Line-oriented text serialization (documented in the README).
void save_mesh(const Mesh2D& mesh, std::ostream& os);
Mesh2D load_mesh(std::istream& is);

// Mesh quality report used by validation and tests.
struct MeshQuality {
  double min_angle_deg = 0.0;      // min chart angle over all triangles
  double min_chart_area = 0.0;     // min signed chart area
  double max_metric_edge = 0.0;
  int boundary_vertices = 0;
};
MeshQuality mesh_quality(const Mesh2D& mesh);

}  // namespace serrinlab::fem2d
