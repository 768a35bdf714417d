#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serrinlab/curves.hpp"
#include "serrinlab/geometry.hpp"

namespace serrinlab::config {

// Fourier data of one star-shaped boundary curve.
struct StarSpec {
  double base = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

// Parsed, validated and normalized run configuration. `canonical_text` is
// the normalized JSON echo (fixed key order, defaults materialized) and
// `digest` its FNV-1a 64-bit hash; both are embedded in every output file
// so results are traceable to the exact configuration.
struct RunConfig {
  int schema_version = 1;

  // geometry
  int n = 2;
  double k = 0.0;
  std::string domain_type = "ball";  // ball | annulus | star
  double radius = 1.0;               // ball
  double inner_radius = 0.0;         // annulus
  double outer_radius = 0.0;
  StarSpec outer_curve;              // star
  std::optional<StarSpec> inner_curve;

  // nonlinearity: either the curvature-linked family f = n + n k u or an
  // explicit polynomial.
  bool linear_family = true;
  std::vector<double> coeffs;

  // Dirichlet value on the inner boundary (annular domains). When absent,
  // the linear family resolves it from the closed-form solution.
  std::optional<double> inner_value;

  // solver
  std::string mode = "radial";  // radial | fem | closed_form
  int grid_size = 256;          // radial nodes are grid_size + 1
  double target_h = 0.05;       // FEM metric edge target
  double newton_tol = 1e-11;
  int max_newton_iters = 50;

  std::vector<std::string> checks{"all"};

  // output
  std::string out_dir = "out";
  std::vector<std::string> formats{"json"};

  std::string canonical_text;
  std::string digest;

  bool wants_format(const std::string& fmt) const;
  bool is_annular() const;

  geometry::SpaceForm space_form() const;
  geometry::Nonlinearity nonlinearity() const;
  // Throws ConfigError for star domains.
  geometry::RadialDomain radial_domain() const;
  // Star domains, plus ball/annulus domains rendered as circles (n = 2
  // only). Throws ConfigError when not representable.
  fem2d::PlanarDomain planar_domain() const;
};

// Parses and validates a configuration. Unknown keys anywhere in the
// document are rejected with their dotted path; all structural constraints
// (modes, domain kinds, ranges) are checked here, not at run time.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Returns `text` with the leaf at `dotted_path` (segments `name` or
// `name[index]`, e.g. "solver.grid_size" or "nonlinearity.coeffs[1]")
// replaced by `value_literal` (parsed as JSON; bare words become strings).
// Missing object keys along the path are created; array indices may extend
// the array by exactly one slot. Throws ConfigError on malformed paths.
std::string patch_config_text(const std::string& text,
                              const std::string& dotted_path,
                              const std::string& value_literal);

// FNV-1a 64-bit digest, 16 lowercase hex characters.
std::string fnv1a_digest(const std::string& text);

}  // namespace serrinlab::config
