#include <doctest.h>

#include <string>

#include "serrinlab/errors.hpp"
#include "serrinlab/runconfig.hpp"

namespace cfg = serrinlab::config;
using serrinlab::ConfigError;

namespace {
const char* kBallConfig = R"({
  "geometry": { "n": 2, "k": 0.0, "domain": { "type": "ball", "radius": 1.0 } },
  "nonlinearity": { "linear_family": true },
  "solver": { "mode": "radial" }
})";

const char* kStarConfig = R"({
  "geometry": { "n": 2, "k": -1.0, "domain": { "type": "star",
    "outer": { "base": 1.2, "cos": [0.0, 0.1], "sin": [] },
    "inner": { "base": 0.4 } } },
  "nonlinearity": { "coeffs": [2.0, 0.0, -0.5] },
  "boundary": { "inner_value": 0.8 },
  "solver": { "mode": "fem", "target_h": 0.08 },
  "checks": ["divergence_closure", "p_function"],
  "output": { "dir": "runs/star", "formats": ["json", "csv"] }
})";
}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  auto c = cfg::parse_config_text(kBallConfig);
  CHECK(c.schema_version == 1);
  CHECK(c.n == 2);
  CHECK(c.k == doctest::Approx(0.0));
  CHECK(c.domain_type == "ball");
  CHECK(c.radius == doctest::Approx(1.0));
  CHECK(c.linear_family);
  CHECK(c.mode == "radial");
  CHECK(c.grid_size == 256);
  CHECK(c.target_h == doctest::Approx(0.05));
  CHECK(c.newton_tol == doctest::Approx(1e-11));
  CHECK(c.max_newton_iters == 50);
  CHECK(c.checks == std::vector<std::string>{"all"});
  CHECK(c.out_dir == "out");
  CHECK(c.wants_format("json"));
  CHECK_FALSE(c.wants_format("csv"));
  CHECK_FALSE(c.is_annular());
  CHECK_FALSE(c.inner_value.has_value());
  CHECK(!c.digest.empty());
  CHECK(c.digest.size() == 16);  // fnv1a-64 hex
}

TEST_CASE("full star config parses every section") {
  auto c = cfg::parse_config_text(kStarConfig);
  CHECK(c.domain_type == "star");
  CHECK(c.outer_curve.base == doctest::Approx(1.2));
  REQUIRE(c.outer_curve.cos_coeffs.size() == 2);
  CHECK(c.outer_curve.cos_coeffs[1] == doctest::Approx(0.1));
  REQUIRE(c.inner_curve.has_value());
  CHECK(c.inner_curve->base == doctest::Approx(0.4));
  CHECK_FALSE(c.linear_family);
  REQUIRE(c.coeffs.size() == 3);
  CHECK(c.inner_value == doctest::Approx(0.8));
  CHECK(c.is_annular());
  CHECK(c.wants_format("csv"));
  CHECK(c.checks.size() == 2);
  // round-trippable accessors
  CHECK(c.space_form().k == doctest::Approx(-1.0));
  CHECK(c.nonlinearity()(0.0) == doctest::Approx(2.0));
  auto dom = c.planar_domain();
  CHECK(dom.has_inner());
}

TEST_CASE("digest is stable across reparses and whitespace") {
  auto c1 = cfg::parse_config_text(kBallConfig);
  auto c2 = cfg::parse_config_text(c1.canonical_text);
  CHECK(c1.digest == c2.digest);
  // whitespace / key order do not matter
  std::string reordered = R"({
    "solver": { "mode": "radial" },
    "nonlinearity":{"linear_family":true},
    "geometry": { "domain": { "radius": 1.0, "type": "ball" }, "k": 0.0, "n": 2 }
  })";
  CHECK(cfg::parse_config_text(reordered).digest == c1.digest);
  // a real change does matter
  auto patched = cfg::patch_config_text(c1.canonical_text,
                                        "geometry.domain.radius", "1.5");
  CHECK(cfg::parse_config_text(patched).digest != c1.digest);
}

TEST_CASE("unknown keys are rejected with their dotted path") {
  std::string bad = R"({
    "geometry": { "n": 2, "k": 0.0, "domain": { "type": "ball", "radius": 1.0 },
                  "extra": 3 },
    "nonlinearity": { "linear_family": true },
    "solver": { "mode": "radial" }
  })";
  try {
    cfg::parse_config_text(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("geometry.extra") != std::string::npos);
  }
}

TEST_CASE("validation rules") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      cfg::parse_config_text(text);
      FAIL_CHECK("expected ConfigError containing '" << needle << "'");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  // linear_family and coeffs are mutually exclusive
  expect_error(R"({"geometry":{"n":2,"k":0.0,"domain":{"type":"ball","radius":1.0}},
                   "nonlinearity":{"linear_family":true,"coeffs":[1.0]},
                   "solver":{"mode":"radial"}})",
               "linear_family");
  // star domains require the FEM solver
  expect_error(R"({"geometry":{"n":2,"k":0.0,"domain":{"type":"star",
                   "outer":{"base":1.0}}},
                   "nonlinearity":{"linear_family":true},
                   "solver":{"mode":"radial"}})",
               "fem");
  // FEM requires n = 2
  expect_error(R"({"geometry":{"n":3,"k":0.0,"domain":{"type":"ball","radius":1.0}},
                   "nonlinearity":{"linear_family":true},
                   "solver":{"mode":"fem"}})",
               "n = 2");
  // closed_form requires the linear family
  expect_error(R"({"geometry":{"n":2,"k":0.0,"domain":{"type":"ball","radius":1.0}},
                   "nonlinearity":{"coeffs":[2.0]},
                   "solver":{"mode":"closed_form"}})",
               "closed_form");
  // annulus with a custom source needs the inner Dirichlet value
  expect_error(R"({"geometry":{"n":2,"k":0.0,"domain":{"type":"annulus",
                   "inner_radius":0.5,"outer_radius":1.5}},
                   "nonlinearity":{"coeffs":[2.0]},
                   "solver":{"mode":"radial"}})",
               "inner_value");
  // inner_value is only meaningful on annular domains
  expect_error(R"({"geometry":{"n":2,"k":0.0,"domain":{"type":"ball","radius":1.0}},
                   "nonlinearity":{"linear_family":true},
                   "boundary":{"inner_value":1.0},
                   "solver":{"mode":"radial"}})",
               "inner_value");
  // bad domain geometry surfaces as ConfigError
  expect_error(R"({"geometry":{"n":2,"k":1.0,"domain":{"type":"ball","radius":9.0}},
                   "nonlinearity":{"linear_family":true},
                   "solver":{"mode":"radial"}})",
               "admissible");
  expect_error(R"({"geometry":{"n":2,"k":0.0,"domain":{"type":"ball","radius":1.0}},
                   "nonlinearity":{"linear_family":true},
                   "solver":{"mode":"warp"}})",
               "mode");
}

TEST_CASE("patch_config_text edits dotted paths") {
  auto c = cfg::parse_config_text(kStarConfig);
  // scalar replacement
  auto t1 = cfg::patch_config_text(c.canonical_text, "solver.target_h", "0.04");
  CHECK(cfg::parse_config_text(t1).target_h == doctest::Approx(0.04));
  // array element replacement
  auto t2 = cfg::patch_config_text(c.canonical_text,
                                   "nonlinearity.coeffs[2]", "-0.25");
  CHECK(cfg::parse_config_text(t2).coeffs[2] == doctest::Approx(-0.25));
  // appending one slot past the end is allowed
  auto t3 = cfg::patch_config_text(c.canonical_text,
                                   "nonlinearity.coeffs[3]", "0.125");
  CHECK(cfg::parse_config_text(t3).coeffs.size() == 4);
  // creating a missing object section
  auto ball = cfg::parse_config_text(kBallConfig);
  auto t4 = cfg::patch_config_text(ball.canonical_text, "solver.grid_size", "64");
  CHECK(cfg::parse_config_text(t4).grid_size == 64);
  // bare words become strings
  auto t5 = cfg::patch_config_text(ball.canonical_text, "solver.mode", "closed_form");
  CHECK(cfg::parse_config_text(t5).mode == "closed_form");
  // malformed paths throw
  CHECK_THROWS_AS(cfg::patch_config_text(ball.canonical_text, "", "1"),
                  ConfigError);
  CHECK_THROWS_AS(
      cfg::patch_config_text(ball.canonical_text, "nonlinearity.coeffs[9]", "1"),
      ConfigError);
}

TEST_CASE("load_config_file reports missing files as IoError") {
  CHECK_THROWS_AS(cfg::load_config_file("/nonexistent/path/config.json"),
                  serrinlab::IoError);
}
