#include "serrinlab/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "serrinlab/errors.hpp"
#include "serrinlab/identities.hpp"

namespace serrinlab::config {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return it.key() == a; });
    if (!known) fail("unknown key: " + path + it.key());
  }
}

const json* get(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path + " must be finite");
  return v;
}

int need_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path + " must be an integer");
  return j.get<int>();
}

std::string need_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path + " must be a string");
  return j.get<std::string>();
}

std::vector<double> need_number_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(need_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

StarSpec parse_star(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path + " must be an object");
  check_keys(j, path + ".", {"base", "cos", "sin"});
  StarSpec spec;
  const json* base = get(j, "base");
  if (!base) fail(path + ".base is required");
  spec.base = need_number(*base, path + ".base");
  if (!(spec.base > 0.0)) fail(path + ".base must be positive");
  if (const json* c = get(j, "cos")) {
    spec.cos_coeffs = need_number_array(*c, path + ".cos");
  }
  if (const json* s = get(j, "sin")) {
    spec.sin_coeffs = need_number_array(*s, path + ".sin");
  }
  return spec;
}

json star_to_json(const StarSpec& s) {
  json j;
  j["base"] = s.base;
  j["cos"] = s.cos_coeffs;
  j["sin"] = s.sin_coeffs;
  return j;
}

fem2d::StarCurve to_curve(const StarSpec& s) {
  return fem2d::StarCurve{s.base, s.cos_coeffs, s.sin_coeffs};
}

json build_canonical(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  json geo;
  geo["n"] = c.n;
  geo["k"] = c.k;
  json dom;
  dom["type"] = c.domain_type;
  if (c.domain_type == "ball") {
    dom["radius"] = c.radius;
  } else if (c.domain_type == "annulus") {
    dom["inner_radius"] = c.inner_radius;
    dom["outer_radius"] = c.outer_radius;
  } else {
    dom["outer"] = star_to_json(c.outer_curve);
    if (c.inner_curve) dom["inner"] = star_to_json(*c.inner_curve);
  }
  geo["domain"] = dom;
  j["geometry"] = geo;
  json nl;
  if (c.linear_family) {
    nl["linear_family"] = true;
  } else {
    nl["coeffs"] = c.coeffs;
  }
  j["nonlinearity"] = nl;
  if (c.inner_value) {
    json bd;
    bd["inner_value"] = *c.inner_value;
    j["boundary"] = bd;
  }
  json sv;
  sv["mode"] = c.mode;
  sv["grid_size"] = c.grid_size;
  sv["target_h"] = c.target_h;
  sv["newton_tol"] = c.newton_tol;
  sv["max_newton_iters"] = c.max_newton_iters;
  j["solver"] = sv;
  j["checks"] = c.checks;
  json out;
  out["dir"] = c.out_dir;
  out["formats"] = c.formats;
  j["output"] = out;
  return j;
}

}  // namespace

bool RunConfig::wants_format(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

bool RunConfig::is_annular() const {
  return domain_type == "annulus" ||
         (domain_type == "star" && inner_curve.has_value());
}

geometry::SpaceForm RunConfig::space_form() const {
  return geometry::SpaceForm(n, k);
}

geometry::Nonlinearity RunConfig::nonlinearity() const {
  if (linear_family) return geometry::Nonlinearity::linear_family(space_form());
  return geometry::Nonlinearity(coeffs);
}

geometry::RadialDomain RunConfig::radial_domain() const {
  if (domain_type == "ball") return geometry::RadialDomain::ball(radius);
  if (domain_type == "annulus") {
    return geometry::RadialDomain::annulus(inner_radius, outer_radius);
  }
  throw ConfigError("star domains have no radial representation");
}

fem2d::PlanarDomain RunConfig::planar_domain() const {
  const geometry::SpaceForm sf = space_form();
  if (domain_type == "star") {
    std::optional<fem2d::StarCurve> inner;
    if (inner_curve) inner = to_curve(*inner_curve);
    return fem2d::PlanarDomain(sf, to_curve(outer_curve), inner);
  }
  if (domain_type == "ball") {
    return fem2d::PlanarDomain(sf, fem2d::StarCurve::circle(radius));
  }
  return fem2d::PlanarDomain(sf, fem2d::StarCurve::circle(outer_radius),
                             fem2d::StarCurve::circle(inner_radius));
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("configuration must be a JSON object");
  check_keys(root, "",
             {"schema_version", "geometry", "nonlinearity", "boundary",
              "solver", "checks", "output"});

  RunConfig c;
  if (const json* sv = get(root, "schema_version")) {
    c.schema_version = need_int(*sv, "schema_version");
  }
  if (c.schema_version != 1) fail("unsupported schema_version (expected 1)");

  const json* geo = get(root, "geometry");
  if (!geo || !geo->is_object()) fail("geometry section is required");
  check_keys(*geo, "geometry.", {"n", "k", "domain"});
  const json* jn = get(*geo, "n");
  const json* jk = get(*geo, "k");
  const json* jdom = get(*geo, "domain");
  if (!jn) fail("geometry.n is required");
  if (!jk) fail("geometry.k is required");
  if (!jdom || !jdom->is_object()) fail("geometry.domain is required");
  c.n = need_int(*jn, "geometry.n");
  if (c.n < 2) fail("geometry.n must be >= 2");
  c.k = need_number(*jk, "geometry.k");

  const json* jtype = get(*jdom, "type");
  if (!jtype) fail("geometry.domain.type is required");
  c.domain_type = need_string(*jtype, "geometry.domain.type");
  if (c.domain_type == "ball") {
    check_keys(*jdom, "geometry.domain.", {"type", "radius"});
    const json* jr = get(*jdom, "radius");
    if (!jr) fail("geometry.domain.radius is required");
    c.radius = need_number(*jr, "geometry.domain.radius");
  } else if (c.domain_type == "annulus") {
    check_keys(*jdom, "geometry.domain.",
               {"type", "inner_radius", "outer_radius"});
    const json* ji = get(*jdom, "inner_radius");
    const json* jo = get(*jdom, "outer_radius");
    if (!ji || !jo) {
      fail("geometry.domain.inner_radius and outer_radius are required");
    }
    c.inner_radius = need_number(*ji, "geometry.domain.inner_radius");
    c.outer_radius = need_number(*jo, "geometry.domain.outer_radius");
  } else if (c.domain_type == "star") {
    check_keys(*jdom, "geometry.domain.", {"type", "outer", "inner"});
    const json* jo = get(*jdom, "outer");
    if (!jo) fail("geometry.domain.outer is required");
    c.outer_curve = parse_star(*jo, "geometry.domain.outer");
    if (const json* ji = get(*jdom, "inner")) {
      c.inner_curve = parse_star(*ji, "geometry.domain.inner");
    }
  } else {
    fail("geometry.domain.type must be ball, annulus or star");
  }

  if (const json* nl = get(root, "nonlinearity")) {
    if (!nl->is_object()) fail("nonlinearity must be an object");
    check_keys(*nl, "nonlinearity.", {"linear_family", "coeffs"});
    const json* jlf = get(*nl, "linear_family");
    const json* jco = get(*nl, "coeffs");
    if (jlf && jco) {
      fail("nonlinearity: give either linear_family or coeffs, not both");
    }
    if (jco) {
      c.linear_family = false;
      c.coeffs = need_number_array(*jco, "nonlinearity.coeffs");
      if (c.coeffs.empty()) fail("nonlinearity.coeffs must be non-empty");
    } else if (jlf) {
      if (!jlf->is_boolean() || !jlf->get<bool>()) {
        fail("nonlinearity.linear_family must be true when given");
      }
      c.linear_family = true;
    }
  }

  if (const json* bd = get(root, "boundary")) {
    if (!bd->is_object()) fail("boundary must be an object");
    check_keys(*bd, "boundary.", {"inner_value"});
    if (const json* iv = get(*bd, "inner_value")) {
      c.inner_value = need_number(*iv, "boundary.inner_value");
    }
  }

  if (const json* sv = get(root, "solver")) {
    if (!sv->is_object()) fail("solver must be an object");
    check_keys(*sv, "solver.",
               {"mode", "grid_size", "target_h", "newton_tol",
                "max_newton_iters"});
    if (const json* m = get(*sv, "mode")) c.mode = need_string(*m, "solver.mode");
    if (const json* g = get(*sv, "grid_size")) {
      c.grid_size = need_int(*g, "solver.grid_size");
    }
    if (const json* t = get(*sv, "target_h")) {
      c.target_h = need_number(*t, "solver.target_h");
    }
    if (const json* t = get(*sv, "newton_tol")) {
      c.newton_tol = need_number(*t, "solver.newton_tol");
    }
    if (const json* it = get(*sv, "max_newton_iters")) {
      c.max_newton_iters = need_int(*it, "solver.max_newton_iters");
    }
  }

  if (const json* ch = get(root, "checks")) {
    if (!ch->is_array() || ch->empty()) {
      fail("checks must be a non-empty array of strings");
    }
    c.checks.clear();
    for (std::size_t i = 0; i < ch->size(); ++i) {
      c.checks.push_back(
          need_string((*ch)[i], "checks[" + std::to_string(i) + "]"));
    }
  }
  for (const auto& name : c.checks) {
    if (name == "all") continue;
    const auto& known = identities::check_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      fail("checks: unknown check name: " + name);
    }
  }

  if (const json* out = get(root, "output")) {
    if (!out->is_object()) fail("output must be an object");
    check_keys(*out, "output.", {"dir", "formats"});
    if (const json* d = get(*out, "dir")) {
      c.out_dir = need_string(*d, "output.dir");
      if (c.out_dir.empty()) fail("output.dir must be non-empty");
    }
    if (const json* f = get(*out, "formats")) {
      if (!f->is_array() || f->empty()) {
        fail("output.formats must be a non-empty array");
      }
      c.formats.clear();
      for (std::size_t i = 0; i < f->size(); ++i) {
        c.formats.push_back(
            need_string((*f)[i], "output.formats[" + std::to_string(i) + "]"));
      }
    }
  }
  for (const auto& f : c.formats) {
    if (f != "json" && f != "csv") {
      fail("output.formats entries must be json or csv (got " + f + ")");
    }
  }

  // Cross-field constraints.
  if (c.mode != "radial" && c.mode != "fem" && c.mode != "closed_form") {
    fail("solver.mode must be radial, fem or closed_form");
  }
  if (c.grid_size < 16) fail("solver.grid_size must be >= 16");
  if (!(c.target_h > 0.0)) fail("solver.target_h must be positive");
  if (!(c.newton_tol > 0.0)) fail("solver.newton_tol must be positive");
  if (c.max_newton_iters < 1) fail("solver.max_newton_iters must be >= 1");
  if (c.domain_type == "star" && c.mode != "fem") {
    fail("star domains require solver.mode = fem");
  }
  if (c.mode == "fem" && c.n != 2) {
    fail("solver.mode = fem requires geometry.n = 2");
  }
  if (c.mode == "closed_form" && !c.linear_family) {
    fail("solver.mode = closed_form requires the linear_family nonlinearity");
  }
  if (c.inner_value && !c.is_annular()) {
    fail("boundary.inner_value is only meaningful for annular domains");
  }
  if (c.inner_value && c.mode == "closed_form") {
    fail("closed_form mode derives the inner value; remove "
         "boundary.inner_value");
  }
  if (c.is_annular() && !c.inner_value) {
    // Concentric annuli with the linear family default to the closed-form
    // inner value; everything else needs the datum spelled out.
    if (c.domain_type == "star") {
      fail("boundary.inner_value is required for star domains with an inner "
           "loop");
    }
    if (!c.linear_family) {
      fail("boundary.inner_value is required for annular domains with a "
           "custom nonlinearity");
    }
  }
  if (c.domain_type == "ball" || c.domain_type == "annulus") {
    try {
      geometry::validate_domain(c.space_form(), c.radial_domain());
    } catch (const Error& e) {
      fail(std::string("geometry.domain: ") + e.what());
    }
  } else {
    const geometry::SpaceForm sf = c.space_form();
    const double rmax = to_curve(c.outer_curve).max_radius();
    if (!sf.radius_admissible(rmax)) {
      fail("geometry.domain.outer exceeds the admissible chart radius");
    }
  }

  const json canon = build_canonical(c);
  c.canonical_text = canon.dump(2);
  c.digest = fnv1a_digest(canon.dump());
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string patch_config_text(const std::string& text,
                              const std::string& dotted_path,
                              const std::string& value_literal) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }

  struct Seg {
    std::string key;
    long index = -1;
  };
  std::vector<Seg> segs;
  std::size_t pos = 0;
  if (dotted_path.empty()) fail("empty parameter path");
  while (pos <= dotted_path.size()) {
    std::size_t dot = dotted_path.find('.', pos);
    if (dot == std::string::npos) dot = dotted_path.size();
    std::string part = dotted_path.substr(pos, dot - pos);
    if (part.empty()) fail("malformed parameter path: " + dotted_path);
    Seg seg;
    const std::size_t br = part.find('[');
    if (br != std::string::npos) {
      if (part.back() != ']' || br + 2 > part.size() - 1) {
        fail("malformed parameter path: " + dotted_path);
      }
      const std::string idx = part.substr(br + 1, part.size() - br - 2);
      if (idx.empty() ||
          !std::all_of(idx.begin(), idx.end(),
                       [](unsigned char ch) { return std::isdigit(ch); })) {
        fail("malformed array index in parameter path: " + dotted_path);
      }
      seg.key = part.substr(0, br);
      seg.index = std::stol(idx);
      if (seg.key.empty()) fail("malformed parameter path: " + dotted_path);
    } else {
      seg.key = part;
    }
    segs.push_back(seg);
    pos = dot + 1;
    if (dot == dotted_path.size()) break;
  }

  json value = json::parse(value_literal, nullptr, false);
  if (value.is_discarded()) value = value_literal;  // bare word -> string

  json* cur = &root;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Seg& seg = segs[i];
    if (!cur->is_object()) {
      fail("parameter path " + dotted_path + " traverses a non-object");
    }
    json& slot = (*cur)[seg.key];
    json* target = &slot;
    if (seg.index >= 0) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) {
        fail("parameter path " + dotted_path + " indexes a non-array");
      }
      if (static_cast<std::size_t>(seg.index) > slot.size()) {
        fail("array index out of range in parameter path: " + dotted_path);
      }
      if (static_cast<std::size_t>(seg.index) == slot.size()) {
        slot.push_back(nullptr);
      }
      target = &slot[seg.index];
    } else if (slot.is_null() && i + 1 < segs.size()) {
      slot = json::object();
    }
    if (i + 1 == segs.size()) {
      *target = value;
    } else {
      cur = target;
    }
  }
  return root.dump(2);
}

std::string fnv1a_digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace serrinlab::config
