// serrinlab command-line front end: solve | verify | sweep.
//
// Exit codes: 0 success, 1 configuration error, 2 solver error (diagnostic
// JSON emitted), 3 verification failure (a failed check, or a
// hypothesis-not-met verdict under --strict).

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "serrinlab/errors.hpp"
#include "serrinlab/fem.hpp"
#include "serrinlab/identities.hpp"
#include "serrinlab/mesh.hpp"
#include "serrinlab/radial.hpp"
#include "serrinlab/runconfig.hpp"
#include "serrinlab/solved_problem.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using serrinlab::Error;
namespace config = serrinlab::config;
namespace fem2d = serrinlab::fem2d;
namespace geometry = serrinlab::geometry;
namespace identities = serrinlab::identities;
namespace radial = serrinlab::radial;

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string error_kind(const Error& e) {
  using namespace serrinlab;
  if (dynamic_cast<const InadmissibleDomain*>(&e)) return "InadmissibleDomain";
  if (dynamic_cast<const DegenerateAnnulus*>(&e)) return "DegenerateAnnulus";
  if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
  if (dynamic_cast<const NewtonDivergence*>(&e)) return "NewtonDivergence";
  if (dynamic_cast<const SingularStiffness*>(&e)) return "SingularStiffness";
  if (dynamic_cast<const MeshFailure*>(&e)) return "MeshFailure";
  if (dynamic_cast<const NotAnnular*>(&e)) return "NotAnnular";
  if (dynamic_cast<const NotSingleBoundary*>(&e)) return "NotSingleBoundary";
  if (dynamic_cast<const DegenerateDenominator*>(&e)) {
    return "DegenerateDenominator";
  }
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  return "Error";
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw serrinlab::IoError("cannot write " + path.string());
  out << content;
}

void write_config_echo(const fs::path& dir, const config::RunConfig& cfg) {
  ordered_json j;
  j["config_digest"] = cfg.digest;
  j["config"] = ordered_json::parse(cfg.canonical_text);
  write_text_file(dir / "config_echo.json", j.dump(2) + "\n");
}

struct RunResult {
  identities::SolvedProblem problem;
  // Closed-form constants, echoed in the solution CSV header.
  std::optional<double> cf_a;
  std::optional<double> cf_c0;
  std::optional<double> cf_c1;
};

RunResult solve_from_config(const config::RunConfig& cfg) {
  const geometry::SpaceForm sf = cfg.space_form();
  const geometry::Nonlinearity f = cfg.nonlinearity();

  if (cfg.mode == "closed_form") {
    radial::ClosedForm cf =
        radial::closed_form_linear(sf, cfg.radial_domain(), cfg.grid_size);
    RunResult res{identities::SolvedProblem::from_radial(std::move(cf.sol)),
                  cf.a, cf.c0, cf.c1};
    return res;
  }

  if (cfg.mode == "radial") {
    const geometry::RadialDomain dom = cfg.radial_domain();
    double inner_value = 0.0;
    if (!dom.is_ball()) {
      inner_value = cfg.inner_value
                        ? *cfg.inner_value
                        : radial::closed_form_linear(sf, dom).a.value();
    }
    radial::RadialSolution sol =
        radial::solve_radial(sf, dom, f, inner_value, cfg.grid_size,
                             cfg.newton_tol, cfg.max_newton_iters);
    return RunResult{identities::SolvedProblem::from_radial(std::move(sol)),
                     {}, {}, {}};
  }

  // fem
  const fem2d::PlanarDomain dom = cfg.planar_domain();
  auto problem = std::make_shared<fem2d::FemProblem>(
      dom, fem2d::build_mesh(dom, cfg.target_h));
  std::vector<double> dirichlet(problem->mesh().loops.size(), 0.0);
  if (dirichlet.size() > 1) {
    dirichlet[1] = cfg.inner_value
                       ? *cfg.inner_value
                       : radial::closed_form_linear(
                             sf, geometry::RadialDomain::annulus(
                                     cfg.inner_radius, cfg.outer_radius))
                             .a.value();
  }
  fem2d::FemSolution fs =
      problem->solve(f, dirichlet, cfg.newton_tol, cfg.max_newton_iters);
  return RunResult{identities::SolvedProblem::from_fem_solution(
                       problem, std::move(fs.u), f),
                   {}, {}, {}};
}

int emit_solver_error(const fs::path& out_dir, const config::RunConfig& cfg,
                      const Error& e) {
  ordered_json j;
  j["config_digest"] = cfg.digest;
  j["error_type"] = error_kind(e);
  j["message"] = e.what();
  const std::string text = j.dump();
  std::cout << text << "\n";
  std::error_code ec;
  if (fs::exists(out_dir, ec)) {
    try {
      write_text_file(out_dir / "error.json", text + "\n");
    } catch (const Error&) {
      // The diagnostic already went to stdout.
    }
  }
  return 2;
}

void write_solution_artifacts(const fs::path& dir, const config::RunConfig& cfg,
                              const RunResult& res) {
  const identities::SolvedProblem& p = res.problem;
  std::ostringstream sol;
  sol << "# serrinlab solution 1\n";
  sol << "# config_digest: " << cfg.digest << "\n";
  sol << "# domain: " << p.description() << "\n";
  if (res.cf_a) sol << "# a: " << fmt_g(*res.cf_a) << "\n";
  if (res.cf_c0) sol << "# c0: " << fmt_g(*res.cf_c0) << "\n";
  if (res.cf_c1) sol << "# c1: " << fmt_g(*res.cf_c1) << "\n";
  if (p.is_radial()) {
    const radial::RadialSolution& rs = p.radial_solution();
    sol << "r,u,du\n";
    for (std::size_t i = 0; i < rs.r.size(); ++i) {
      sol << fmt_g(rs.r[i]) << "," << fmt_g(rs.u[i]) << "," << fmt_g(rs.du[i])
          << "\n";
    }
  } else {
    const fem2d::Mesh2D& mesh = p.fem_problem().mesh();
    const std::vector<double>& u = p.fem_field().values;
    sol << "vertex,x,y,u\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      sol << v << "," << fmt_g(mesh.xy[v][0]) << "," << fmt_g(mesh.xy[v][1])
          << "," << fmt_g(u[v]) << "\n";
    }
    std::ostringstream ms;
    fem2d::save_mesh(mesh, ms);
    ms << "# config_digest " << cfg.digest << "\n";
    write_text_file(dir / "mesh.txt", ms.str());
  }
  write_text_file(dir / "solution.csv", sol.str());

  const fem2d::BoundaryTrace* trace = nullptr;
  if (!p.is_radial()) {
    trace = &identities::SolvedProblemAccess::trace(p).value();
  }
  std::ostringstream tr;
  tr << "# serrinlab trace 1\n";
  tr << "# config_digest: " << cfg.digest << "\n";
  tr << "component,theta,weight,u,u_nu,H,X_nu,flux_moment\n";
  const auto& comps = p.components();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    for (std::size_t si = 0; si < comps[ci].samples.size(); ++si) {
      const identities::Sample& s = comps[ci].samples[si];
      const double theta = trace ? trace->loops[ci][si].theta : 0.0;
      tr << comps[ci].tag << "," << fmt_g(theta) << "," << fmt_g(s.weight)
         << "," << fmt_g(s.u) << "," << fmt_g(s.u_nu) << "," << fmt_g(s.H)
         << "," << fmt_g(s.X_nu) << "," << fmt_g(s.flux_moment) << "\n";
    }
  }
  write_text_file(dir / "trace.csv", tr.str());
}

int cmd_solve(const config::RunConfig& cfg, const fs::path& out_dir) {
  std::optional<RunResult> res;
  try {
    res = solve_from_config(cfg);
  } catch (const Error& e) {
    return emit_solver_error(out_dir, cfg, e);
  }
  write_solution_artifacts(out_dir, cfg, *res);
  const identities::SolvedProblem& p = res->problem;
  std::cout << "solved " << p.description() << "\n";
  std::cout << "u_max " << fmt_g(p.u_max()) << " volume " << fmt_g(p.volume())
            << " h_eff " << fmt_g(p.h_eff()) << "\n";
  std::cout << "wrote " << (out_dir / "solution.csv").string() << ", "
            << (out_dir / "trace.csv").string() << "\n";
  return 0;
}

int cmd_verify(const config::RunConfig& cfg, const fs::path& out_dir,
               bool strict) {
  std::optional<RunResult> res;
  std::vector<identities::IdentityReport> reports;
  try {
    res = solve_from_config(cfg);
    reports = identities::run_checks(res->problem, cfg.checks);
  } catch (const Error& e) {
    return emit_solver_error(out_dir, cfg, e);
  }

  int n_fail = 0, n_hyp = 0;
  for (const auto& rep : reports) {
    if (rep.verdict == identities::Verdict::fail) ++n_fail;
    if (rep.verdict == identities::Verdict::hypothesis_not_met) ++n_hyp;
    std::cout << rep.name << ": " << identities::to_string(rep.verdict)
              << " (residual " << fmt_g(rep.residual) << ", tolerance "
              << fmt_g(rep.tolerance) << ")\n";
  }
  const bool failed = n_fail > 0 || (strict && n_hyp > 0);
  const std::string overall =
      n_fail > 0 ? "fail" : (n_hyp > 0 ? "hypothesis-not-met" : "pass");

  ordered_json j;
  j["config_digest"] = cfg.digest;
  j["strict"] = strict;
  j["overall"] = overall;
  ordered_json arr = ordered_json::array();
  for (const auto& rep : reports) arr.push_back(ordered_json::parse(rep.to_json()));
  j["reports"] = arr;
  j["config"] = ordered_json::parse(cfg.canonical_text);
  if (cfg.wants_format("json")) {
    write_text_file(out_dir / "reports.json", j.dump(2) + "\n");
  }
  if (cfg.wants_format("csv")) {
    std::ostringstream csv;
    csv << "# serrinlab reports 1\n";
    csv << "# config_digest: " << cfg.digest << "\n";
    csv << identities::IdentityReport::csv_header() << "\n";
    for (const auto& rep : reports) csv << rep.csv_row() << "\n";
    write_text_file(out_dir / "reports.csv", csv.str());
  }
  std::cout << "overall: " << overall << "\n";
  return failed ? 3 : 0;
}

int cmd_sweep(const config::RunConfig& base, const fs::path& out_dir,
              const std::string& param, const std::vector<std::string>& values,
              bool strict) {
  const std::vector<std::string>& names = identities::check_names();
  std::ofstream csv(out_dir / "sweep.csv", std::ios::binary);
  if (!csv) {
    throw serrinlab::IoError("cannot write " + (out_dir / "sweep.csv").string());
  }
  csv << "# serrinlab sweep 1\n";
  csv << "# config_digest: " << base.digest << "\n";
  csv << "# param: " << param << "\n";
  csv << "index,value,status,config_digest";
  for (const auto& n : names) {
    csv << "," << n << "_lhs," << n << "_rhs," << n << "_residual," << n
        << "_tolerance," << n << "_verdict";
  }
  csv << ",error\n" << std::flush;

  auto quote = [](std::string s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += "\"\"";
      else if (c == '\n') out += ' ';
      else out += c;
    }
    out += "\"";
    return out;
  };

  bool any_fail = false, any_hyp = false, any_solver = false, any_config = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::string status = "ok";
    std::string digest;
    std::string error_msg;
    std::vector<identities::IdentityReport> reports;
    try {
      const std::string patched =
          config::patch_config_text(base.canonical_text, param, values[i]);
      const config::RunConfig cfg = config::parse_config_text(patched);
      digest = cfg.digest;
      try {
        RunResult res = solve_from_config(cfg);
        reports = identities::run_checks(res.problem, cfg.checks);
        int n_fail = 0, n_hyp = 0;
        for (const auto& rep : reports) {
          if (rep.verdict == identities::Verdict::fail) ++n_fail;
          if (rep.verdict == identities::Verdict::hypothesis_not_met) ++n_hyp;
        }
        if (n_fail > 0) {
          status = "check_failed";
          any_fail = true;
        } else if (n_hyp > 0) {
          status = "hypothesis_not_met";
          any_hyp = true;
        }
      } catch (const Error& e) {
        status = "solver_error";
        error_msg = std::string(error_kind(e)) + ": " + e.what();
        any_solver = true;
      }
    } catch (const Error& e) {
      status = "config_error";
      error_msg = std::string(error_kind(e)) + ": " + e.what();
      any_config = true;
    }

    csv << i << "," << quote(values[i]) << "," << status << "," << digest;
    for (const auto& n : names) {
      const auto it = std::find_if(
          reports.begin(), reports.end(),
          [&](const identities::IdentityReport& r) { return r.name == n; });
      if (it == reports.end()) {
        csv << ",,,,,";
      } else {
        csv << "," << fmt_g(it->lhs) << "," << fmt_g(it->rhs) << ","
            << fmt_g(it->residual) << "," << fmt_g(it->tolerance) << ","
            << identities::to_string(it->verdict);
      }
    }
    csv << "," << quote(error_msg) << "\n" << std::flush;
    std::cout << "value " << values[i] << ": " << status << "\n";
  }

  if (any_fail || (strict && any_hyp)) return 3;
  if (any_solver) return 2;
  if (any_config) return 1;
  return 0;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string part = s.substr(pos, comma - pos);
    // trim surrounding whitespace
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
    pos = comma + 1;
    if (comma == s.size()) break;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 1;
  if (const char* env = std::getenv("SERRINLAB_THREADS")) {
    threads = std::max(1, std::atoi(env));
  }
  Eigen::setNbThreads(threads);

  CLI::App app{
      "serrinlab: semilinear Dirichlet problems on constant-curvature space "
      "forms,\nwith integral-identity and rigidity checkers"};
  app.require_subcommand(1);

  std::string config_path, out_override, param, values_csv;
  bool strict = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")
        ->required();
    sub->add_option("--out", out_override,
                    "output directory (overrides output.dir)");
  };
  CLI::App* solve = app.add_subcommand(
      "solve", "solve the configured problem and write solution artifacts");
  add_common(solve);
  CLI::App* verify = app.add_subcommand(
      "verify", "solve, then run the configured identity checks");
  add_common(verify);
  verify->add_flag("--strict", strict,
                   "treat hypothesis-not-met verdicts as failures");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "re-run the checks over values of one config parameter");
  add_common(sweep);
  sweep->add_flag("--strict", strict,
                  "treat hypothesis-not-met verdicts as failures");
  sweep->add_option("--param", param,
                    "dotted config path, e.g. solver.grid_size")
      ->required();
  sweep->add_option("--values", values_csv,
                    "comma-separated JSON scalar literals")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are configuration errors
  }

  std::optional<config::RunConfig> cfg;
  try {
    cfg = config::load_config_file(config_path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  const fs::path out_dir = out_override.empty() ? fs::path(cfg->out_dir)
                                                : fs::path(out_override);
  try {
    fs::create_directories(out_dir);
    write_config_echo(out_dir, *cfg);

    if (solve->parsed()) return cmd_solve(*cfg, out_dir);
    if (verify->parsed()) return cmd_verify(*cfg, out_dir, strict);
    std::vector<std::string> values = split_csv_list(values_csv);
    values.erase(std::remove(values.begin(), values.end(), std::string()),
                 values.end());
    if (values.empty()) {
      std::cerr << "config error: --values is empty\n";
      return 1;
    }
    return cmd_sweep(*cfg, out_dir, param, values, strict);
  } catch (const serrinlab::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    return emit_solver_error(out_dir, *cfg, e);
  }
}
