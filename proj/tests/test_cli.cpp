#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#ifndef SERRINLAB_BIN
#error "SERRINLAB_BIN must point at the CLI executable"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SERRINLAB_BIN) + " " + args +
                          " >> cli_tmp/stdout.log 2>> cli_tmp/stderr.log";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
#ifdef _WIN32
  return status;
#else
  return WEXITSTATUS(status);
#endif
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct CliFixture {
  CliFixture() {
    fs::remove_all("cli_tmp");
    fs::create_directories("cli_tmp");
    write_file("cli_tmp/disk.json", R"({
      "geometry": { "n": 2, "k": 0.0, "domain": { "type": "ball", "radius": 1.0 } },
      "nonlinearity": { "linear_family": true },
      "solver": { "mode": "radial", "grid_size": 128 },
      "output": { "formats": ["json", "csv"] }
    })");
    write_file("cli_tmp/bigcap.json", R"({
      "geometry": { "n": 2, "k": 1.0, "domain": { "type": "ball", "radius": 2.0 } },
      "nonlinearity": { "linear_family": true },
      "solver": { "mode": "closed_form" }
    })");
    write_file("cli_tmp/degenerate.json", R"({
      "geometry": { "n": 2, "k": 1.0,
        "domain": { "type": "ball", "radius": 1.5707963267948966 } },
      "nonlinearity": { "linear_family": true },
      "solver": { "mode": "closed_form" }
    })");
    write_file("cli_tmp/badkey.json", R"({
      "geometry": { "n": 2, "k": 0.0, "domain": { "type": "ball", "radius": 1.0 } },
      "nonlinearity": { "linear_family": true },
      "solver": { "mode": "radial", "grdi_size": 128 }
    })");
    write_file("cli_tmp/fem_star.json", R"({
      "geometry": { "n": 2, "k": 0.0, "domain": { "type": "star",
        "outer": { "base": 1.0, "cos": [0.0, 0.15] } } },
      "nonlinearity": { "linear_family": true },
      "solver": { "mode": "fem", "target_h": 0.1 }
    })");
  }
};

}  // namespace

TEST_CASE_FIXTURE(CliFixture, "solve writes the documented artifacts") {
  CHECK(run_cli("solve --config cli_tmp/disk.json --out cli_tmp/s1") == 0);
  CHECK(fs::exists("cli_tmp/s1/config_echo.json"));
  CHECK(fs::exists("cli_tmp/s1/solution.csv"));
  CHECK(fs::exists("cli_tmp/s1/trace.csv"));
  CHECK_FALSE(fs::exists("cli_tmp/s1/mesh.txt"));  // radial run: no mesh
  const std::string sol = read_file("cli_tmp/s1/solution.csv");
  CHECK(sol.rfind("# serrinlab solution 1", 0) == 0);
  CHECK(sol.find("# config_digest:") != std::string::npos);
  CHECK(sol.find("r,u,du") != std::string::npos);

  // FEM solve additionally persists the mesh
  CHECK(run_cli("solve --config cli_tmp/fem_star.json --out cli_tmp/s2") == 0);
  CHECK(fs::exists("cli_tmp/s2/mesh.txt"));
  const std::string mesh = read_file("cli_tmp/s2/mesh.txt");
  CHECK(mesh.rfind("serrinlab-mesh 1", 0) == 0);
}

TEST_CASE_FIXTURE(CliFixture, "verify passes, emits reports, reruns byte-identical") {
  CHECK(run_cli("verify --config cli_tmp/disk.json --out cli_tmp/v1") == 0);
  CHECK(fs::exists("cli_tmp/v1/reports.json"));
  CHECK(fs::exists("cli_tmp/v1/reports.csv"));
  const std::string r1 = read_file("cli_tmp/v1/reports.json");
  CHECK(r1.find("\"overall\": \"pass\"") != std::string::npos);
  CHECK(r1.find("heintze_karcher") != std::string::npos);

  CHECK(run_cli("verify --config cli_tmp/disk.json --out cli_tmp/v2") == 0);
  CHECK(read_file("cli_tmp/v2/reports.json") == r1);
  CHECK(read_file("cli_tmp/v2/reports.csv") == read_file("cli_tmp/v1/reports.csv"));
}

TEST_CASE_FIXTURE(CliFixture, "hypothesis gates: exit 0 plain, exit 3 strict") {
  CHECK(run_cli("verify --config cli_tmp/bigcap.json --out cli_tmp/h1") == 0);
  const std::string r = read_file("cli_tmp/h1/reports.json");
  CHECK(r.find("\"overall\": \"hypothesis-not-met\"") != std::string::npos);
  CHECK(run_cli("verify --strict --config cli_tmp/bigcap.json --out cli_tmp/h2") == 3);
}

TEST_CASE_FIXTURE(CliFixture, "configuration errors exit 1") {
  CHECK(run_cli("verify --config cli_tmp/badkey.json --out cli_tmp/e1") == 1);
  CHECK(run_cli("verify --config cli_tmp/missing.json --out cli_tmp/e2") == 1);
  CHECK(run_cli("") == 1);                 // no subcommand
  CHECK(run_cli("frobnicate") == 1);       // unknown subcommand
  CHECK(run_cli("--help") == 0);
}

TEST_CASE_FIXTURE(CliFixture, "solver failures exit 2 with a diagnostic file") {
  CHECK(run_cli("solve --config cli_tmp/degenerate.json --out cli_tmp/d1") == 2);
  CHECK(fs::exists("cli_tmp/d1/error.json"));
  const std::string err = read_file("cli_tmp/d1/error.json");
  CHECK(err.find("DegenerateAnnulus") != std::string::npos);
  CHECK(err.find("config_digest") != std::string::npos);
}

TEST_CASE_FIXTURE(CliFixture, "sweep aggregates row statuses into the exit code") {
  // all-pass sweep
  CHECK(run_cli("sweep --config cli_tmp/disk.json "
                "--param geometry.domain.radius --values 0.8,1.0 "
                "--out cli_tmp/w1") == 0);
  const std::string csv = read_file("cli_tmp/w1/sweep.csv");
  CHECK(csv.rfind("# serrinlab sweep 1", 0) == 0);
  CHECK(csv.find("# param: geometry.domain.radius") != std::string::npos);
  CHECK(csv.find("0,\"0.8\",ok") != std::string::npos);
  CHECK(csv.find("1,\"1.0\",ok") != std::string::npos);

  // a degenerate row turns the aggregate into exit 2, later rows still run
  write_file("cli_tmp/sw2.json", read_file("cli_tmp/bigcap.json"));
  CHECK(run_cli("sweep --config cli_tmp/sw2.json "
                "--param geometry.domain.radius "
                "--values 1.0,1.5707963267948966,2.0 --out cli_tmp/w2") == 2);
  const std::string csv2 = read_file("cli_tmp/w2/sweep.csv");
  CHECK(csv2.find("solver_error") != std::string::npos);
  CHECK(csv2.find("2,\"2.0\",") != std::string::npos);

  // sweep requires --param and --values
  CHECK(run_cli("sweep --config cli_tmp/disk.json --out cli_tmp/w3") == 1);
}
