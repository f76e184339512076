// End-to-end checks of the command-line driver: exit codes, artifact
// layout, and determinism.  The binary under test and the bundled config
// directory arrive through LIISS_CLI and LIISS_CONFIG_DIR.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("LIISS_CLI");
  REQUIRE(p != nullptr);
  return p;
}

std::string config_dir() {
  const char* p = std::getenv("LIISS_CONFIG_DIR");
  REQUIRE(p != nullptr);
  return p;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() /
               ("liiss_cli_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct CmdResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

CmdResult run_cli(const std::string& args, const std::string& tag) {
  fs::path scratch = fresh_dir("io_" + tag);
  fs::path out_file = scratch / "stdout.txt";
  fs::path err_file = scratch / "stderr.txt";
  std::string cmd = cli_path() + " " + args + " >" + out_file.string() + " 2>" +
                    err_file.string();
  int status = std::system(cmd.c_str());
  CmdResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

json load_summary(const fs::path& dir) {
  std::ifstream f(dir / "summary.json");
  REQUIRE(f.good());
  return json::parse(f);
}

}  // namespace

TEST_CASE("help exits zero") {
  CHECK(run_cli("--help", "help").code == 0);
}

TEST_CASE("missing config file is a config error") {
  auto r = run_cli("run /no/such/file.json", "missing");
  CHECK(r.code == 2);
  CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("malformed json reports a position") {
  fs::path dir = fresh_dir("badjson");
  spit(dir / "bad.json", "{\"kind\": \"ode_closed\",\n");
  auto r = run_cli("run " + (dir / "bad.json").string(), "badjson");
  CHECK(r.code == 2);
  CHECK(r.err.find("config error") != std::string::npos);
  CHECK(r.err.find("line") != std::string::npos);
}

TEST_CASE("unknown fields are rejected by name") {
  fs::path dir = fresh_dir("unknown");
  spit(dir / "cfg.json", R"({"kind": "ode_closed", "bogus": 1})");
  auto r = run_cli("run " + (dir / "cfg.json").string(), "unknown");
  CHECK(r.code == 2);
  CHECK(r.err.find("bogus") != std::string::npos);
}

TEST_CASE("closed-loop benchmark converges and passes its default check") {
  fs::path out = fresh_dir("fig2a");
  auto r = run_cli("run " + config_dir() + "/ode_fig2a.json --out " +
                       out.string(),
                   "fig2a");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "norms.svg"));
  CHECK(fs::exists(out / "components.svg"));
  json s = load_summary(out);
  CHECK(s.at("kind") == "ode_closed");
  CHECK(s.at("final_norm").get<double>() < 1e-3);
  CHECK(s.at("violations").get<size_t>() == 0);
  CHECK(s.at("blow_up_time").is_null());
}

TEST_CASE("identical reruns produce byte-identical artifacts") {
  fs::path a = fresh_dir("rerun_a");
  fs::path b = fresh_dir("rerun_b");
  const std::string cfg = config_dir() + "/ode_fig2a.json";
  CHECK(run_cli("run " + cfg + " --out " + a.string() + " --no-plots",
                "rerun1")
            .code == 0);
  CHECK(run_cli("run " + cfg + " --out " + b.string() + " --no-plots",
                "rerun2")
            .code == 0);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("envelope violations exit one") {
  // The identity certificate demands e^-t decay; the benchmark loop decays
  // polynomially, so late samples must violate the envelope.
  fs::path dir = fresh_dir("cert");
  spit(dir / "cfg.json", R"({
    "kind": "ode_closed",
    "amplitude": 0,
    "horizon": 20,
    "certificate": {
      "alpha1": "s", "alpha2": "s",
      "theta1": "s", "theta2": "0",
      "phi": "s", "g1": "1"
    }
  })");
  fs::path out = dir / "out";
  auto r = run_cli("run " + (dir / "cfg.json").string() + " --out " +
                       out.string() + " --no-plots",
                   "cert");
  CHECK(r.code == 1);
  json s = load_summary(out);
  CHECK(s.at("violations").get<size_t>() > 0);
}

TEST_CASE("sweep fans out into per-run directories") {
  fs::path dir = fresh_dir("sweep");
  spit(dir / "cfg.json",
       R"({"kind": "ode_closed", "sweep": [0, 3], "horizon": 2, "samples": 201})");
  fs::path out = dir / "out";
  auto r = run_cli("run " + (dir / "cfg.json").string() + " --out " +
                       out.string() + " --no-plots",
                   "sweep");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "run_0" / "trajectory.csv"));
  CHECK(fs::exists(out / "run_1" / "trajectory.csv"));
  CHECK(fs::exists(out / "run_0" / "summary.json"));
  json merged = load_summary(out);
  REQUIRE(merged.at("runs").size() == 2);
  CHECK(merged.at("runs")[0].at("amplitude").get<double>() == 0.0);
  CHECK(merged.at("runs")[1].at("amplitude").get<double>() == 3.0);
  CHECK(merged.at("runs")[1].at("out_dir") == "run_1");
}

TEST_CASE("pde run writes norm and snapshot tables") {
  fs::path dir = fresh_dir("pde");
  spit(dir / "cfg.json", R"({
    "kind": "pde",
    "amplitude": 0,
    "x0_scale": 0.5,
    "n_xi": 51,
    "dt": 0.001,
    "horizon": 0.2,
    "snapshots": [0.1]
  })");
  fs::path out = dir / "out";
  auto r = run_cli("run " + (dir / "cfg.json").string() + " --out " +
                       out.string() + " --no-plots",
                   "pde");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "norms.csv"));
  CHECK(fs::exists(out / "snapshots.csv"));
  json s = load_summary(out);
  CHECK(s.at("kind") == "pde");
  CHECK(s.at("violations").get<size_t>() == 0);
}

TEST_CASE("beta table config writes its csv") {
  fs::path out = fresh_dir("beta_cfg");
  auto r = run_cli("run " + config_dir() + "/beta_example.json --out " +
                       out.string() + " --no-plots",
                   "beta_cfg");
  CHECK(r.code == 0);
  std::string csv = slurp(out / "beta.csv");
  CHECK(csv.rfind("s,t_0", 0) == 0);  // header leads with the s column
  // 17 significant digits, so 0.05 round-trips as 0.050000000000000003
  CHECK(csv.find("\n0.05") != std::string::npos);
}

TEST_CASE("beta subcommand prints the table") {
  auto r = run_cli("beta --alpha s --g 1 --s-grid 1:1:1 --t-grid 0:1:2",
                   "beta_cmd");
  CHECK(r.code == 0);
  CHECK(r.out.find("s,t_0,t_1") != std::string::npos);
  // beta(1, 0) = 1 and beta(1, 1) = e^-1
  CHECK(r.out.find("1,1,0.36787944117144233") != std::string::npos);
}

TEST_CASE("corrupted criterion fails the acceptance run") {
  auto r = run_cli("verify --corrupt quartic-lower-bound", "corrupt");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(r.out.find("quartic-lower-bound") != std::string::npos);
  CHECK(r.out.find("16/17 criteria passed") != std::string::npos);
}
