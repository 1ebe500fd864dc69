#include <doctest.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "hstokes/cli.hpp"
#include "hstokes/parallel.hpp"

using namespace hstokes::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hstokes_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

int run_quiet(const std::string& command, const fs::path& out, std::optional<fs::path> config = std::nullopt) {
  std::ostringstream log;
  Invocation inv;
  inv.command = command;
  inv.config_path = std::move(config);
  inv.out = out;
  return run(inv, log);
}

std::string error_of(const std::string& command, const std::string& text) {
  try {
    resolve_config(command, parse_config_text(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("cli_harness") {

TEST_CASE("resolved configs are fixed points") {
  for (const auto& c : commands()) {
    const json a = resolve_config(c, json::object());
    const json b = resolve_config(c, a);
    CAPTURE(c);
    CHECK(a.dump() == b.dump());
    CHECK(a.contains("seed"));
  }
  CHECK(resolve_config("verify-symbols", json::object(), 42)["seed"] == 42);
  CHECK_THROWS_AS(resolve_config("plot", json::object()), ConfigError);
}

TEST_CASE("schema errors name the offending location") {
  CHECK(error_of("verify-symbols", R"({"tolerances": {"multiplier": -1}})") ==
        "/tolerances/multiplier: must be positive and finite");
  CHECK(error_of("verify-symbols", R"({"sampling": {"xi_mn": 1}})") == "/sampling/xi_mn: unknown key");
  CHECK(error_of("run-ns", R"({"grid": {"y": {"points": "many"}}})") == "/grid/y/points: expected an integer");
  CHECK(error_of("solve", R"({"modes": [{"m": [0]}]})").rfind("/modes/0/m:", 0) == 0);
  CHECK(error_of("solve", R"({"modes": [{"m": [1]}, {"m": [-1]}]})").rfind("/modes/1/m:", 0) == 0);
  CHECK(error_of("solve", R"({"modes": [{"m": [8]}]})").rfind("/modes/0/m:", 0) == 0);
  CHECK(error_of("energy-audit", R"({"classification": {"conditions": [{"alpha": 2, "beta": 0}]}})") ==
        "/classification/conditions/0/alpha: must be -1, 0 or 1");
  CHECK(error_of("verify-traces", R"({"relations": ["T01"]})") == "/relations: entries must be T00, T10 or T11");
  CHECK(error_of("verify-symbols", "[1, 2]") == "/: expected an object");
}

TEST_CASE("syntax errors carry line and column") {
  const std::string msg = error_of("verify-symbols", "{\n  \"modes\": 3,\n  \"seed\": ,\n}\n");
  CHECK(msg.rfind("line 3, column 11:", 0) == 0);
}

TEST_CASE("jobs flag takes precedence over the environment") {
  CHECK(resolve_jobs(std::nullopt, nullptr) == std::nullopt);
  CHECK(resolve_jobs(std::nullopt, "") == std::nullopt);
  CHECK(resolve_jobs(std::nullopt, "3") == 3);
  CHECK(resolve_jobs(2, "3") == 2);
  CHECK_THROWS_AS(resolve_jobs(0, nullptr), ConfigError);
  CHECK_THROWS_AS(resolve_jobs(std::nullopt, "3x"), ConfigError);
  CHECK_THROWS_AS(resolve_jobs(std::nullopt, "-1"), ConfigError);
}

TEST_CASE("config errors exit 2 without outputs") {
  const fs::path dir = scratch("config_error");
  const fs::path cfg = write_config(dir, R"({"tolerances": {"generic_inverse": -1e-10}})");
  CHECK(run_quiet("verify-symbols", dir / "out", cfg) == kConfigError);
  CHECK(!fs::exists(dir / "out"));
  CHECK(run_quiet("verify-symbols", dir / "out", dir / "missing.json") == kConfigError);
}

TEST_CASE("single-mode symbol smoke run") {
  const fs::path dir = scratch("smoke");
  CHECK(run_quiet("verify-symbols", dir, write_config(dir, R"({"modes": 1, "seed": 4})")) == kSuccess);
  std::istringstream csv(slurp(dir / "verify_symbols.csv"));
  std::string header, row, extra;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header ==
        "mode_key,omega_identity,inverse_identity,generic_inverse,factorization,multiplier,max_condition,double_symbol_gap");
  CHECK(row.rfind("\"rho=", 0) == 0);
  CHECK(!std::getline(csv, extra));
  const json m = json::parse(slurp(dir / "verify_symbols.json"));
  CHECK(m["status"] == "ok");
  CHECK(m["config"]["seed"] == 4);
}

TEST_CASE("exhausted quadrature budget exits 3") {
  const fs::path dir = scratch("budget");
  const fs::path cfg = write_config(dir, R"({"modes": 4, "quadrature": {"max_subdivisions": 0}})");
  CHECK(run_quiet("verify-traces", dir, cfg) == kNumericalBudget);
  const json m = json::parse(slurp(dir / "verify_traces.json"));
  CHECK(m["status"] == "numerical_budget");
  CHECK(m["error"].get<std::string>().find("subdivisions") != std::string::npos);
}

TEST_CASE("trace sweep reports the worst offender per relation") {
  const fs::path dir = scratch("traces");
  CHECK(run_quiet("verify-traces", dir, write_config(dir, R"({"modes": 12})")) == kSuccess);
  const json m = json::parse(slurp(dir / "verify_traces.json"));
  REQUIRE(m["summary"]["sweeps"].size() == 6);
  for (const auto& s : m["summary"]["sweeps"]) {
    CHECK(s["passed"] == true);
    CHECK(s["worst_key"].get<std::string>().rfind("rho=", 0) == 0);
  }
  const json tight = json::parse(R"({"modes": 12, "tolerance": 1e-30})");
  std::ofstream(dir / "tight.json") << tight.dump();
  CHECK(run_quiet("verify-traces", dir / "tight", dir / "tight.json") == kToleranceBreach);
}

TEST_CASE("solve: empty list gives the zero field, one pair meets the residual bound") {
  const fs::path dir = scratch("solve");
  CHECK(run_quiet("solve", dir / "empty") == kSuccess);
  std::istringstream csv(slurp(dir / "empty" / "field.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x0,y,u0,u1,p");
  std::getline(csv, line);
  CHECK(line == "0,0,0,0,0");

  const fs::path cfg = write_config(dir, R"({"modes": [{"m": [1], "h_w": [0.5, -0.25]}]})");
  CHECK(run_quiet("solve", dir / "pair", cfg) == kSuccess);
  const json m = json::parse(slurp(dir / "pair" / "solve.json"));
  CHECK(m["summary"]["field_momentum_residual"].get<double>() < 1e-6);
  CHECK(m["summary"]["field_divergence"].get<double>() < 1e-6);
  CHECK(m["summary"]["terms"] == 2);

  // The manifest's config reproduces itself and the run.
  std::ofstream(dir / "again.json") << m["config"].dump(2);
  CHECK(run_quiet("solve", dir / "again", dir / "again.json") == kSuccess);
  CHECK(slurp(dir / "again" / "solve.json") == slurp(dir / "pair" / "solve.json"));
  CHECK(slurp(dir / "again" / "field.csv") == slurp(dir / "pair" / "field.csv"));
}

TEST_CASE("energy audit lists B3 witnesses and is deterministic across worker counts") {
  const fs::path dir = scratch("audit");
  const fs::path cfg = write_config(dir, R"({"classification": {"trials": 10}, "balance": {"levels": 2}})");
  const int before = hstokes::worker_count();
  hstokes::set_worker_count(1);
  CHECK(run_quiet("energy-audit", dir / "a", cfg) == kSuccess);
  hstokes::set_worker_count(std::max(2, before));
  CHECK(run_quiet("energy-audit", dir / "b", cfg) == kSuccess);
  hstokes::set_worker_count(before);
  for (const char* f : {"classification.csv", "balance.csv", "energy_audit.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const json m = json::parse(slurp(dir / "a" / "energy_audit.json"));
  CHECK(m["summary"]["b3_witnesses"].size() == 2);
  CHECK(m["summary"]["mismatches"] == 0);
}

TEST_CASE("short Navier-Stokes run converges") {
  const fs::path dir = scratch("ns");
  const fs::path cfg = write_config(dir, R"({"horizon": 0.03})");
  CHECK(run_quiet("run-ns", dir, cfg) == kSuccess);
  const json m = json::parse(slurp(dir / "run_ns.json"));
  CHECK(m["summary"]["verdict"] == "converged");
  CHECK(m["summary"]["steps"] == 3);
  std::istringstream csv(slurp(dir / "energy.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4);
}

}
