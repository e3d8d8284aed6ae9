#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>

#include "qsw/config.hpp"
#include "qsw/errors.hpp"
#include "qsw/pipeline.hpp"

using namespace qsw;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "problem": {"potential": {"kind": "harmonic", "omega": 4},
              "nonlinearity": {"kind": "power", "p": 6, "mu": 6}, "dimension": 1},
  "grid": {"R": 6, "n": 2001, "modes": 12},
  "solver": {"res_tol": 1e-3}
})";

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qsw-test-" + name);
  fs::remove_all(p);
  return p;
}

int shell(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("a complete config parses") {
  const RunConfig cfg = parse_config_text(kSmall);
  CHECK(cfg.potential.kind == "harmonic");
  CHECK(cfg.nonlinearity.mu == 6.0);
  CHECK(cfg.nodes == 2001);
  CHECK(cfg.solve.res_tol == 1e-3);
  CHECK(cfg.seed == kDefaultSeed);
  CHECK(cfg.solve.seed == kDefaultSeed);
}

TEST_CASE("missing mu is a configuration error") {
  CHECK_THROWS_AS(parse_config_text(R"({"problem": {"nonlinearity": {"kind": "power", "p": 6}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{}"), ConfigError);
}

TEST_CASE("invalid configs are rejected") {
  auto with = [](const std::string& patch) {
    auto doc = nlohmann::json::parse(kSmall);
    doc.merge_patch(nlohmann::json::parse(patch));
    return doc;
  };
  CHECK_NOTHROW(parse_config(with("{}")));
  CHECK_THROWS_AS(parse_config(with(R"({"grid": {"n": 63}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"grid": {"R": -1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"grid": {"n": 100.5}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"solver": {"grad_tol": 0}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"solver": {"res_tol": -1e-6}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"solver": {"directions": -5}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"solver": {"mode": "newton"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"solver": {"omega_list": [2, 1]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"solver": {"typo": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"extra": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"problem": {"dimension": 4}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"problem": {"potential": {"kind": "cosine"}}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"({"seed": -3})")), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(preset("no-such-preset"), ConfigError);
}

TEST_CASE("presets and overrides") {
  const RunConfig base = preset("oscillator-indefinite");
  CHECK(base.potential.omega == 4.0);
  CHECK(base.radius == 6.0);
  CHECK(base.nodes == 64001);
  const RunConfig cfg = parse_config_text(R"({"preset": "oscillator-indefinite", "grid": {"n": 4001, "coarse_n": 1001}, "seed": 9})");
  CHECK(cfg.nodes == 4001);
  CHECK(cfg.solve.coarse_nodes == 1001);
  // the preset coarse grid would no longer be coarser
  CHECK_THROWS_AS(parse_config_text(R"({"preset": "oscillator-indefinite", "grid": {"n": 4001}})"), ConfigError);
  CHECK(cfg.nonlinearity.mu == 6.0);
  CHECK(cfg.seed == 9);
  CHECK(cfg.solve.seed == 9);
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name));
}

TEST_CASE("resolved config round-trips") {
  const RunConfig cfg = parse_config_text(kSmall);
  const Json j = to_json(cfg);
  const RunConfig again = parse_config(nlohmann::json::parse(j.dump()));
  CHECK(to_json(again) == j);
}

TEST_CASE("automatic radius puts V~ above the boundary level") {
  RunConfig cfg = parse_config_text(kSmall);
  cfg.radius.reset();
  // x^2 - 4 + 6 >= 1000 first holds at x = 31.625 on the 1/8 lattice
  CHECK(resolve_radius(cfg) == 31.625);
  cfg.potential.kind = "constant";
  cfg.potential.value = 3.0;
  CHECK_THROWS_AS(resolve_radius(cfg), ConfigError);
}

TEST_CASE("pipeline: exit codes and artifacts") {
  RunConfig cfg = parse_config_text(kSmall);
  const RunResult ok = run(Command::Solve, cfg);
  CHECK(ok.exit_code == 0);
  for (const char* f : {"report.json", "profile.csv", "iters.csv", "spectrum.csv"}) CHECK(ok.artifacts.count(f) == 1);
  CHECK(ok.artifacts.count("diagnostics.json") == 0);
  const auto report = nlohmann::json::parse(ok.artifacts.at("report.json"));
  CHECK(report["schema_version"] == kSchemaVersion);
  CHECK(report["seed"] == kDefaultSeed);
  CHECK(report["spectrum"]["l"] == 2);
  CHECK(report["solution"]["converged"] == true);
  CHECK(ok.artifacts.at("profile.csv").rfind("node,v,u\n", 0) == 0);
  CHECK(ok.artifacts.at("spectrum.csv").rfind("i,lambda,beta\n", 0) == 0);

  cfg.solve.res_tol = 1e-6;  // unattainable at n = 2001
  const RunResult bad = run(Command::Solve, cfg);
  CHECK(bad.exit_code == 1);
  CHECK(bad.artifacts.count("diagnostics.json") == 1);
}

TEST_CASE("pipeline: same seed, identical report") {
  const RunConfig cfg = parse_config_text(kSmall);
  const RunResult a = run(Command::Probe, cfg);
  const RunResult b = run(Command::Probe, cfg);
  CHECK(a.artifacts.at("report.json") == b.artifacts.at("report.json"));
  RunConfig other = cfg;
  other.seed = 1;
  const RunResult c = run(Command::Probe, other);
  CHECK(a.artifacts.at("report.json") != c.artifacts.at("report.json"));
}

TEST_CASE("pipeline: refusals") {
  RunConfig cfg = parse_config_text(kSmall);
  cfg.mode = "mountain-pass";
  CHECK(run(Command::Solve, cfg).exit_code == 1);
  cfg.mode = "auto";
  cfg.potential.omega = 3.0;  // zero eigenvalue
  CHECK(run(Command::Solve, cfg).exit_code == 1);
  cfg.potential.kind = "constant";
  cfg.potential.value = 2.0;
  CHECK_THROWS_AS(run(Command::Continue, cfg), ConfigError);
}

TEST_CASE("dry run lists the stages") {
  const std::string plan = dry_run_plan(Command::Multi, parse_config_text(kSmall));
  CHECK(plan.find("validate") != std::string::npos);
  CHECK(plan.find("multiplicity search for J = 3") != std::string::npos);
  CHECK(plan.find("\"seed\"") != std::string::npos);
}

TEST_CASE("commands") {
  for (const auto& name : command_names()) CHECK(to_string(parse_command(name)) == name);
  CHECK_THROWS_AS(parse_command("solver"), ConfigError);
}

TEST_CASE("binary: exit status 2 leaves no artifacts") {
  const fs::path dir = scratch_dir("nomu");
  const fs::path cfg = fs::temp_directory_path() / "qsw-test-nomu.json";
  std::ofstream(cfg) << R"({"problem": {"nonlinearity": {"kind": "power", "p": 6}}})";
  CHECK(shell(std::string(QSW_BINARY) + " solve -c " + cfg.string() + " -o " + dir.string()) == 2);
  CHECK_FALSE(fs::exists(dir));
  CHECK(shell(std::string(QSW_BINARY) + " solve") == 2);
  CHECK(shell(std::string(QSW_BINARY) + " frobnicate") == 2);
}

TEST_CASE("binary: dry run computes nothing") {
  const fs::path dir = scratch_dir("dry");
  CHECK(shell(std::string(QSW_BINARY) + " solve --preset oscillator-indefinite --dry-run -o " + dir.string()) == 0);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("binary: builtin preset runs end to end and is reproducible") {
  const fs::path a = scratch_dir("preset-a");
  const fs::path b = scratch_dir("preset-b");
  CHECK(shell(std::string(QSW_BINARY) + " solve --preset oscillator-indefinite -o " + a.string()) == 0);
  CHECK(shell(std::string(QSW_BINARY) + " solve --preset oscillator-indefinite -o " + b.string()) == 0);
  REQUIRE(fs::exists(a / "report.json"));
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "profile.csv") == slurp(b / "profile.csv"));
  const auto report = nlohmann::json::parse(slurp(a / "report.json"));
  CHECK(report["solution"]["converged"] == true);
  CHECK(report["solution"]["pde_residual"].get<double>() <= 1e-6);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("binary: numeric failure writes diagnostics") {
  const fs::path dir = scratch_dir("fail");
  const fs::path cfg = fs::temp_directory_path() / "qsw-test-fail.json";
  std::ofstream(cfg) << R"({"preset": "oscillator-indefinite", "grid": {"n": 2001, "coarse_n": 0}})";
  CHECK(shell(std::string(QSW_BINARY) + " solve -c " + cfg.string() + " -o " + dir.string()) == 1);
  CHECK(fs::exists(dir / "diagnostics.json"));
  fs::remove_all(dir);
}
