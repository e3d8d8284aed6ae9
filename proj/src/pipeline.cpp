#include "qsw/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsw/errors.hpp"
#include "qsw/probes.hpp"
#include "qsw/report.hpp"

namespace qsw {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Validate, "validate"}, {Command::Spectrum, "spectrum"}, {Command::TransformTable, "transform-table"},
    {Command::Solve, "solve"},       {Command::Multi, "multi"},       {Command::Probe, "probe"},
    {Command::Continue, "continue"}};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Shared state of one run: the report under construction and the artifacts.
class Run {
 public:
  Run(Command command, const RunConfig& cfg) : command_(command), cfg_(cfg) {
    report_["schema_version"] = kSchemaVersion;
    report_["command"] = to_string(command);
    report_["seed"] = cfg.seed;
    report_["status"] = "running";
    report_["exit_code"] = nullptr;
    report_["config"] = to_json(cfg);
    // The destination does not change the results; keep reports comparable across directories.
    report_["config"]["output"].erase("directory");
    report_["stages"] = Json::array();
  }

  Json& report() { return report_; }
  const RunConfig& config() const { return cfg_; }
  Command command() const { return command_; }

  void stage(const std::string& name, bool passed, const std::string& detail) {
    report_["stages"].push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    summary_ << name << ": " << (passed ? "ok" : "FAILED") << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    if (!passed && failed_stage_.empty()) failed_stage_ = name;
  }
  bool failed() const { return !failed_stage_.empty(); }

  void add(const std::string& name, std::string contents) {
    if (cfg_.write_csv || name.size() < 4 || name.substr(name.size() - 4) != ".csv")
      artifacts_[name] = std::move(contents);
  }

  RunResult finish() {
    RunResult out;
    out.exit_code = failed() ? 1 : 0;
    report_["status"] = failed() ? "failed" : "ok";
    report_["exit_code"] = out.exit_code;
    artifacts_["report.json"] = dump(report_);
    if (failed()) {
      Json diag = {{"schema_version", kSchemaVersion},
                   {"command", to_string(command_)},
                   {"seed", cfg_.seed},
                   {"failed_stage", failed_stage_},
                   {"stages", report_["stages"]}};
      artifacts_["diagnostics.json"] = dump(diag);
    }
    out.artifacts = std::move(artifacts_);
    out.summary = summary_.str();
    return out;
  }

  RunResult abort(const std::string& stage, const std::string& error) {
    Json diag = {{"schema_version", kSchemaVersion},
                 {"command", to_string(command_)},
                 {"seed", cfg_.seed},
                 {"failed_stage", stage},
                 {"error", error},
                 {"stages", report_["stages"]}};
    RunResult out;
    out.exit_code = 1;
    out.artifacts["diagnostics.json"] = dump(diag);
    out.summary = summary_.str() + stage + ": numeric failure: " + error + "\n";
    return out;
  }

 private:
  Command command_;
  const RunConfig& cfg_;
  Json report_;
  std::map<std::string, std::string> artifacts_;
  std::ostringstream summary_;
  std::string failed_stage_;
};

std::string fmt(double x) { return format_number(x); }

SamplingPlan sampling_plan(const RunConfig& cfg) { return {cfg.table_min, cfg.table_max, cfg.property_samples}; }

void run_validate(Run& run, const Problem& problem, const Grid& grid) {
  const RunConfig& cfg = run.config();
  const ValidationReport rep = validate(problem, grid, sampling_plan(cfg));
  run.report()["validation"] = validation_json(rep);
  const TransformTable tr;
  const PropertyReport l0 = verify_l0(
      tr, [&](double t) { return problem.gtilde(t); },
      log_samples(cfg.table_min, cfg.table_max, cfg.property_samples, true));
  run.report()["validation"]["l0_inequality"] = property_json(l0);
  std::string failing;
  for (const auto& c : rep.checks)
    if (!c.passed) failing += (failing.empty() ? "" : "; ") + c.name;
  if (!l0.all_passed()) failing += (failing.empty() ? "" : "; ") + std::string("l0 inequality");
  run.stage("validate", failing.empty(), failing.empty() ? "hypotheses hold at every sample" : "violated: " + failing);
}

SpectralSplit run_spectrum(Run& run, const Problem& problem, const Grid& grid) {
  const SpectralSplit split = eigenpairs(problem, grid, run.config().modes);
  run.report()["spectrum"] = spectrum_json(split, problem.shift);
  run.add("spectrum.csv", spectrum_csv(split, problem.shift));
  std::string detail = "l = " + std::to_string(split.negative_count) + ", delta = " + fmt(split.gap);
  if (split.is_degenerate()) detail += ", zero is numerically an eigenvalue";
  else detail += ", eta = " + fmt(coercivity_eta(split, problem.shift));
  run.stage("spectrum", true, detail);
  return split;
}

std::string solve_detail(const SolveReport& rep) {
  return rep.status + ", phi = " + fmt(rep.phi) + ", |Phi'| = " + fmt(rep.grad_norm) +
         ", residual = " + fmt(rep.pde_residual);
}

void run_solve(Run& run, const Problem& problem, const Grid& grid, const SpectralSplit& split) {
  const RunConfig& cfg = run.config();
  const Index l = split.negative_count;
  if (split.is_degenerate()) {
    run.stage("solve", false, "refused: zero is numerically an eigenvalue, the linking split is undefined");
    return;
  }
  SolveMode mode = l == 0 ? SolveMode::MountainPass : SolveMode::LocalLinking;
  if (cfg.mode == "mountain-pass" && l > 0) {
    run.stage("solve", false, "refused: mountain-pass mode needs l = 0, found l = " + std::to_string(l));
    return;
  }
  if (cfg.mode == "local-linking" && l == 0) {
    run.stage("solve", false, "refused: local-linking mode needs l >= 1");
    return;
  }
  const SolveReport rep = mode == SolveMode::MountainPass ? mountain_pass_solve(problem, grid, split, cfg.solve)
                                                          : local_linking_solve(problem, grid, split, cfg.solve);
  run.report()["solution"] = solve_json(rep);
  run.add("profile.csv", profile_csv(grid, rep));
  run.add("iters.csv", iterations_csv(rep));
  run.stage(std::string("solve (") + to_string(mode) + ")", rep.converged, solve_detail(rep));
}

void run_multi(Run& run, const Problem& problem, const Grid& grid, const SpectralSplit& split) {
  const RunConfig& cfg = run.config();
  const MultiplicityReport rep = multiplicity_search(problem, grid, split, cfg.count, cfg.solve);
  run.report()["multiplicity"] = multiplicity_json(rep);
  bool all = rep.complete && static_cast<int>(rep.solutions.size()) >= cfg.count;
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    const SolveReport& s = rep.solutions[i];
    all = all && s.converged;
    run.add("profile_" + std::to_string(i + 1) + ".csv", profile_csv(grid, s));
    run.add("iters_" + std::to_string(i + 1) + ".csv", iterations_csv(s));
  }
  run.stage("multi", all,
            std::to_string(rep.solutions.size()) + " of " + std::to_string(cfg.count) + " distinct solutions" +
                (rep.complete ? "" : ", incomplete"));
}

void run_probe(Run& run, const Problem& problem, const Grid& grid, const SpectralSplit& split) {
  const RunConfig& cfg = run.config();
  const LocalLinkingProbe ll = local_linking_probe(problem, grid, split, cfg.epsilon, cfg.directions, cfg.seed);
  std::vector<Field> basis;
  for (Index i = 0; i < cfg.probe_modes; ++i) basis.push_back(split.mode(i));
  const AntiCoercivityProbe ac = anti_coercivity_probe(problem, grid, basis, cfg.radii, cfg.ray_directions, cfg.seed + 1,
                                                       cfg.ray_norm == "L2" ? DirectionNorm::L2 : DirectionNorm::X);
  const DescentProbe dp = descent_probe(problem, grid, ac);
  run.report()["probes"] = {{"local_linking", probe_json(ll)},
                            {"anti_coercivity", probe_json(ac)},
                            {"descent", probe_json(dp)}};
  run.stage("probe local-linking", ll.verdict != Verdict::Fail,
            "max on X^- sphere = " + fmt(ll.minus_max) + ", min on X^+ sphere = " + fmt(ll.plus_min));
  run.stage("probe anti-coercivity", ac.verdict != Verdict::Fail,
            std::to_string(ac.rays.size()) + " " + cfg.ray_norm + "-unit rays in span of " +
                std::to_string(cfg.probe_modes) + " modes" +
                (ac.all_negative ? ", negative at every radius" : ", not negative at every radius"));
  run.stage("probe descent", dp.verdict != Verdict::Fail,
            std::to_string(dp.tested) + " points tested, " + std::to_string(dp.failures) + " failures");
}

void run_continue(Run& run, const Problem& problem, const Grid& grid) {
  const RunConfig& cfg = run.config();
  const auto points = continuation_in_omega(problem, grid, cfg.omegas, cfg.modes, cfg.solve, cfg.warm_start);
  run.report()["continuation"] = continuation_json(points);
  bool all = true;
  std::string detail;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.degenerate) all = all && p.solved;
    if (p.report.v.size() == grid.size()) {
      run.add("profile_" + std::to_string(i + 1) + ".csv", profile_csv(grid, p.report));
      run.add("iters_" + std::to_string(i + 1) + ".csv", iterations_csv(p.report));
    }
    detail += (i ? "; " : "") + std::string("omega = ") + fmt(p.omega) + ": l = " + std::to_string(p.negative_count) +
              (p.degenerate ? " degenerate" : p.solved ? " converged" : " FAILED");
  }
  run.stage("continue", all, detail);
}

void run_transform_table(Run& run) {
  const RunConfig& cfg = run.config();
  const TransformTable tr;
  std::vector<double> ts = log_samples(cfg.table_min, cfg.table_max, cfg.table_count, true);
  ts.push_back(0.0);
  std::sort(ts.begin(), ts.end());
  run.add("transform.csv", transform_csv(tr, ts));
  const PropertyReport rep = verify_p1(tr, log_samples(cfg.table_min, cfg.table_max, cfg.property_samples, true));
  run.report()["transform"] = property_json(rep);
  run.stage("transform properties", rep.all_passed(),
            "kappa = f(1) = " + fmt(rep.kappa_reported) + ", C_lambda = " + fmt(rep.c_lambda));
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

Command parse_command(const std::string& name) {
  for (const auto& [cmd, n] : kCommands)
    if (name == n) return cmd;
  throw ConfigError("unknown command '" + name + "'");
}

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [cmd, name] : kCommands) out.emplace_back(name);
  return out;
}

RunResult run(Command command, const RunConfig& cfg) {
  Run run(command, cfg);

  if (command == Command::Multi && !build_nonlinearity(cfg.nonlinearity).odd())
    throw ConfigError("multi: the multiplicity search needs an odd nonlinearity");
  if (command == Command::Continue && cfg.potential.kind != "harmonic" && cfg.potential.kind != "quartic")
    throw ConfigError("continue: frequency continuation needs a harmonic or quartic potential");

  std::string current = "setup";
  try {
    if (command == Command::TransformTable) {
      current = "transform properties";
      run_transform_table(run);
      return run.finish();
    }
    const Grid grid = build_grid(cfg);
    const Problem problem = build_problem(cfg, grid);
    run.report()["grid"] = grid_json(grid);
    if (cfg.coarse_nodes > 0 && command != Command::Validate && command != Command::Spectrum &&
        command != Command::Probe)
      run.report()["coarse_grid"] = grid_json(grid.with_nodes(cfg.coarse_nodes));
    run.report()["problem"] = problem_json(problem);

    current = "validate";
    run_validate(run, problem, grid);
    if (command == Command::Validate || run.failed()) return run.finish();

    if (command == Command::Continue) {
      current = "continue";
      run_continue(run, problem, grid);
      return run.finish();
    }

    current = "spectrum";
    const SpectralSplit split = run_spectrum(run, problem, grid);
    switch (command) {
      case Command::Solve:
        current = "solve";
        run_solve(run, problem, grid, split);
        break;
      case Command::Multi:
        current = "multi";
        run_multi(run, problem, grid, split);
        break;
      case Command::Probe:
        current = "probe";
        run_probe(run, problem, grid, split);
        break;
      default:
        break;
    }
    return run.finish();
  } catch (const NumericError& e) {
    return run.abort(current, e.what());
  } catch (const DomainError& e) {
    return run.abort(current, e.what());
  }
}

std::string dry_run_plan(Command command, const RunConfig& cfg) {
  std::ostringstream out;
  out << "command: " << to_string(command) << "\n";
  if (command != Command::TransformTable) {
    const double r = resolve_radius(cfg);
    out << "grid: N = " << cfg.dimension << ", R = " << fmt(r) << (cfg.radius ? "" : " (auto)") << ", n = " << cfg.nodes;
    if (cfg.coarse_nodes > 0) out << ", coarse n = " << cfg.coarse_nodes;
    out << "\n";
  }
  out << "stages:\n";
  int k = 0;
  auto step = [&](const std::string& s) { out << "  " << ++k << ". " << s << "\n"; };
  std::vector<std::string> files{"report.json"};
  switch (command) {
    case Command::TransformTable:
      step("tabulate f, f', f'' at " + std::to_string(2 * cfg.table_count + 1) + " points");
      step("check transform inequalities at " + std::to_string(2 * cfg.property_samples) + " samples");
      files.push_back("transform.csv");
      break;
    case Command::Continue:
      step("validate hypotheses");
      step("for each omega in the list: spectrum, then mountain pass (l = 0) or local minimax (l >= 1)" +
           std::string(cfg.warm_start ? ", warm start within equal l" : ""));
      files.push_back("profile_<i>.csv");
      files.push_back("iters_<i>.csv");
      break;
    default:
      step("validate hypotheses");
      if (command == Command::Validate) break;
      step("spectrum: " + std::to_string(cfg.modes) + " eigenpairs with Richardson check");
      files.push_back("spectrum.csv");
      if (command == Command::Solve) {
        step("solve: " + (cfg.mode == "auto" ? std::string("mountain pass if l = 0, local minimax otherwise")
                                             : cfg.mode) +
             (cfg.coarse_nodes > 0 ? ", two-grid with Newton polish" : ""));
        files.push_back("profile.csv");
        files.push_back("iters.csv");
      } else if (command == Command::Multi) {
        step("multiplicity search for J = " + std::to_string(cfg.count) + " solutions");
        files.push_back("profile_<i>.csv");
        files.push_back("iters_<i>.csv");
      } else if (command == Command::Probe) {
        step("local-linking probe at epsilon = " + fmt(cfg.epsilon) + ", " + std::to_string(cfg.directions) +
             " directions");
        step("anti-coercivity and descent probes on " + std::to_string(cfg.probe_modes) + " modes");
      }
  }
  out << "outputs in " << cfg.output_dir << ":";
  for (const auto& f : files) out << " " << f;
  out << "\nresolved config:\n" << to_json(cfg).dump(2) << "\n";
  return out.str();
}

void write_artifacts(const RunResult& result, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + directory + "': " + ec.message());
  for (const auto& [name, contents] : result.artifacts) {
    std::ofstream out(fs::path(directory) / name, std::ios::binary);
    out << contents;
    if (!out) throw std::runtime_error("cannot write '" + name + "'");
  }
}

}  // namespace qsw
