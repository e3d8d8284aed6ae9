// qsw: command-line driver. Exit status 0 on success, 1 on numeric failure or
// an unmet stage (diagnostics.json is written), 2 on configuration errors
// (nothing is written).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsw/config.hpp"
#include "qsw/errors.hpp"
#include "qsw/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string output;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  bool quiet = false;
};

qsw::RunConfig resolve(const Options& o) {
  if (!o.config.empty() && !o.preset.empty()) throw qsw::ConfigError("give either --config or --preset, not both");
  if (o.config.empty() && o.preset.empty()) throw qsw::ConfigError("no configuration: use --config FILE or --preset NAME");
  nlohmann::json overrides = nlohmann::json::object();
  if (o.seed) overrides["seed"] = *o.seed;
  if (!o.output.empty()) overrides["output"] = {{"directory", o.output}};
  qsw::RunConfig cfg = o.config.empty() ? qsw::preset(o.preset) : qsw::load_config(o.config);
  return qsw::merge_config(std::move(cfg), overrides);
}

int execute(qsw::Command command, const Options& o) {
  try {
    const qsw::RunConfig cfg = resolve(o);
    if (o.dry_run) {
      std::cout << qsw::dry_run_plan(command, cfg);
      return 0;
    }
    const qsw::RunResult result = qsw::run(command, cfg);
    qsw::write_artifacts(result, cfg.output_dir);
    if (!o.quiet) {
      std::cout << result.summary;
      std::cout << "wrote";
      for (const auto& a : result.artifacts) std::cout << " " << a.first;
      std::cout << " to " << cfg.output_dir << "\n";
    }
    return result.exit_code;
  } catch (const qsw::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasilinear Schrodinger solver via the dual functional"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qsw, report schema ") + qsw::kSchemaVersion);

  Options opts;
  int status = 0;

  auto* presets = app.add_subcommand("presets", "List builtin presets");
  presets->callback([] {
    for (const auto& p : qsw::preset_names()) std::cout << p << "\n";
  });

  static const std::pair<qsw::Command, const char*> help[] = {
      {qsw::Command::Validate, "Check the hypotheses on V and g"},
      {qsw::Command::Spectrum, "Eigenpairs, l, eta and beta_i"},
      {qsw::Command::TransformTable, "Tabulate f, f', f'' and check its inequalities"},
      {qsw::Command::Solve, "Mountain pass (l = 0) or local minimax (l >= 1)"},
      {qsw::Command::Multi, "Multiplicity search for J distinct solutions"},
      {qsw::Command::Probe, "Local-linking, anti-coercivity and descent probes"},
      {qsw::Command::Continue, "Continuation in omega with automatic mode switching"}};
  for (const auto& [command, text] : help) {
    auto* sub = app.add_subcommand(qsw::to_string(command), text);
    sub->add_option("-c,--config", opts.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("-p,--preset", opts.preset, "Builtin preset");
    sub->add_option("-o,--output", opts.output, "Output directory (overrides the config)");
    sub->add_option("--seed", opts.seed, "Random seed (overrides the config)");
    sub->add_flag("--dry-run", opts.dry_run, "Print the resolved pipeline and exit");
    sub->add_flag("-q,--quiet", opts.quiet, "No stage summary on stdout");
    sub->callback([&status, &opts, command = command] { status = execute(command, opts); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return status;
}
