#ifndef QSW_PIPELINE_HPP
#define QSW_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "qsw/config.hpp"

namespace qsw {

enum class Command { Validate, Spectrum, TransformTable, Solve, Multi, Probe, Continue };

const char* to_string(Command c);
/// Throws ConfigError on an unknown name.
Command parse_command(const std::string& name);
std::vector<std::string> command_names();

/// Artifacts are kept in memory until the run has finished, so a config error
/// never leaves a partial output directory behind.
struct RunResult {
  int exit_code = 0;  // 0 success, 1 numeric failure or unmet stage
  std::map<std::string, std::string> artifacts;  // file name -> contents
  std::string summary;                           // one line per stage, for stdout
};

/// validate -> spectrum -> the command's stage. ConfigError propagates;
/// NumericError is turned into exit code 1 with diagnostics.json.
RunResult run(Command command, const RunConfig& cfg);

/// Stages `run` would execute, with the resolved configuration.
std::string dry_run_plan(Command command, const RunConfig& cfg);

/// Creates the directory and writes every artifact.
void write_artifacts(const RunResult& result, const std::string& directory);

}  // namespace qsw

#endif  // QSW_PIPELINE_HPP
