#ifndef QSW_CONFIG_HPP
#define QSW_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsw/grid.hpp"
#include "qsw/model.hpp"
#include "qsw/solver.hpp"

namespace qsw {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct PotentialSpec {
  std::string kind = "harmonic";  // harmonic | quartic | constant | table
  double omega = 0.0;
  double value = 0.0;             // constant
  std::vector<double> x, v;       // table
};

struct NonlinearitySpec {
  std::string kind = "power";
  double p = 6.0;
  std::optional<double> mu;  // required for every config
  double growth_constant = 1.0;
};

/// Fully resolved run configuration. Every field has a value after parsing;
/// `radius` stays empty when the truncation policy picks it.
struct RunConfig {
  std::string preset;  // name when built from a preset

  PotentialSpec potential;
  NonlinearitySpec nonlinearity;
  int dimension = 1;
  std::optional<double> shift;  // empty: choose_shift

  std::optional<double> radius;
  double boundary_level = 1e3;  // auto radius: V~ >= this on the boundary
  Index nodes = 4001;
  Index coarse_nodes = 0;
  Index modes = 12;

  std::string mode = "auto";  // auto | mountain-pass | local-linking
  SolveOptions solve;
  double epsilon = 1e-2;
  std::size_t directions = 200;
  std::vector<double> radii{20.0, 40.0, 80.0};
  Index probe_modes = 5;
  std::size_t ray_directions = 50;
  std::string ray_norm = "X";  // X | L2: normalisation of the anti-coercivity directions
  int count = 3;
  std::vector<double> omegas{0.0, 2.0, 3.0, 4.0};
  bool warm_start = true;

  double table_min = 1e-8;
  double table_max = 1e8;
  std::size_t table_count = 200;
  std::size_t property_samples = 10000;

  std::string output_dir = "qsw-out";
  bool write_csv = true;
  std::uint64_t seed = kDefaultSeed;
};

/// Parses and validates a JSON document; unknown keys and out-of-range values
/// raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies `doc` on top of `base` (used for preset overrides).
RunConfig merge_config(RunConfig base, const nlohmann::json& doc);

RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Resolved configuration as JSON (the form echoed into reports).
Json to_json(const RunConfig& cfg);

Potential build_potential(const PotentialSpec& spec);
Nonlinearity build_nonlinearity(const NonlinearitySpec& spec);

/// Truncation radius: the configured one, or the smallest R on a 1/8 lattice
/// with V~(boundary) >= boundary_level.
double resolve_radius(const RunConfig& cfg);

Grid build_grid(const RunConfig& cfg);
/// Problem with the shift resolved on `grid`.
Problem build_problem(const RunConfig& cfg, const Grid& grid);

}  // namespace qsw

#endif  // QSW_CONFIG_HPP
