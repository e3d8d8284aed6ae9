#include "qsw/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <type_traits>

#include "qsw/errors.hpp"

namespace qsw {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
bool read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && !v.is_number_unsigned()))
      throw ConfigError(where + "." + key + (std::is_unsigned_v<T> ? ": expected a non-negative integer"
                                                                      : ": expected an integer"));
  }
  try {
    out = v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
  return true;
}

bool read_index(const json& obj, const char* key, Index& out, const std::string& where) {
  long long v = 0;
  if (!read(obj, key, v, where)) return false;
  out = static_cast<Index>(v);
  return true;
}

// Number or the string "auto".
bool read_auto(const json& obj, const char* key, std::optional<double>& out, const std::string& where) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") {
    out.reset();
  } else if (v.is_number()) {
    out = v.get<double>();
  } else {
    throw ConfigError(where + "." + key + ": expected a number or \"auto\"");
  }
  return true;
}

void apply_problem(RunConfig& cfg, const json& doc) {
  reject_unknown(doc, {"potential", "nonlinearity", "dimension", "shift"}, "problem");
  if (doc.contains("potential")) {
    const json& p = doc.at("potential");
    reject_unknown(p, {"kind", "omega", "value", "x", "v"}, "problem.potential");
    read(p, "kind", cfg.potential.kind, "problem.potential");
    read(p, "omega", cfg.potential.omega, "problem.potential");
    read(p, "value", cfg.potential.value, "problem.potential");
    read(p, "x", cfg.potential.x, "problem.potential");
    read(p, "v", cfg.potential.v, "problem.potential");
  }
  if (doc.contains("nonlinearity")) {
    const json& n = doc.at("nonlinearity");
    reject_unknown(n, {"kind", "p", "mu", "C"}, "problem.nonlinearity");
    read(n, "kind", cfg.nonlinearity.kind, "problem.nonlinearity");
    read(n, "p", cfg.nonlinearity.p, "problem.nonlinearity");
    double mu = 0.0;
    if (read(n, "mu", mu, "problem.nonlinearity")) cfg.nonlinearity.mu = mu;
    read(n, "C", cfg.nonlinearity.growth_constant, "problem.nonlinearity");
  }
  read(doc, "dimension", cfg.dimension, "problem");
  read_auto(doc, "shift", cfg.shift, "problem");
}

void apply_grid(RunConfig& cfg, const json& doc) {
  reject_unknown(doc, {"R", "boundary_level", "n", "coarse_n", "modes"}, "grid");
  read_auto(doc, "R", cfg.radius, "grid");
  read(doc, "boundary_level", cfg.boundary_level, "grid");
  read_index(doc, "n", cfg.nodes, "grid");
  read_index(doc, "coarse_n", cfg.coarse_nodes, "grid");
  read_index(doc, "modes", cfg.modes, "grid");
}

void apply_solver(RunConfig& cfg, const json& doc) {
  reject_unknown(doc,
                 {"mode", "grad_tol", "res_tol", "basin_tol", "trivial_tol", "max_outer", "stall_window", "max_newton",
                  "max_minres", "path_points", "max_path_points", "dist_tol", "energy_sep", "extra_levels",
                  "cerami_growth", "epsilon", "directions", "radii", "probe_modes", "ray_directions", "ray_norm", "J",
                  "omega_list", "warm_start"},
                 "solver");
  SolveOptions& s = cfg.solve;
  read(doc, "mode", cfg.mode, "solver");
  read(doc, "grad_tol", s.grad_tol, "solver");
  read(doc, "res_tol", s.res_tol, "solver");
  read(doc, "basin_tol", s.basin_tol, "solver");
  read(doc, "trivial_tol", s.trivial_tol, "solver");
  read(doc, "max_outer", s.max_outer, "solver");
  read(doc, "stall_window", s.stall_window, "solver");
  read(doc, "max_newton", s.max_newton, "solver");
  read(doc, "max_minres", s.max_minres, "solver");
  read(doc, "path_points", s.path_points, "solver");
  read(doc, "max_path_points", s.max_path_points, "solver");
  read(doc, "dist_tol", s.dist_tol, "solver");
  read(doc, "energy_sep", s.energy_sep, "solver");
  read(doc, "extra_levels", s.extra_levels, "solver");
  read(doc, "cerami_growth", s.cerami_growth, "solver");
  read(doc, "epsilon", cfg.epsilon, "solver");
  read(doc, "directions", cfg.directions, "solver");
  read(doc, "radii", cfg.radii, "solver");
  read_index(doc, "probe_modes", cfg.probe_modes, "solver");
  read(doc, "ray_directions", cfg.ray_directions, "solver");
  read(doc, "ray_norm", cfg.ray_norm, "solver");
  read(doc, "J", cfg.count, "solver");
  read(doc, "omega_list", cfg.omegas, "solver");
  read(doc, "warm_start", cfg.warm_start, "solver");
}

void apply_transform(RunConfig& cfg, const json& doc) {
  reject_unknown(doc, {"t_min", "t_max", "count", "property_samples"}, "transform");
  read(doc, "t_min", cfg.table_min, "transform");
  read(doc, "t_max", cfg.table_max, "transform");
  read(doc, "count", cfg.table_count, "transform");
  read(doc, "property_samples", cfg.property_samples, "transform");
}

void apply_output(RunConfig& cfg, const json& doc) {
  reject_unknown(doc, {"directory", "csv"}, "output");
  read(doc, "directory", cfg.output_dir, "output");
  read(doc, "csv", cfg.write_csv, "output");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void check(const RunConfig& cfg) {
  const auto& pot = cfg.potential;
  require(pot.kind == "harmonic" || pot.kind == "quartic" || pot.kind == "constant" || pot.kind == "table",
          "problem.potential.kind must be harmonic, quartic, constant or table");
  require(std::isfinite(pot.omega) && std::isfinite(pot.value), "problem.potential: parameters must be finite");
  if (pot.kind == "table")
    require(pot.x.size() >= 2 && pot.x.size() == pot.v.size(), "problem.potential: table needs matching x and v");

  const auto& nl = cfg.nonlinearity;
  require(nl.kind == "power", "problem.nonlinearity.kind must be power");
  require(nl.mu.has_value(), "problem.nonlinearity.mu is required");
  require(std::isfinite(*nl.mu), "problem.nonlinearity.mu must be finite");
  require(std::isfinite(nl.p) && nl.p > 2.0, "problem.nonlinearity.p must exceed 2");
  require(positive(nl.growth_constant), "problem.nonlinearity.C must be positive");

  require(cfg.dimension >= 1 && cfg.dimension <= 3, "problem.dimension must be 1, 2 or 3");
  if (cfg.shift) require(std::isfinite(*cfg.shift) && *cfg.shift >= 0.0, "problem.shift must be >= 0");

  if (cfg.radius) require(positive(*cfg.radius), "grid.R must be positive");
  require(positive(cfg.boundary_level), "grid.boundary_level must be positive");
  require(cfg.nodes >= 64, "grid.n must be at least 64");
  require(cfg.coarse_nodes == 0 || (cfg.coarse_nodes >= 64 && cfg.coarse_nodes < cfg.nodes),
          "grid.coarse_n must be 0 or in [64, n)");
  require(cfg.modes >= 1 && cfg.modes < cfg.nodes / 2, "grid.modes must be in [1, n/2)");

  require(cfg.mode == "auto" || cfg.mode == "mountain-pass" || cfg.mode == "local-linking",
          "solver.mode must be auto, mountain-pass or local-linking");
  const SolveOptions& s = cfg.solve;
  require(positive(s.grad_tol), "solver.grad_tol must be positive");
  require(positive(s.res_tol), "solver.res_tol must be positive");
  require(positive(s.basin_tol) && positive(s.trivial_tol), "solver.basin_tol and trivial_tol must be positive");
  require(s.max_outer >= 1 && s.max_newton >= 1 && s.max_minres >= 1, "solver: iteration caps must be positive");
  require(s.stall_window >= 1, "solver.stall_window must be positive");
  require(s.path_points >= 3 && s.max_path_points >= s.path_points, "solver: path sizes out of range");
  require(positive(s.dist_tol) && positive(s.energy_sep) && positive(s.cerami_growth),
          "solver: separation thresholds must be positive");
  require(s.extra_levels >= 0, "solver.extra_levels must be >= 0");
  require(positive(cfg.epsilon), "solver.epsilon must be positive");
  require(cfg.directions >= 1 && cfg.ray_directions >= 1, "solver: direction counts must be positive");
  require(!cfg.radii.empty(), "solver.radii must not be empty");
  for (std::size_t i = 0; i < cfg.radii.size(); ++i)
    require(positive(cfg.radii[i]) && (i == 0 || cfg.radii[i] > cfg.radii[i - 1]),
            "solver.radii must be positive and increasing");
  require(cfg.ray_norm == "X" || cfg.ray_norm == "L2", "solver.ray_norm must be X or L2");
  require(cfg.probe_modes >= 1 && cfg.probe_modes <= cfg.modes, "solver.probe_modes must be in [1, grid.modes]");
  require(cfg.count >= 1, "solver.J must be positive");
  require(!cfg.omegas.empty(), "solver.omega_list must not be empty");
  for (std::size_t i = 0; i < cfg.omegas.size(); ++i)
    require(std::isfinite(cfg.omegas[i]) && (i == 0 || cfg.omegas[i] > cfg.omegas[i - 1]),
            "solver.omega_list must be increasing");

  require(positive(cfg.table_min) && cfg.table_max > cfg.table_min && std::isfinite(cfg.table_max),
          "transform: need 0 < t_min < t_max");
  require(cfg.table_count >= 2 && cfg.property_samples >= 2, "transform: sample counts must be >= 2");
  require(!cfg.output_dir.empty(), "output.directory must not be empty");
}

RunConfig oscillator(double omega) {
  RunConfig cfg;
  cfg.potential.kind = "harmonic";
  cfg.potential.omega = omega;
  cfg.nonlinearity.p = 6.0;
  cfg.nonlinearity.mu = 6.0;
  cfg.dimension = 1;
  cfg.radius = 6.0;
  cfg.nodes = 64001;
  cfg.coarse_nodes = 4001;
  cfg.modes = 12;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() { return {"oscillator-indefinite", "oscillator-definite"}; }

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  if (name == "oscillator-indefinite") {
    cfg = oscillator(4.0);  // V = x^2 - 4, two negative eigenvalues
  } else if (name == "oscillator-definite") {
    cfg = oscillator(-1.0);  // V = x^2 + 1
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.preset = name;
  return cfg;
}

RunConfig merge_config(RunConfig cfg, const json& doc) {
  reject_unknown(doc, {"preset", "seed", "problem", "grid", "solver", "transform", "output"}, "config");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("problem")) apply_problem(cfg, doc.at("problem"));
  if (doc.contains("grid")) apply_grid(cfg, doc.at("grid"));
  if (doc.contains("solver")) apply_solver(cfg, doc.at("solver"));
  if (doc.contains("transform")) apply_transform(cfg, doc.at("transform"));
  if (doc.contains("output")) apply_output(cfg, doc.at("output"));
  cfg.solve.seed = cfg.seed;
  cfg.solve.coarse_nodes = cfg.coarse_nodes;
  check(cfg);
  return cfg;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig base;
  if (doc.contains("preset")) {
    if (!doc.at("preset").is_string()) throw ConfigError("config.preset: expected a string");
    base = preset(doc.at("preset").get<std::string>());
  }
  return merge_config(std::move(base), doc);
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Json to_json(const RunConfig& cfg) {
  auto maybe = [](const std::optional<double>& x) { return x ? Json(*x) : Json("auto"); };
  Json pot = {{"kind", cfg.potential.kind}};
  if (cfg.potential.kind == "harmonic" || cfg.potential.kind == "quartic") pot["omega"] = cfg.potential.omega;
  if (cfg.potential.kind == "constant") pot["value"] = cfg.potential.value;
  if (cfg.potential.kind == "table") {
    pot["x"] = cfg.potential.x;
    pot["v"] = cfg.potential.v;
  }
  Json nl = {{"kind", cfg.nonlinearity.kind}, {"p", cfg.nonlinearity.p}};
  nl["mu"] = cfg.nonlinearity.mu ? Json(*cfg.nonlinearity.mu) : Json(nullptr);
  nl["C"] = cfg.nonlinearity.growth_constant;
  const SolveOptions& s = cfg.solve;
  Json out;
  if (!cfg.preset.empty()) out["preset"] = cfg.preset;
  out["seed"] = cfg.seed;
  out["problem"] = {{"potential", pot}, {"nonlinearity", nl}, {"dimension", cfg.dimension}, {"shift", maybe(cfg.shift)}};
  out["grid"] = {{"R", maybe(cfg.radius)},
                 {"boundary_level", cfg.boundary_level},
                 {"n", cfg.nodes},
                 {"coarse_n", cfg.coarse_nodes},
                 {"modes", cfg.modes}};
  out["solver"] = {{"mode", cfg.mode},
                   {"grad_tol", s.grad_tol},
                   {"res_tol", s.res_tol},
                   {"basin_tol", s.basin_tol},
                   {"trivial_tol", s.trivial_tol},
                   {"max_outer", s.max_outer},
                   {"stall_window", s.stall_window},
                   {"max_newton", s.max_newton},
                   {"max_minres", s.max_minres},
                   {"path_points", s.path_points},
                   {"max_path_points", s.max_path_points},
                   {"dist_tol", s.dist_tol},
                   {"energy_sep", s.energy_sep},
                   {"extra_levels", s.extra_levels},
                   {"cerami_growth", s.cerami_growth},
                   {"epsilon", cfg.epsilon},
                   {"directions", cfg.directions},
                   {"radii", cfg.radii},
                   {"probe_modes", cfg.probe_modes},
                   {"ray_directions", cfg.ray_directions},
                   {"ray_norm", cfg.ray_norm},
                   {"J", cfg.count},
                   {"omega_list", cfg.omegas},
                   {"warm_start", cfg.warm_start}};
  out["transform"] = {{"t_min", cfg.table_min},
                      {"t_max", cfg.table_max},
                      {"count", cfg.table_count},
                      {"property_samples", cfg.property_samples}};
  out["output"] = {{"directory", cfg.output_dir}, {"csv", cfg.write_csv}};
  return out;
}

Potential build_potential(const PotentialSpec& spec) {
  if (spec.kind == "harmonic") return Potential::harmonic(spec.omega);
  if (spec.kind == "quartic") return Potential::quartic(spec.omega);
  if (spec.kind == "constant") return Potential::constant(spec.value);
  if (spec.kind == "table") return Potential::table(spec.x, spec.v);
  throw ConfigError("unknown potential kind '" + spec.kind + "'");
}

Nonlinearity build_nonlinearity(const NonlinearitySpec& spec) {
  if (spec.kind != "power") throw ConfigError("unknown nonlinearity kind '" + spec.kind + "'");
  if (!spec.mu) throw ConfigError("problem.nonlinearity.mu is required");
  return Nonlinearity::power(spec.p, *spec.mu, spec.growth_constant);
}

double resolve_radius(const RunConfig& cfg) {
  if (cfg.radius) return *cfg.radius;
  const Potential pot = build_potential(cfg.potential);
  // The grid-dependent shift is not known yet; bound it through declared_inf.
  const double m = cfg.shift ? *cfg.shift : std::max(0.0, 2.0 - pot.declared_inf());
  const bool two_sided = cfg.dimension == 1;
  for (int k = 1; k <= 80000; ++k) {
    const double r = k / 8.0;
    double edge = pot(r);
    if (two_sided) edge = std::min(edge, pot(-r));
    if (edge + m >= cfg.boundary_level) return r;
  }
  throw ConfigError("grid.R: the potential never reaches grid.boundary_level; set R explicitly");
}

Grid build_grid(const RunConfig& cfg) { return Grid::make(cfg.dimension, resolve_radius(cfg), cfg.nodes); }

Problem build_problem(const RunConfig& cfg, const Grid& grid) {
  Problem problem{build_potential(cfg.potential), build_nonlinearity(cfg.nonlinearity), cfg.dimension, 0.0};
  problem.shift = cfg.shift ? *cfg.shift : choose_shift(problem.potential, grid);
  return problem;
}

}  // namespace qsw
