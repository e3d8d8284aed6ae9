#include "qsw/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qsw {

namespace {

// nlohmann writes non-finite doubles as null; keep them readable instead.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

Json check_json(const HypothesisCheck& c) {
  Json j = {{"name", c.name}, {"passed", c.passed}, {"warning", c.warning}};
  j["worst"] = number(c.worst);
  j["worst_at"] = number(c.worst_at);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string profile_csv(const Grid& grid, const SolveReport& rep) {
  std::ostringstream out;
  out << "node,v,u\n";
  for (Index i = 0; i < grid.size(); ++i)
    out << format_number(grid.nodes()[i]) << ',' << format_number(rep.v[i]) << ',' << format_number(rep.u[i]) << '\n';
  return out.str();
}

std::string iterations_csv(const SolveReport& rep) {
  std::ostringstream out;
  out << "iter,phi,grad_norm,rho,stage\n";
  for (const auto& r : rep.log)
    out << r.iter << ',' << format_number(r.phi) << ',' << format_number(r.grad_norm) << ',' << format_number(r.rho)
        << ',' << r.stage << '\n';
  return out.str();
}

std::string spectrum_csv(const SpectralSplit& split, double shift) {
  std::ostringstream out;
  out << "i,lambda,beta\n";
  for (Index i = 0; i < split.count(); ++i)
    out << i + 1 << ',' << format_number(split.eigenvalues[i]) << ',' << format_number(beta(split, shift, i + 1))
        << '\n';
  return out.str();
}

std::string transform_csv(const TransformTable& tr, const std::vector<double>& ts) {
  std::ostringstream out;
  out << "t,f,f_prime,f_second\n";
  for (double t : ts) {
    const double u = tr.f(t);
    out << format_number(t) << ',' << format_number(u) << ',' << format_number(TransformTable::from_value_prime(u))
        << ',' << format_number(TransformTable::from_value_second(u)) << '\n';
  }
  return out.str();
}

Json grid_json(const Grid& grid) {
  return {{"dimension", grid.dimension()},
          {"radial", grid.is_radial()},
          {"lower", grid.lower()},
          {"upper", grid.upper()},
          {"R", grid.radius()},
          {"n", grid.size()},
          {"h", grid.spacing()},
          {"active_nodes", grid.active_size()},
          {"truncation", grid.is_radial() ? "Dirichlet at r = R, symmetric at r = 0" : "Dirichlet at x = +-R"}};
}

Json problem_json(const Problem& problem) {
  Json j = {{"potential", problem.potential.name()}};
  if (problem.potential.kind() == PotentialKind::Harmonic || problem.potential.kind() == PotentialKind::Quartic)
    j["omega"] = problem.potential.omega();
  j["declared_inf"] = number(problem.potential.declared_inf());
  j["nonlinearity"] = problem.nonlinearity.name();
  j["p"] = problem.nonlinearity.p();
  j["mu"] = problem.nonlinearity.mu();
  j["C"] = problem.nonlinearity.growth_constant();
  j["odd"] = problem.nonlinearity.odd();
  j["dimension"] = problem.dimension;
  j["shift"] = problem.shift;
  return j;
}

Json validation_json(const ValidationReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(check_json(c));
  return {{"passed", rep.passed()}, {"vtilde_min", rep.vtilde_min}, {"checks", checks}};
}

Json property_json(const PropertyReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json j = {{"name", c.name}, {"applicable", c.applicable}, {"passed", c.passed}, {"samples", c.samples}};
    j["worst_slack"] = number(c.worst_slack);
    j["worst_at"] = number(c.worst_at);
    checks.push_back(j);
  }
  Json j = {{"passed", rep.all_passed()}, {"checks", checks}};
  if (rep.kappa_reported != 0.0) {
    j["kappa"] = rep.kappa_reported;
    j["kappa_hat"] = number(rep.kappa_hat);
    j["lambda"] = rep.lambda;
    j["C_lambda"] = rep.c_lambda;
    j["C_lambda_hat"] = number(rep.c_lambda_hat);
  }
  return j;
}

Json spectrum_json(const SpectralSplit& split, double shift) {
  Json j;
  j["l"] = split.negative_count;
  j["degenerate"] = split.is_degenerate();
  j["degenerate_indices"] = Json::array();
  for (Index i : split.degenerate) j["degenerate_indices"].push_back(i + 1);
  j["delta"] = split.gap;
  j["eta"] = split.is_degenerate() ? Json(nullptr) : Json(coercivity_eta(split, shift));
  j["degeneracy_tol"] = split.degeneracy_tol;
  j["eigenvalues"] = Json::array();
  j["beta"] = Json::array();
  for (Index i = 0; i < split.count(); ++i) {
    j["eigenvalues"].push_back(split.eigenvalues[i]);
    j["beta"].push_back(beta(split, shift, i + 1));
  }
  if (split.extrapolated.size() > 0) {
    j["extrapolated"] = Json::array();
    j["discretization_error"] = Json::array();
    for (Index i = 0; i < split.count(); ++i) {
      j["extrapolated"].push_back(split.extrapolated[i]);
      j["discretization_error"].push_back(split.discretization_error[i]);
    }
  }
  j["max_residual"] = split.max_residual;
  j["orthogonality_error"] = split.orthogonality_error;
  j["method"] = split.method == EigenMethod::Dense ? "dense" : "tridiagonal bisection + inverse iteration";
  return j;
}

Json solve_json(const SolveReport& rep) {
  Json j;
  j["mode"] = to_string(rep.mode);
  j["converged"] = rep.converged;
  j["trivial"] = rep.trivial;
  j["status"] = rep.status;
  j["phi"] = number(rep.phi);
  j["energy_J"] = number(rep.energy_J);
  j["energy_identity_error"] = number(std::abs(rep.phi - rep.energy_J) / std::max(1.0, std::abs(rep.phi)));
  j["grad_norm"] = number(rep.grad_norm);
  j["pde_residual"] = number(rep.pde_residual);
  j["morse_index_approx"] = rep.morse_index;
  j["sign_changes"] = rep.sign_changes;
  if (rep.level > 0) j["level"] = rep.level;
  j["outer_iterations"] = rep.outer_iterations;
  j["newton_iterations"] = rep.newton_iterations;
  j["rho_floor"] = number(rep.rho_floor);
  j["log_length"] = rep.log.size();
  if (rep.v.size() > 0) {
    j["v_max"] = rep.v.cwiseAbs().maxCoeff();
    j["u_max"] = rep.u.cwiseAbs().maxCoeff();
  }
  return j;
}

Json multiplicity_json(const MultiplicityReport& rep) {
  Json j;
  j["requested_complete"] = rep.complete;
  j["eta"] = rep.eta;
  j["C1"] = rep.growth.c1;
  j["C2"] = rep.growth.c2;
  j["k"] = rep.k;
  j["eta_minus_C1_beta_k2"] = rep.lambda_k;
  j["levels"] = Json::array();
  for (const auto& l : rep.levels)
    j["levels"].push_back({{"level", l.level},
                           {"converged", l.converged},
                           {"distinct", l.distinct},
                           {"support", l.support},
                           {"status", l.status}});
  j["solutions"] = Json::array();
  for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
    Json s = solve_json(rep.solutions[i]);
    s["negative_grad_norm"] = i < rep.negative_grad_norms.size() ? number(rep.negative_grad_norms[i]) : Json(nullptr);
    j["solutions"].push_back(s);
  }
  return j;
}

Json continuation_json(const std::vector<ContinuationPoint>& points) {
  Json arr = Json::array();
  for (const auto& p : points) {
    Json j = {{"omega", p.omega},
              {"l", p.negative_count},
              {"degenerate", p.degenerate},
              {"mode", to_string(p.mode)},
              {"shift", p.shift},
              {"warm_started", p.warm_started},
              {"solved", p.solved}};
    j["report"] = solve_json(p.report);
    arr.push_back(j);
  }
  return arr;
}

Json probe_json(const LocalLinkingProbe& ll) {
  return {{"verdict", to_string(ll.verdict)}, {"epsilon", ll.epsilon},       {"directions", ll.directions},
          {"minus_max", number(ll.minus_max)}, {"plus_min", number(ll.plus_min)}};
}

Json probe_json(const AntiCoercivityProbe& ac) {
  std::size_t negative = 0, decreasing = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : ac.rays) {
    negative += r.negative_at_max ? 1 : 0;
    decreasing += r.decreasing_tail ? 1 : 0;
    worst = std::max(worst, r.values.back());
  }
  return {{"verdict", to_string(ac.verdict)},      {"radii", ac.radii},
          {"directions", ac.rays.size()},          {"negative_at_max_radius", negative},
          {"negative_at_every_radius", ac.all_negative},
          {"decreasing_tail", decreasing},         {"max_phi_at_max_radius", number(worst)}};
}

Json probe_json(const DescentProbe& dp) {
  return {{"verdict", to_string(dp.verdict)},
          {"threshold_A", dp.threshold},
          {"tested", dp.tested},
          {"failures", dp.failures},
          {"worst_derivative", number(dp.worst_derivative)}};
}

}  // namespace qsw
