#include "qsw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qsw/errors.hpp"
#include "qsw/krylov.hpp"

namespace qsw {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::MountainPass:
      return "mountain-pass";
    case SolveMode::LocalLinking:
      return "local-linking";
    case SolveMode::Multiplicity:
      return "multiplicity";
    default:
      return "refine";
  }
}

int count_sign_changes(const Field& u) {
  const double cut = 1e-8 * u.cwiseAbs().maxCoeff();
  int changes = 0;
  int last = 0;
  for (Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) <= cut) continue;
    const int s = u[i] > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace {

// Iterate log with the rho (Cerami boundedness) diagnostics.
class Tracker {
 public:
  Tracker(const Energy& energy, std::vector<IterationRecord>& log, double growth)
      : energy_(energy), log_(log), growth_(growth) {}

  void record(int iter, const std::string& stage, const Field& v, double gn) {
    const EnergyBreakdown e = energy_.breakdown(v);
    log_.push_back({iter, e.total, gn, e.rho, stage});
    const double vn2 = energy_.x_inner(v, v);
    if (vn2 > 0.0) floor_ = std::min(floor_, e.rho * e.rho / vn2);
    if (rho0_ < 0.0) {
      rho0_ = e.rho;
      gn0_ = gn;
    } else if (rho0_ > 0.0 && e.rho > growth_ * rho0_ && gn >= gn0_) {
      unbounded_ = true;
    }
  }

  bool unbounded() const { return unbounded_; }
  double floor() const { return std::isfinite(floor_) ? floor_ : 0.0; }

 private:
  const Energy& energy_;
  std::vector<IterationRecord>& log_;
  double growth_;
  double rho0_ = -1.0;
  double gn0_ = 0.0;
  double floor_ = std::numeric_limits<double>::infinity();
  bool unbounded_ = false;
};

struct NewtonOutcome {
  Field v;
  bool converged = false;
  int iterations = 0;
  std::string status;
};

NewtonOutcome newton_core(const Energy& energy, Field v, const SolveOptions& opts, Tracker& tracker) {
  const Grid& grid = energy.grid();
  const SpdTridiagonalSolver precond_solver(energy.x_matrix());
  const LinearMap precond = [&](const VectorXd& r) { return precond_solver.solve(r); };
  NewtonOutcome out;
  for (int it = 0; it <= opts.max_newton; ++it) {
    const Field d = energy.dual_gradient(v);
    const double gn = energy.dual_norm(d);
    tracker.record(it, "newton", v, gn);
    out.iterations = it;
    if (gn <= opts.grad_tol) {
      out.converged = true;
      out.status = "converged";
      break;
    }
    if (it == opts.max_newton) {
      out.status = "newton iteration cap reached";
      break;
    }
    const SymTridiagonal hess = energy.hessian_tridiagonal(v);
    const LinearMap op = [&](const VectorXd& x) { return hess.apply(x); };
    const double forcing = std::clamp(gn, 1e-12, 1e-2);
    const MinresResult lin = minres(op, precond, -VectorXd(grid.active(d)), forcing, opts.max_minres);
    Field step = grid.extend(lin.x);
    bool fallback = false;
    if (!lin.converged && lin.residual > 0.5) {
      step = -energy.riesz(d);
      fallback = true;
    }
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 20; ++bt) {
      const Field trial = v + alpha * step;
      const double gt = energy.gradient_norm(trial);
      if (gt < (1.0 - 1e-4 * alpha) * gn) {
        v = trial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.status = fallback ? "newton stagnated (linear solver and gradient fallback)" : "newton line search failed";
      break;
    }
  }
  out.v = std::move(v);
  return out;
}

// Largest root of d/dt Phi(t w) on t > 0, i.e. the ray maximiser.
double ray_maximum(const Energy& energy, const Field& w) {
  auto slope = [&](double t) { return energy.pairing(Field(t * w), w); };
  double hi = 1.0;
  int guard = 0;
  while (slope(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 80) throw NumericError("ray maximisation: Phi does not decrease along the ray");
  }
  double lo = hi / 2.0;
  while (lo > 1e-12 && slope(lo) <= 0.0) lo /= 2.0;
  double flo = slope(lo);
  double fhi = slope(hi);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    // Illinois-modified regula falsi.
    double mid = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double fm = slope(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
      fhi *= 0.5;
    } else {
      hi = mid;
      fhi = fm;
      flo *= 0.5;
    }
  }
  return 0.5 * (lo + hi);
}

struct InnerResult {
  VectorXd z;
  Field v;
  double value = 0.0;
  double residual = 0.0;
  bool ok = true;
};

// Maximises Phi over span{columns of `cols`} (X-orthonormal) starting at z.
InnerResult maximize_on_span(const Energy& energy, const MatrixXd& cols, VectorXd z, double tol, int max_it = 80) {
  InnerResult res;
  const Index q = cols.cols();
  const Grid& grid = energy.grid();
  const MatrixXd active = cols.middleRows(grid.first_active(), grid.active_size());
  Field v = cols * z;
  double val = energy.value(v);
  for (int it = 0; it < max_it; ++it) {
    const Field d = energy.dual_gradient(v);
    const VectorXd r = cols.transpose() * d;
    res.residual = r.norm();
    if (res.residual <= tol) break;
    const SymTridiagonal hess = energy.hessian_tridiagonal(v);
    MatrixXd h(q, q);
    for (Index i = 0; i < q; ++i) h.col(i) = active.transpose() * hess.apply(active.col(i));
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    const VectorXd theta = es.eigenvalues().cwiseAbs();
    const double floor = std::max(1e-10, 1e-8 * theta.maxCoeff());
    const VectorXd coeff = (es.eigenvectors().transpose() * r).cwiseQuotient(theta.cwiseMax(floor));
    const VectorXd delta = es.eigenvectors() * coeff;
    const double slope = r.dot(delta);
    // Once the predicted gain is at rounding level the values cannot arbitrate;
    // take the full modified-Newton step.
    const bool rounding = slope <= 1e-13 * std::max(1.0, std::abs(val));
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      const VectorXd zt = z + alpha * delta;
      const Field vt = cols * zt;
      const double valt = energy.value(vt);
      if (rounding || valt >= val + 1e-4 * alpha * slope) {
        z = zt;
        v = vt;
        val = valt;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
    if (!(z.norm() < 1e8)) throw NumericError("inner maximisation appears unbounded on the finite-dimensional subspace");
  }
  res.z = std::move(z);
  res.v = std::move(v);
  res.value = val;
  return res;
}

MatrixXd stack(const MatrixXd& basis, const Field& w) {
  MatrixXd cols(w.size(), basis.cols() + 1);
  cols.leftCols(basis.cols()) = basis;
  cols.col(basis.cols()) = w;
  return cols;
}

// Removes the components along the X-orthonormal columns.
void x_orthogonalize(const Energy& energy, const MatrixXd& cols, Field& f) {
  for (int pass = 0; pass < 2; ++pass)
    for (Index i = 0; i < cols.cols(); ++i) f -= energy.x_inner(cols.col(i), f) * cols.col(i);
}

struct MinimaxOutcome {
  Field v;
  bool ok = false;
  int iterations = 0;
  std::string status;
};

// Local minimax over basis (+) span{w}: inner maximisation, outer descent of w.
MinimaxOutcome local_minimax(const Energy& energy, const MatrixXd& basis, Field w, const VectorXd* warm_coeff,
                             const SolveOptions& opts, Tracker& tracker, int iter_offset = 0) {
  MinimaxOutcome out;
  const Index q = basis.cols();
  x_orthogonalize(energy, basis, w);
  w /= energy.x_norm(w);

  VectorXd z(q + 1);
  if (warm_coeff != nullptr) {
    z = *warm_coeff;
  } else {
    z.setZero();
    z[q] = ray_maximum(energy, w);
  }
  double gprev = 1e-3;
  InnerResult inner = maximize_on_span(energy, stack(basis, w), z, std::max(1e-13, 1e-3 * gprev));
  double step = -1.0;
  double mark = inner.value;
  for (int it = 0; it < opts.max_outer; ++it) {
    const Field& v = inner.v;
    const Field d = energy.dual_gradient(v);
    const double gn = energy.dual_norm(d);
    tracker.record(iter_offset + it, "minimax", v, gn);
    out.iterations = it;
    if (tracker.unbounded()) {
      out.status = "suspected unbounded Cerami path";
      out.v = v;
      return out;
    }
    const double t = inner.z[q];
    if (energy.x_norm(v) < opts.trivial_tol || std::abs(t) < opts.trivial_tol) {
      out.status = "collapsed to trivial";
      out.v = v;
      return out;
    }
    if (gn <= opts.basin_tol) {
      out.ok = true;
      out.status = "basin reached";
      out.v = v;
      return out;
    }
    if (opts.stall_window > 0 && it > 0 && it % opts.stall_window == 0) {
      if (mark - inner.value <= 1e-10 * std::max(1.0, std::abs(mark))) {
        out.status = "minimax stalled";
        out.v = v;
        return out;
      }
      mark = inner.value;
    }
    gprev = gn;
    Field g = energy.riesz(d);
    x_orthogonalize(energy, stack(basis, w), g);
    const double gperp = energy.x_norm(g);
    if (step < 0.0) step = 0.1 / std::max(gperp, 1e-300);
    const double sgn = t > 0.0 ? 1.0 : -1.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      Field wt = w - step * sgn * g;
      wt /= energy.x_norm(wt);
      VectorXd zt = inner.z;
      InnerResult trial = maximize_on_span(energy, stack(basis, wt), zt, std::max(1e-13, 1e-3 * gprev));
      if (trial.value <= inner.value - 0.25 * std::abs(t) * step * gperp * gperp) {
        w = std::move(wt);
        inner = std::move(trial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.status = "minimax step size underflow";
      out.v = inner.v;
      return out;
    }
    step = std::min(step * 2.0, 0.5 / std::max(gperp, 1e-300));
  }
  out.status = "minimax iteration cap reached";
  out.v = inner.v;
  return out;
}

SolveReport finish(const Energy& energy, const Field& v, SolveMode mode, const SolveOptions& opts,
                   std::vector<IterationRecord> log, const Tracker& tracker, int outer, int newton,
                   const std::string& status) {
  SolveReport rep = make_report(energy, v, mode, opts);
  rep.log = std::move(log);
  rep.outer_iterations = outer;
  rep.newton_iterations = newton;
  rep.rho_floor = tracker.floor();
  if (!status.empty() && rep.grad_norm > opts.grad_tol && !rep.trivial) rep.status = status;
  return rep;
}

// Minimax followed by Newton; retries the minimax with a tighter basin once
// if Newton fails.
SolveReport minimax_then_newton(const Energy& energy, const MatrixXd& basis, const Field& w0,
                                const VectorXd* warm_coeff, SolveMode mode, const SolveOptions& opts) {
  std::vector<IterationRecord> log;
  Tracker tracker(energy, log, opts.cerami_growth);
  SolveOptions local = opts;
  MinimaxOutcome mm = local_minimax(energy, basis, w0, warm_coeff, local, tracker);
  int outer = mm.iterations;
  if (!mm.ok) return finish(energy, mm.v, mode, opts, std::move(log), tracker, outer, 0, mm.status);
  NewtonOutcome nt = newton_core(energy, mm.v, opts, tracker);
  int newton = nt.iterations;
  if (!nt.converged) {
    local.basin_tol = opts.basin_tol * 1e-2;
    mm = local_minimax(energy, basis, w0, warm_coeff, local, tracker, outer + 1);
    outer += mm.iterations;
    if (!mm.ok) return finish(energy, mm.v, mode, opts, std::move(log), tracker, outer, newton, mm.status);
    nt = newton_core(energy, mm.v, opts, tracker);
    newton += nt.iterations;
  }
  return finish(energy, nt.v, mode, opts, std::move(log), tracker, outer, newton, nt.status);
}

MatrixXd x_normalized_modes(const Energy& energy, const SpectralSplit& split, Index count) {
  MatrixXd b(energy.grid().size(), count);
  for (Index i = 0; i < count; ++i) {
    b.col(i) = split.modes.col(i);
    b.col(i) /= energy.x_norm(b.col(i));
  }
  return b;
}

}  // namespace

SolveReport make_report(const Energy& energy, const Field& v, SolveMode mode, const SolveOptions& opts) {
  SolveReport rep;
  rep.mode = mode;
  rep.v = v;
  rep.u = energy.to_u(v);
  rep.phi = energy.value(v);
  rep.energy_J = energy.energy_J(rep.u);
  rep.grad_norm = energy.gradient_norm(v);
  const ResidualReport res = energy.pde_residual(rep.u);
  rep.pde_residual = res.value;
  rep.trivial = energy.x_norm(v) < opts.trivial_tol;
  rep.morse_index = static_cast<int>(energy.hessian_tridiagonal(v).count_below(0.0));
  rep.sign_changes = count_sign_changes(rep.u);
  rep.converged = !rep.trivial && rep.grad_norm <= opts.grad_tol && rep.pde_residual <= opts.res_tol;
  if (rep.trivial)
    rep.status = "collapsed to trivial";
  else if (rep.converged)
    rep.status = "converged";
  else if (rep.grad_norm <= opts.grad_tol)
    rep.status = "critical point found; PDE residual above tolerance (refine the grid)";
  else
    rep.status = "not converged";
  return rep;
}

namespace {

SolveReport mountain_pass_single(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                 const SolveOptions& opts, const Field* warm) {
  if (split.negative_count != 0) throw ConfigError("mountain_pass_solve: the quadratic form is indefinite");
  const Energy energy(problem, grid);
  std::vector<IterationRecord> log;
  Tracker tracker(energy, log, opts.cerami_growth);

  Field dir = (warm != nullptr && energy.x_norm(*warm) > opts.trivial_tol) ? *warm : split.mode(0);
  dir /= energy.x_norm(dir);
  double s = 1.0;
  while (energy.value(s * dir) >= 0.0) {
    s *= 2.0;
    if (s > 1e12) throw NumericError("mountain_pass_solve: no point with negative energy along the initial ray");
  }
  const Field e = s * dir;

  std::vector<Field> path;
  std::vector<double> vals;
  const int m0 = std::max(4, opts.path_points);
  for (int j = 0; j <= m0; ++j) {
    path.emplace_back((static_cast<double>(j) / m0) * e);
    vals.push_back(energy.value(path.back()));
  }
  const double spacing = energy.x_norm(e) / m0;

  double alpha = 1.0;
  Field top = path[1];
  std::string status = "minimax iteration cap reached";
  bool reached = false;
  int it = 0;
  for (; it < opts.max_outer; ++it) {
    const Index np = static_cast<Index>(path.size());
    Index k = 1;
    for (Index j = 2; j + 1 < np; ++j)
      if (vals[j] > vals[k]) k = j;

    // Slide the maximiser along the polyline to the local maximum of Phi.
    {
      const Field fwd = path[k + 1] - path[k];
      const Field bwd = path[k] - path[k - 1];
      const double up = energy.pairing(path[k], fwd);
      const Field* seg = nullptr;
      double sign = 1.0;
      if (up > 0.0) {
        seg = &fwd;
      } else if (energy.pairing(path[k], bwd) < 0.0) {
        seg = &bwd;
        sign = -1.0;
      }
      if (seg != nullptr) {
        auto slope = [&](double a) { return sign * energy.pairing(Field(path[k] + sign * a * *seg), *seg); };
        double lo = 0.0;
        double hi = 1.0;
        double flo = slope(lo);
        double fhi = slope(hi);
        if (fhi < 0.0) {
          for (int r = 0; r < 60 && hi - lo > 1e-10; ++r) {
            double mid = hi - fhi * (hi - lo) / (fhi - flo);
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
            const double fm = slope(mid);
            if (fm > 0.0) {
              lo = mid;
              flo = fm;
              fhi *= 0.5;
            } else {
              hi = mid;
              fhi = fm;
              flo *= 0.5;
            }
          }
          const double a = 0.5 * (lo + hi);
          Field moved = path[k] + sign * a * *seg;
          const double mv = energy.value(moved);
          if (mv >= vals[k]) {
            path[k] = std::move(moved);
            vals[k] = mv;
          }
        }
      }
    }

    top = path[k];
    const Field d = energy.dual_gradient(top);
    const double gn = energy.dual_norm(d);
    tracker.record(it, "path", top, gn);
    if (tracker.unbounded()) {
      status = "suspected unbounded Cerami path";
      break;
    }
    if (energy.x_norm(top) < opts.trivial_tol) {
      status = "collapsed to trivial";
      break;
    }
    if (gn <= opts.basin_tol) {
      reached = true;
      break;
    }
    const Field g = energy.riesz(d);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Field trial = top - alpha * g;
      const double tv = energy.value(trial);
      if (tv <= vals[k] - 1e-4 * alpha * gn * gn) {
        path[k] = trial;
        vals[k] = tv;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      status = "path deformation step underflow";
      break;
    }
    alpha = std::min(alpha * 1.5, 2.0);

    // Keep the path resolved next to the moved point.
    if (static_cast<int>(path.size()) < opts.max_path_points) {
      if (energy.x_norm(Field(path[k + 1] - path[k])) > 2.0 * spacing) {
        const Field mid = 0.5 * (path[k] + path[k + 1]);
        vals.insert(vals.begin() + k + 1, energy.value(mid));
        path.insert(path.begin() + k + 1, mid);
      }
      if (energy.x_norm(Field(path[k] - path[k - 1])) > 2.0 * spacing) {
        const Field mid = 0.5 * (path[k] + path[k - 1]);
        vals.insert(vals.begin() + k, energy.value(mid));
        path.insert(path.begin() + k, mid);
      }
    }
  }

  if (!reached) return finish(energy, top, SolveMode::MountainPass, opts, std::move(log), tracker, it, 0, status);
  NewtonOutcome nt = newton_core(energy, top, opts, tracker);
  return finish(energy, nt.v, SolveMode::MountainPass, opts, std::move(log), tracker, it, nt.iterations, nt.status);
}

SolveReport local_linking_single(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                 const SolveOptions& opts, const Field* warm) {
  if (split.is_degenerate())
    throw ConfigError("local_linking_solve: zero is an eigenvalue; the local linking mode does not apply");
  const Energy energy(problem, grid);
  const Index l = split.negative_count;
  const MatrixXd basis = x_normalized_modes(energy, split, l);
  Field w0 = split.mode(l);
  VectorXd coeff;
  const VectorXd* warm_coeff = nullptr;
  if (warm != nullptr) {
    Field tail = *warm;
    x_orthogonalize(energy, basis, tail);
    const double tn = energy.x_norm(tail);
    if (tn > opts.trivial_tol) {
      w0 = tail / tn;
      coeff.resize(l + 1);
      for (Index i = 0; i < l; ++i) coeff[i] = energy.x_inner(basis.col(i), *warm);
      coeff[l] = tn;
      warm_coeff = &coeff;
    }
  }
  return minimax_then_newton(energy, basis, w0, warm_coeff, SolveMode::LocalLinking, opts);
}

bool use_coarse(const Grid& grid, const SolveOptions& opts) {
  return opts.coarse_nodes >= 3 && opts.coarse_nodes < grid.size();
}

using SingleSolve = SolveReport (*)(const Problem&, const Grid&, const SpectralSplit&, const SolveOptions&,
                                    const Field*);

// Runs `solve` on the coarse grid and polishes the result on `grid`.
SolveReport two_grid(SingleSolve solve, const Problem& problem, const Grid& grid, const SpectralSplit& split,
                     const SolveOptions& opts, const Field* warm) {
  const Grid coarse = grid.with_nodes(opts.coarse_nodes);
  const SpectralSplit cs = eigenpairs(problem, coarse, split.count());
  if (cs.negative_count != split.negative_count)
    throw NumericError("coarse grid changes the number of negative eigenvalues; increase coarse_nodes");
  Field cw;
  if (warm != nullptr) cw = interpolate(grid, *warm, coarse);
  const SolveReport rep = solve(problem, coarse, cs, opts, warm != nullptr ? &cw : nullptr);
  if (rep.trivial || rep.grad_norm > opts.basin_tol) {
    SolveReport out = rep;
    out.status = "coarse grid: " + rep.status;
    out.converged = false;
    return out;
  }
  return transfer_and_refine(problem, coarse, grid, rep, opts);
}

}  // namespace

SolveReport mountain_pass_solve(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                const SolveOptions& opts, const Field* warm) {
  if (use_coarse(grid, opts)) {
    if (split.negative_count != 0) throw ConfigError("mountain_pass_solve: the quadratic form is indefinite");
    return two_grid(mountain_pass_single, problem, grid, split, opts, warm);
  }
  return mountain_pass_single(problem, grid, split, opts, warm);
}

SolveReport local_linking_solve(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                const SolveOptions& opts, const Field* warm) {
  if (use_coarse(grid, opts)) {
    if (split.is_degenerate())
      throw ConfigError("local_linking_solve: zero is an eigenvalue; the local linking mode does not apply");
    return two_grid(local_linking_single, problem, grid, split, opts, warm);
  }
  return local_linking_single(problem, grid, split, opts, warm);
}

SolveReport newton_refine(const Problem& problem, const Grid& grid, const Field& v0, const SolveOptions& opts) {
  const Energy energy(problem, grid);
  std::vector<IterationRecord> log;
  Tracker tracker(energy, log, opts.cerami_growth);
  NewtonOutcome nt = newton_core(energy, v0, opts, tracker);
  return finish(energy, nt.v, SolveMode::Refine, opts, std::move(log), tracker, 0, nt.iterations, nt.status);
}

SolveReport transfer_and_refine(const Problem& problem, const Grid& coarse, const Grid& fine, const SolveReport& rep,
                                const SolveOptions& opts) {
  const Field v0 = interpolate(coarse, rep.v, fine);
  SolveReport out = newton_refine(problem, fine, v0, opts);
  std::vector<IterationRecord> log = rep.log;
  for (auto& r : log) r.stage = "coarse-" + r.stage;
  log.insert(log.end(), out.log.begin(), out.log.end());
  out.log = std::move(log);
  out.mode = rep.mode;
  out.level = rep.level;
  out.outer_iterations = rep.outer_iterations;
  out.newton_iterations += rep.newton_iterations;
  out.rho_floor = std::min(out.rho_floor, rep.rho_floor);
  return out;
}

GrowthFit fit_growth_bound(const Problem& problem, const TransformTable& tr) {
  const double half_p = 0.5 * problem.nonlinearity.p();
  std::vector<double> ts = log_samples(1e-8, 1e8, 2000, true);
  std::vector<double> y;
  y.reserve(ts.size());
  for (double t : ts) y.push_back(std::abs(problem.G(tr.f(t))));

  // Relative least squares for (C1, C2) >= 0.
  Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
  Eigen::Vector2d atb = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double at = std::abs(ts[i]);
    const Eigen::Vector2d row(at * at / y[i], std::pow(at, half_p) / y[i]);
    ata += row * row.transpose();
    atb += row;
  }
  Eigen::Vector2d c = ata.ldlt().solve(atb);
  if (c[0] < 0.0 || !std::isfinite(c[0])) c = Eigen::Vector2d(0.0, atb[1] / ata(1, 1));
  if (c[1] < 0.0 || !std::isfinite(c[1])) c = Eigen::Vector2d(atb[0] / ata(0, 0), 0.0);
  GrowthFit fit{std::max(0.0, c[0]), std::max(0.0, c[1])};

  // Enlarge C2 on |t| >= 1, then C1, until every sample is bounded.
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double at = std::abs(ts[i]);
    if (at >= 1.0) fit.c2 = std::max(fit.c2, (y[i] - fit.c1 * at * at) / std::pow(at, half_p));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double at = std::abs(ts[i]);
    fit.c1 = std::max(fit.c1, (y[i] - fit.c2 * std::pow(at, half_p)) / (at * at));
  }
  return fit;
}

namespace {

}  // namespace

bool distinct_solutions(const Grid& grid, const SolveReport& a, const SolveReport& b, const SolveOptions& opts) {
  const double na = std::sqrt(l2_inner(grid, a.v, a.v));
  const double nb = std::sqrt(l2_inner(grid, b.v, b.v));
  const Field diff = a.v - b.v;
  const Field sum = a.v + b.v;
  const double dist = std::sqrt(std::min(l2_inner(grid, diff, diff), l2_inner(grid, sum, sum)));
  const bool far = dist >= opts.dist_tol * std::max(na, nb);
  const bool separated = std::abs(a.phi - b.phi) >= opts.energy_sep * std::max(1.0, std::max(a.phi, b.phi));
  return far && separated;
}

namespace {

MultiplicityReport multiplicity_single(const Problem& problem, const Grid& grid, const SpectralSplit& split, int count,
                                       const SolveOptions& opts) {
  if (!problem.nonlinearity.odd()) throw ConfigError("multiplicity_search: the nonlinearity must be odd");
  MultiplicityReport rep;
  const Energy energy(problem, grid);
  const Index l = split.negative_count;
  rep.growth = fit_growth_bound(problem, energy.transform());
  rep.eta = coercivity_eta(split, problem.shift);
  for (Index k = l + 1; k <= split.count(); ++k) {
    const double b = beta(split, problem.shift, k);
    const double lam = rep.eta - rep.growth.c1 * b * b;
    if (lam > 0.0) {
      rep.k = k;
      rep.lambda_k = lam;
      break;
    }
  }
  if (rep.k == 0) throw ConfigError("multiplicity_search: no computed index satisfies eta - C1 beta_k^2 > 0");

  const Index first = rep.k - 1;
  const Index last = std::min<Index>(first + count + opts.extra_levels, split.count() - 1);
  for (Index j = first; j < last && static_cast<int>(rep.solutions.size()) < count; ++j) {
    LevelDiagnostics diag;
    diag.level = static_cast<int>(j);
    SolveReport sol;
    try {
      sol = minimax_then_newton(energy, x_normalized_modes(energy, split, j), split.mode(j), nullptr,
                                SolveMode::Multiplicity, opts);
      diag.support = "eigenmodes";
    } catch (const NumericError& err) {
      sol.status = err.what();
    }
    // On the modal subspace the peak can degenerate into a saddle; retry with the
    // X^- modes plus the solutions found so far as the support space.
    if (!sol.converged && !rep.solutions.empty()) {
      std::vector<Field> cols;
      for (Index i = 0; i < l; ++i) cols.push_back(split.mode(i));
      for (const auto& s : rep.solutions) cols.push_back(s.v);
      MatrixXd basis(grid.size(), static_cast<Index>(cols.size()));
      Index rank = 0;
      for (auto& c : cols) {
        Field f = c;
        x_orthogonalize(energy, basis.leftCols(rank), f);
        const double fn = energy.x_norm(f);
        if (fn <= 1e-8 * energy.x_norm(c)) continue;
        basis.col(rank++) = f / fn;
      }
      try {
        SolveReport retry = minimax_then_newton(energy, basis.leftCols(rank), split.mode(j), nullptr,
                                                SolveMode::Multiplicity, opts);
        if (retry.converged || sol.v.size() == 0 || retry.grad_norm < sol.grad_norm) {
          sol = std::move(retry);
          diag.support = "previous solutions";
        }
      } catch (const NumericError& err) {
        if (sol.v.size() == 0) sol.status = err.what();
      }
    }
    sol.level = static_cast<int>(j);
    diag.converged = sol.converged;
    diag.status = sol.status;
    if (sol.v.size() == 0) {
      rep.levels.push_back(diag);
      continue;
    }
    if (sol.converged) {
      diag.distinct = std::all_of(rep.solutions.begin(), rep.solutions.end(),
                                  [&](const SolveReport& other) { return distinct_solutions(grid, sol, other, opts); });
      if (diag.distinct) rep.solutions.push_back(std::move(sol));
    }
    rep.levels.push_back(diag);
  }
  std::sort(rep.solutions.begin(), rep.solutions.end(),
            [](const SolveReport& a, const SolveReport& b) { return a.phi < b.phi; });
  for (const auto& s : rep.solutions) rep.negative_grad_norms.push_back(energy.gradient_norm(Field(-s.v)));
  rep.complete = static_cast<int>(rep.solutions.size()) >= count;
  return rep;
}

}  // namespace

MultiplicityReport multiplicity_search(const Problem& problem, const Grid& grid, const SpectralSplit& split, int count,
                                       const SolveOptions& opts) {
  if (!use_coarse(grid, opts)) return multiplicity_single(problem, grid, split, count, opts);
  const Grid coarse = grid.with_nodes(opts.coarse_nodes);
  const SpectralSplit cs = eigenpairs(problem, coarse, split.count());
  // The residual tolerance is only meaningful on the full grid.
  SolveOptions copts = opts;
  copts.res_tol = std::numeric_limits<double>::infinity();
  MultiplicityReport rep = multiplicity_single(problem, coarse, cs, count, copts);
  // The fine-grid split fixes eta and k; the coarse search supplies the levels.
  rep.eta = coercivity_eta(split, problem.shift);
  const Energy energy(problem, grid);
  std::vector<SolveReport> refined;
  for (const auto& s : rep.solutions) {
    SolveReport r = transfer_and_refine(problem, coarse, grid, s, opts);
    auto diag = std::find_if(rep.levels.begin(), rep.levels.end(),
                             [&](const LevelDiagnostics& d) { return d.level == s.level; });
    const bool distinct = std::all_of(refined.begin(), refined.end(), [&](const SolveReport& other) {
      return distinct_solutions(grid, r, other, opts);
    });
    if (diag != rep.levels.end()) {
      diag->converged = r.converged;
      diag->distinct = distinct;
      diag->status = r.status;
    }
    if (r.converged && distinct) refined.push_back(std::move(r));
  }
  std::sort(refined.begin(), refined.end(), [](const SolveReport& a, const SolveReport& b) { return a.phi < b.phi; });
  rep.solutions = std::move(refined);
  rep.negative_grad_norms.clear();
  for (const auto& s : rep.solutions) rep.negative_grad_norms.push_back(energy.gradient_norm(Field(-s.v)));
  rep.complete = static_cast<int>(rep.solutions.size()) >= count;
  return rep;
}

std::vector<ContinuationPoint> continuation_in_omega(const Problem& base, const Grid& grid,
                                                     const std::vector<double>& omegas, Index modes,
                                                     const SolveOptions& opts, bool warm_start) {
  for (std::size_t i = 1; i < omegas.size(); ++i)
    if (!(omegas[i] > omegas[i - 1])) throw ConfigError("continuation_in_omega: omega list must increase");
  std::vector<ContinuationPoint> out;
  Field previous;
  Index previous_l = -1;
  for (double omega : omegas) {
    ContinuationPoint pt;
    pt.omega = omega;
    Problem problem = base;
    problem.potential = base.potential.with_omega(omega);
    problem.shift = choose_shift(problem.potential, grid);
    pt.shift = problem.shift;
    const SpectralSplit split = eigenpairs(problem, grid, modes);
    pt.negative_count = split.negative_count;
    pt.degenerate = split.is_degenerate();
    pt.mode = split.negative_count == 0 ? SolveMode::MountainPass : SolveMode::LocalLinking;
    if (!pt.degenerate) {
      // A branch does not survive an eigenvalue crossing, so the previous
      // solution is only reused while l stays the same.
      const bool reuse = warm_start && previous.size() == grid.size() && previous_l == split.negative_count;
      const Field* warm = reuse ? &previous : nullptr;
      pt.warm_started = reuse;
      try {
        pt.report = pt.mode == SolveMode::MountainPass ? mountain_pass_solve(problem, grid, split, opts, warm)
                                                       : local_linking_solve(problem, grid, split, opts, warm);
        pt.solved = pt.report.converged;
        if (pt.solved) {
          previous = pt.report.v;
          previous_l = split.negative_count;
        }
      } catch (const NumericError& err) {
        pt.report.status = err.what();
      }
    } else {
      pt.report.status = "skipped: zero is (numerically) an eigenvalue";
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qsw
