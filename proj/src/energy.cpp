#include "qsw/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsw/errors.hpp"
#include "qsw/spectrum.hpp"

namespace qsw {

using Eigen::VectorXd;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    default:
      return "not-applicable";
  }
}

Energy::Energy(const Problem& problem, const Grid& grid, TransformTable transform)
    : problem_(problem),
      grid_(grid),
      transform_(transform),
      potential_(sample_potential(problem, grid)),
      shifted_(potential_.array() + problem.shift),
      stiffness_(stiffness(grid)) {
  const VectorXd w = grid_.active(grid_.weights());
  x_matrix_ = stiffness_.plus_diagonal(w.cwiseProduct(grid_.active(shifted_)));
  x_solver_ = SpdTridiagonalSolver(x_matrix_);
}

Field Energy::to_u(const Field& v) const {
  Field u(v.size());
  for (Index i = 0; i < v.size(); ++i) u[i] = transform_.f(v[i]);
  return u;
}

EnergyBreakdown Energy::breakdown(const Field& v) const {
  EnergyBreakdown e;
  const auto& w = grid_.weights();
  double pot = 0.0;
  double nl = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double u = transform_.f(v[i]);
    pot += w[i] * shifted_[i] * u * u;
    const double gi = problem_.Gtilde(u);
    if (!std::isfinite(gi)) {
      std::ostringstream msg;
      msg << "energy: G~(f(v)) overflows at node " << i << " (v = " << v[i] << ")";
      throw NumericError(msg.str());
    }
    nl += w[i] * gi;
  }
  const double grad = dirichlet_form(grid_, v, v);
  e.dirichlet = 0.5 * grad;
  e.potential = 0.5 * pot;
  e.nonlinear = nl;
  e.total = e.dirichlet + e.potential - e.nonlinear;
  e.rho = std::sqrt(grad + pot);
  return e;
}

Field Energy::dual_gradient(const Field& v) const {
  const Index first = grid_.first_active();
  const Index m = grid_.active_size();
  const auto& w = grid_.weights();
  VectorXd d = stiffness_.apply(grid_.active(v));
  for (Index k = 0; k < m; ++k) {
    const Index i = first + k;
    const double u = transform_.f(v[i]);
    const double du = TransformTable::from_value_prime(u);
    d[k] += w[i] * (shifted_[i] * u - problem_.gtilde(u)) * du;
  }
  if (!d.allFinite()) throw NumericError("energy: non-finite gradient");
  return grid_.extend(d);
}

Field Energy::gradient(const Field& v) const {
  Field d = dual_gradient(v);
  grid_.active(d).array() /= grid_.active(grid_.weights()).array();
  return d;
}

Field Energy::riesz(const Field& covector) const { return grid_.extend(x_solver_.solve(grid_.active(covector))); }

Field Energy::sobolev_gradient(const Field& v) const { return riesz(dual_gradient(v)); }

double Energy::dual_norm(const Field& covector) const {
  const VectorXd c = grid_.active(covector);
  return std::sqrt(std::max(0.0, c.dot(x_solver_.solve(c))));
}

double Energy::gradient_norm(const Field& v) const { return dual_norm(dual_gradient(v)); }

double Energy::pairing(const Field& v, const Field& w) const { return dual_gradient(v).dot(w); }

Field Energy::hessian_vec_dual(const Field& v, const Field& w) const {
  const double wn = x_norm(w);
  if (wn == 0.0) return grid_.zeros();
  const double h = 1e-5 * std::max(1.0, x_norm(v)) / wn;
  return (dual_gradient(v + h * w) - dual_gradient(v - h * w)) / (2.0 * h);
}

Field Energy::hessian_vec(const Field& v, const Field& w) const {
  Field d = hessian_vec_dual(v, w);
  grid_.active(d).array() /= grid_.active(grid_.weights()).array();
  return d;
}

SymTridiagonal Energy::hessian_tridiagonal(const Field& v) const {
  // d2/dv2 of 1/2 V~ f(v)^2 - G~(f(v)) is (V~ - g~'(u)) f'^2 + (V~ u - g~(u)) f''.
  const Index first = grid_.first_active();
  const Index m = grid_.active_size();
  const auto& w = grid_.weights();
  VectorXd curv(m);
  for (Index k = 0; k < m; ++k) {
    const Index i = first + k;
    const double u = transform_.f(v[i]);
    const double d1 = TransformTable::from_value_prime(u);
    const double d2 = TransformTable::from_value_second(u);
    const double dg = problem_.nonlinearity.g_prime(u) + problem_.shift;
    curv[k] = w[i] * ((shifted_[i] - dg) * d1 * d1 + (shifted_[i] * u - problem_.gtilde(u)) * d2);
  }
  if (!curv.allFinite()) throw NumericError("energy: non-finite Hessian");
  return stiffness_.plus_diagonal(curv);
}

double Energy::x_inner(const Field& a, const Field& b) const {
  return dirichlet_form(grid_, a, b) + (grid_.weights().array() * shifted_.array() * a.array() * b.array()).sum();
}

double Energy::x_norm(const Field& a) const { return std::sqrt(std::max(0.0, x_inner(a, a))); }

double Energy::energy_J(const Field& u) const {
  // (1 + 2u^2)|grad u|^2 = |grad F(u)|^2 with F the inverse transform; the
  // face differences of F(u) give the quasilinear Dirichlet term.
  const Index n = grid_.size();
  VectorXd fu(n);
  for (Index i = 0; i < n; ++i) fu[i] = TransformTable::f_inverse(u[i]);
  const auto& w = grid_.weights();
  double mass = 0.0;
  double nl = 0.0;
  for (Index i = 0; i < n; ++i) {
    mass += w[i] * potential_[i] * u[i] * u[i];
    nl += w[i] * problem_.G(u[i]);
  }
  return 0.5 * dirichlet_form(grid_, fu, fu) + 0.5 * mass - nl;
}

Field Energy::pde_operator(const Field& u) const {
  const Field lu = laplacian_fourth_order(grid_, u);
  const Field lu2 = laplacian_fourth_order(grid_, Field(u.cwiseProduct(u)));
  Field r = grid_.zeros();
  const Index first = grid_.first_active();
  for (Index k = 0; k < grid_.active_size(); ++k) {
    const Index i = first + k;
    r[i] = lu[i] + potential_[i] * u[i] + u[i] * lu2[i] - problem_.g(u[i]);
  }
  return r;
}

ResidualReport Energy::pde_residual(const Field& u, const Field* forcing) const {
  ResidualReport rep;
  const VectorXd w = grid_.active(grid_.weights());
  const VectorXd ua = grid_.active(u);
  const double unorm = std::sqrt(w.dot(ua.cwiseProduct(ua)));
  if (unorm == 0.0) {
    rep.trivial = true;
    return rep;
  }
  Field r = pde_operator(u);
  if (forcing != nullptr) r -= *forcing;
  const VectorXd ra = grid_.active(r);
  rep.absolute = std::sqrt(w.dot(ra.cwiseProduct(ra)));
  rep.value = rep.absolute / unorm;
  return rep;
}

L4Probe Energy::lemma_l4_probe(const Field& v, double a) const {
  L4Probe out;
  out.phi = value(v);
  if (out.phi > -a) return out;
  out.derivative = pairing(v, v);
  out.verdict = out.derivative < 0.0 ? Verdict::Pass : Verdict::Fail;
  return out;
}

EnergyBreakdown phi(const Problem& problem, const Grid& grid, const Field& v) {
  return Energy(problem, grid).breakdown(v);
}

Field phi_grad(const Problem& problem, const Grid& grid, const Field& v) { return Energy(problem, grid).gradient(v); }

SymTridiagonal q_hessian_origin(const Problem& problem, const Grid& grid) {
  return quadratic_form_matrix(problem, grid);
}

Field hessian_vec(const Problem& problem, const Grid& grid, const Field& v, const Field& w) {
  return Energy(problem, grid).hessian_vec(v, w);
}

double energy_J(const Problem& problem, const Grid& grid, const Field& u) {
  return Energy(problem, grid).energy_J(u);
}

ResidualReport pde_residual(const Problem& problem, const Grid& grid, const Field& u) {
  return Energy(problem, grid).pde_residual(u);
}

L4Probe lemma_l4_probe(const Problem& problem, const Grid& grid, const Field& v, double a) {
  return Energy(problem, grid).lemma_l4_probe(v, a);
}

}  // namespace qsw
