#ifndef QSW_ENERGY_HPP
#define QSW_ENERGY_HPP

#include <optional>
#include <string>

#include <Eigen/Core>

#include "qsw/grid.hpp"
#include "qsw/model.hpp"
#include "qsw/transform.hpp"

namespace qsw {

struct EnergyBreakdown {
  double dirichlet = 0.0;  // 1/2 int |grad v|^2
  double potential = 0.0;  // 1/2 int V~ f(v)^2
  double nonlinear = 0.0;  // int G~(f(v))
  double total = 0.0;
  double rho = 0.0;        // (int |grad v|^2 + V~ f(v)^2)^{1/2}
};

struct ResidualReport {
  double value = 0.0;  // |r|_2 / |u|_2 over the active nodes
  double absolute = 0.0;
  bool trivial = false;
};

enum class Verdict { Pass, Fail, NotApplicable };

const char* to_string(Verdict v);

struct L4Probe {
  Verdict verdict = Verdict::NotApplicable;
  double phi = 0.0;
  double derivative = 0.0;  // <Phi'(v), v> = d/dt Phi(t v) at t = 1
};

/// Discrete dual functional
///
///   Phi(v) = 1/2 int |grad v|^2 + 1/2 int V~ f(v)^2 - int G~(f(v))
///
/// bound to one problem and grid. Gradients come in three flavours: the
/// covector (`dual_gradient`, so that <Phi'(v), w> = d . w), its quadrature
/// Riesz representative (`gradient`) and its X-Riesz representative
/// (`sobolev_gradient`). Norms of Phi' are taken in the X-dual norm.
class Energy {
 public:
  Energy(const Problem& problem, const Grid& grid, TransformTable transform = {});

  const Problem& problem() const { return problem_; }
  const Grid& grid() const { return grid_; }
  const TransformTable& transform() const { return transform_; }

  EnergyBreakdown breakdown(const Field& v) const;
  double value(const Field& v) const { return breakdown(v).total; }

  Field dual_gradient(const Field& v) const;
  Field gradient(const Field& v) const;
  Field sobolev_gradient(const Field& v) const;
  /// Sobolev gradient of a covector.
  Field riesz(const Field& covector) const;
  double gradient_norm(const Field& v) const;
  double dual_norm(const Field& covector) const;
  /// <Phi'(v), w>
  double pairing(const Field& v, const Field& w) const;

  /// Central difference of the covector along w.
  Field hessian_vec_dual(const Field& v, const Field& w) const;
  Field hessian_vec(const Field& v, const Field& w) const;
  /// Tridiagonal Hessian (covector form) on the active block, from the
  /// closed-form nodal curvature.
  SymTridiagonal hessian_tridiagonal(const Field& v) const;

  double x_inner(const Field& a, const Field& b) const;
  double x_norm(const Field& a) const;

  /// u = f(v) node by node.
  Field to_u(const Field& v) const;

  /// J(u) = 1/2 int (1 + 2u^2)|grad u|^2 + 1/2 int V u^2 - int G(u).
  double energy_J(const Field& u) const;
  ResidualReport pde_residual(const Field& u, const Field* forcing = nullptr) const;
  /// -Delta u + V u - u Delta(u^2) - g(u) on the active nodes (zero elsewhere).
  Field pde_operator(const Field& u) const;

  L4Probe lemma_l4_probe(const Field& v, double a) const;

  const Eigen::VectorXd& potential() const { return potential_; }
  const Eigen::VectorXd& shifted_potential() const { return shifted_; }
  const SymTridiagonal& x_matrix() const { return x_matrix_; }

 private:
  Problem problem_;
  Grid grid_;
  TransformTable transform_;
  Eigen::VectorXd potential_;
  Eigen::VectorXd shifted_;
  SymTridiagonal stiffness_;
  SymTridiagonal x_matrix_;
  SpdTridiagonalSolver x_solver_;
};

// Free-function forms.
EnergyBreakdown phi(const Problem& problem, const Grid& grid, const Field& v);
Field phi_grad(const Problem& problem, const Grid& grid, const Field& v);
/// Phi''(0) = K + W V on the active block (covector form, like hessian_tridiagonal).
SymTridiagonal q_hessian_origin(const Problem& problem, const Grid& grid);
Field hessian_vec(const Problem& problem, const Grid& grid, const Field& v, const Field& w);
double energy_J(const Problem& problem, const Grid& grid, const Field& u);
ResidualReport pde_residual(const Problem& problem, const Grid& grid, const Field& u);
L4Probe lemma_l4_probe(const Problem& problem, const Grid& grid, const Field& v, double a);

}  // namespace qsw

#endif  // QSW_ENERGY_HPP
