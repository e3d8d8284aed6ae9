#ifndef QSW_KRYLOV_HPP
#define QSW_KRYLOV_HPP

#include <functional>

#include <Eigen/Core>

namespace qsw {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct MinresResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // preconditioned residual norm relative to the right-hand side
  bool converged = false;
};

/// Preconditioned MINRES for symmetric, possibly indefinite `op` with a
/// symmetric positive definite preconditioner `precond` (applies M^{-1}).
MinresResult minres(const LinearMap& op, const LinearMap& precond, const Eigen::VectorXd& rhs, double rel_tol,
                    int max_iter);

}  // namespace qsw

#endif  // QSW_KRYLOV_HPP
