#include "qsw/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsw {

using Eigen::VectorXd;

// Paige-Saunders recurrences in the M^{-1} inner product.
MinresResult minres(const LinearMap& op, const LinearMap& precond, const VectorXd& rhs, double rel_tol,
                    int max_iter) {
  MinresResult out;
  const Eigen::Index n = rhs.size();
  out.x = VectorXd::Zero(n);
  VectorXd r1 = rhs;
  VectorXd y = precond(r1);
  const double beta1 = std::sqrt(std::max(0.0, r1.dot(y)));
  if (beta1 == 0.0) {
    out.converged = true;
    return out;
  }
  VectorXd r2 = r1;
  VectorXd w = VectorXd::Zero(n);
  VectorXd w1 = w;
  VectorXd w2 = w;
  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= max_iter; ++itn) {
    const double s = 1.0 / beta;
    const VectorXd v = s * y;
    y = op(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = precond(r2);
    oldb = beta;
    beta = std::sqrt(std::max(0.0, r2.dot(y)));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    out.x += phi * w;
    out.iterations = itn;
    out.residual = phibar / beta1;
    if (out.residual <= rel_tol) {
      out.converged = true;
      break;
    }
    if (beta == 0.0) break;
  }
  return out;
}

}  // namespace qsw
