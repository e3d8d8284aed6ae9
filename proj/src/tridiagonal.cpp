#include "qsw/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qsw/errors.hpp"

namespace qsw {

using Eigen::Index;
using Eigen::VectorXd;

VectorXd SymTridiagonal::apply(const VectorXd& x) const {
  const Index n = size();
  VectorXd y = diag.cwiseProduct(x);
  if (n > 1) {
    y.head(n - 1) += off.cwiseProduct(x.tail(n - 1));
    y.tail(n - 1) += off.cwiseProduct(x.head(n - 1));
  }
  return y;
}

Eigen::MatrixXd SymTridiagonal::dense() const {
  const Index n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diag;
  if (n > 1) {
    m.diagonal(1) = off;
    m.diagonal(-1) = off;
  }
  return m;
}

SymTridiagonal SymTridiagonal::congruence(const VectorXd& d) const {
  const Index n = size();
  const VectorXd s = d.cwiseSqrt().cwiseInverse();
  SymTridiagonal out(diag.cwiseProduct(s).cwiseProduct(s), VectorXd(std::max<Index>(n - 1, 0)));
  for (Index i = 0; i + 1 < n; ++i) out.off[i] = off[i] * s[i] * s[i + 1];
  return out;
}

SymTridiagonal SymTridiagonal::operator+(const SymTridiagonal& o) const {
  return SymTridiagonal(diag + o.diag, off + o.off);
}

SymTridiagonal SymTridiagonal::plus_diagonal(const VectorXd& d) const { return SymTridiagonal(diag + d, off); }

Index SymTridiagonal::count_below(double shift) const {
  const Index n = size();
  const double tiny = std::numeric_limits<double>::min();
  Index count = 0;
  double q = diag[0] - shift;
  if (q < 0.0) ++count;
  for (Index i = 1; i < n; ++i) {
    if (std::abs(q) < tiny) q = -tiny;
    q = diag[i] - shift - off[i - 1] * off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> SymTridiagonal::gershgorin() const {
  const Index n = size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

SpdTridiagonalSolver::SpdTridiagonalSolver(const SymTridiagonal& t) {
  const Index n = t.size();
  d_.resize(n);
  l_.resize(std::max<Index>(n - 1, 0));
  d_[0] = t.diag[0];
  for (Index i = 1; i < n; ++i) {
    if (!(d_[i - 1] > 0.0)) throw NumericError("SpdTridiagonalSolver: matrix is not positive definite");
    l_[i - 1] = t.off[i - 1] / d_[i - 1];
    d_[i] = t.diag[i] - l_[i - 1] * t.off[i - 1];
  }
  if (!(d_[n - 1] > 0.0)) throw NumericError("SpdTridiagonalSolver: matrix is not positive definite");
}

VectorXd SpdTridiagonalSolver::solve(const VectorXd& b) const {
  const Index n = d_.size();
  VectorXd x = b;
  for (Index i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
  x.array() /= d_.array();
  for (Index i = n - 2; i >= 0; --i) x[i] -= l_[i] * x[i + 1];
  return x;
}

// Follows the LAPACK dgttrf/dgttrs layout: dl, d, du are overwritten by the
// factors and du2 holds the second superdiagonal created by row swaps.
PivotedTridiagonalSolver::PivotedTridiagonalSolver(const SymTridiagonal& t, double shift) {
  const Index n = t.size();
  d_ = t.diag.array() - shift;
  dl_ = t.off;
  du_ = t.off;
  du2_ = VectorXd::Zero(std::max<Index>(n - 2, 0));
  swapped_.assign(static_cast<std::size_t>(n), 0);
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = eps * std::max(1.0, t.diag.cwiseAbs().maxCoeff() + 2.0 * t.off.cwiseAbs().maxCoeff());
  for (Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (std::abs(d_[i]) < floor) d_[i] = floor;
      const double fact = dl_[i] / d_[i];
      dl_[i] = fact;
      d_[i + 1] -= fact * du_[i];
    } else {
      const double fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const double temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      swapped_[static_cast<std::size_t>(i)] = 1;
    }
  }
  if (std::abs(d_[n - 1]) < floor) d_[n - 1] = floor;
}

VectorXd PivotedTridiagonalSolver::solve(const VectorXd& b) const {
  const Index n = d_.size();
  VectorXd x = b;
  for (Index i = 0; i + 1 < n; ++i) {
    if (!swapped_[static_cast<std::size_t>(i)]) {
      x[i + 1] -= dl_[i] * x[i];
    } else {
      const double temp = x[i];
      x[i] = x[i + 1];
      x[i + 1] = temp - dl_[i] * x[i];
    }
  }
  x[n - 1] /= d_[n - 1];
  if (n > 1) x[n - 2] = (x[n - 2] - du_[n - 2] * x[n - 1]) / d_[n - 2];
  for (Index i = n - 3; i >= 0; --i) x[i] = (x[i] - du_[i] * x[i + 1] - du2_[i] * x[i + 2]) / d_[i];
  return x;
}

VectorXd smallest_eigenvalues(const SymTridiagonal& t, Index count) {
  const Index n = t.size();
  if (count > n) throw NumericError("smallest_eigenvalues: more eigenvalues requested than the matrix dimension");
  const auto [glo, ghi] = t.gershgorin();
  const double scale = std::max(std::abs(glo), std::abs(ghi));
  const double eps = std::numeric_limits<double>::epsilon();
  VectorXd out(count);
  double lo_prev = glo;
  for (Index k = 0; k < count; ++k) {
    // The k-th eigenvalue (0-based) is the smallest x with count_below(x) > k.
    double lo = lo_prev;
    double hi = ghi;
    for (int it = 0; it < 200 && hi - lo > 2.0 * eps * std::max(std::abs(lo) + std::abs(hi), scale * 1e-3); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (t.count_below(mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    out[k] = 0.5 * (lo + hi);
    lo_prev = lo;
  }
  return out;
}

Eigen::MatrixXd eigenvectors_by_inverse_iteration(const SymTridiagonal& t, const VectorXd& eigenvalues,
                                                  std::uint64_t seed) {
  const Index n = t.size();
  const Index k = eigenvalues.size();
  Eigen::MatrixXd vecs(n, k);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto [glo, ghi] = t.gershgorin();
  const double cluster_tol = 1e-3 * std::max(1.0, ghi - glo);
  for (Index j = 0; j < k; ++j) {
    const double lambda = eigenvalues[j];
    PivotedTridiagonalSolver lu(t, lambda);
    VectorXd x(n);
    for (Index i = 0; i < n; ++i) x[i] = normal(rng);
    x.normalize();
    for (int it = 0; it < 6; ++it) {
      x = lu.solve(x);
      for (Index p = 0; p < j; ++p)
        if (std::abs(eigenvalues[p] - lambda) < cluster_tol) x -= vecs.col(p).dot(x) * vecs.col(p);
      x.normalize();
      const double res = (t.apply(x) - lambda * x).norm();
      if (it >= 1 && res <= 1e-13 * std::max(1.0, ghi - glo)) break;
    }
    vecs.col(j) = x;
  }
  return vecs;
}

}  // namespace qsw
