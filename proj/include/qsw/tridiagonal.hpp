#ifndef QSW_TRIDIAGONAL_HPP
#define QSW_TRIDIAGONAL_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace qsw {

/// Symmetric tridiagonal matrix stored by its diagonal and first off-diagonal.
struct SymTridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;  // size() - 1 entries

  SymTridiagonal() = default;
  SymTridiagonal(Eigen::VectorXd d, Eigen::VectorXd e) : diag(std::move(d)), off(std::move(e)) {}

  Eigen::Index size() const { return diag.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;

  /// D^{-1/2} T D^{-1/2} for a positive diagonal D.
  SymTridiagonal congruence(const Eigen::VectorXd& d) const;
  SymTridiagonal operator+(const SymTridiagonal& o) const;
  SymTridiagonal plus_diagonal(const Eigen::VectorXd& d) const;

  /// Number of eigenvalues strictly below `shift` (Sturm count).
  Eigen::Index count_below(double shift) const;
  /// Gershgorin enclosure of the spectrum.
  std::pair<double, double> gershgorin() const;
};

/// LDL^T factorisation without pivoting; requires a positive definite matrix.
class SpdTridiagonalSolver {
 public:
  SpdTridiagonalSolver() = default;
  explicit SpdTridiagonalSolver(const SymTridiagonal& t);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::Index size() const { return d_.size(); }

 private:
  Eigen::VectorXd d_;
  Eigen::VectorXd l_;
};

/// LU with partial pivoting of a general tridiagonal matrix (shifted systems
/// in inverse iteration may be indefinite and nearly singular).
class PivotedTridiagonalSolver {
 public:
  PivotedTridiagonalSolver(const SymTridiagonal& t, double shift);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::VectorXd dl_, d_, du_, du2_;
  std::vector<std::uint8_t> swapped_;
};

/// Smallest `count` eigenvalues by Sturm bisection.
Eigen::VectorXd smallest_eigenvalues(const SymTridiagonal& t, Eigen::Index count);

/// Unit eigenvectors for the given (accurate) eigenvalues by inverse iteration,
/// orthogonalised within clusters.
Eigen::MatrixXd eigenvectors_by_inverse_iteration(const SymTridiagonal& t, const Eigen::VectorXd& eigenvalues,
                                                  std::uint64_t seed = 0x5eed);

}  // namespace qsw

#endif  // QSW_TRIDIAGONAL_HPP
