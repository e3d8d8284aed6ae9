#ifndef QSW_SPECTRUM_HPP
#define QSW_SPECTRUM_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "qsw/grid.hpp"
#include "qsw/model.hpp"

namespace qsw {

enum class EigenMethod { Automatic, Dense, Tridiagonal };

struct EigenOptions {
  EigenMethod method = EigenMethod::Automatic;
  /// Active blocks up to this size use the dense solver under Automatic.
  Index dense_limit = 512;
  /// Also solve on the refined grid and Richardson-extrapolate.
  bool extrapolate = true;
  std::uint64_t seed = 0x5eed;
};

/// Lowest eigenpairs of -Delta + V in the weighted inner product, with the
/// split X = X^- (+) X^+ at zero.
struct SpectralSplit {
  Eigen::VectorXd eigenvalues;   // ascending, discrete operator
  Eigen::MatrixXd modes;         // full-length columns, |phi_i|_2 = 1
  Eigen::VectorXd extrapolated;  // h^2-extrapolated eigenvalues (empty if not requested)
  Eigen::VectorXd discretization_error;
  Index negative_count = 0;  // dim X^-
  double gap = 0.0;
  double degeneracy_tol = 0.0;
  double spectral_span = 0.0;
  std::vector<Index> degenerate;  // 0-based indices flagged as zero eigenvalues
  double max_residual = 0.0;      // max_i |(-Delta+V) phi_i - lambda_i phi_i|_2 / max(1, |lambda_i|)
  double orthogonality_error = 0.0;
  EigenMethod method = EigenMethod::Dense;

  Index count() const { return eigenvalues.size(); }
  bool is_degenerate() const { return !degenerate.empty(); }
  Eigen::VectorXd mode(Index i) const { return modes.col(i); }
};

/// Generalised operator K + W V on the active block (the form 2B).
SymTridiagonal quadratic_form_matrix(const Problem& problem, const Grid& grid);

SpectralSplit eigenpairs(const Problem& problem, const Grid& grid, Index count, const EigenOptions& opts = {});

/// eta = min(lambda_{l+1} / (lambda_{l+1} + m), -lambda_l / (lambda_l + m)).
double coercivity_eta(const SpectralSplit& split, double shift);

/// beta_k = (lambda_k + m)^{-1/2}, k is 1-based.
double beta(const SpectralSplit& split, double shift, Index k);

enum class Subspace { Minus, Plus };

/// L2-orthogonal projection onto X^- or its complement.
Field project(const SpectralSplit& split, const Grid& grid, const Field& field, Subspace which);

/// Independent check of eta from the quadratic forms alone.
struct RayleighExtrema {
  double minus_max = 0.0;  // max over X^- of 2B(v)/|v|^2  (equals -eta_minus)
  double plus_min = 0.0;   // min over X^+ of 2B(v)/|v|^2  (equals eta_plus)
  double eta = 0.0;        // min(plus_min, -minus_max)
  double sampled_minus_max = -1.0;  // worst random sample in X^-
  double sampled_plus_min = 1.0;    // worst random sample in X^+
  std::size_t samples = 0;
};

RayleighExtrema rayleigh_extrema(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                 std::size_t samples = 1000, std::uint64_t seed = 7);

/// max |v|_2 / |v| over the discrete tail space orthogonal to phi_1..phi_{k-1}
/// by power iteration on A^{-1} W; k is 1-based.
double tail_space_beta(const Problem& problem, const Grid& grid, const SpectralSplit& split, Index k,
                       std::uint64_t seed = 11);

}  // namespace qsw

#endif  // QSW_SPECTRUM_HPP
