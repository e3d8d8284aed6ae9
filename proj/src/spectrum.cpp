#include "qsw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "qsw/errors.hpp"

namespace qsw {

using Eigen::MatrixXd;
using Eigen::VectorXd;

SymTridiagonal quadratic_form_matrix(const Problem& problem, const Grid& grid) {
  const VectorXd w = grid.active(grid.weights());
  const VectorXd v = grid.active(sample_potential(problem, grid));
  return stiffness(grid).plus_diagonal(w.cwiseProduct(v));
}

namespace {

struct Eigs {
  VectorXd values;
  MatrixXd vectors;  // orthonormal in the Euclidean product
};

Eigs solve_symmetric(const SymTridiagonal& s, Index count, EigenMethod method, std::uint64_t seed) {
  Eigs out;
  if (method == EigenMethod::Dense) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s.dense());
    if (es.info() != Eigen::Success) throw NumericError("eigenpairs: dense eigensolver failed");
    out.values = es.eigenvalues().head(count);
    out.vectors = es.eigenvectors().leftCols(count);
  } else {
    out.values = smallest_eigenvalues(s, count);
    out.vectors = eigenvectors_by_inverse_iteration(s, out.values, seed);
  }
  return out;
}

// First clearly nonzero entry (scanning outwards from the lower end) is positive.
void fix_sign(Eigen::Ref<VectorXd> phi) {
  const double big = phi.cwiseAbs().maxCoeff();
  for (Index i = 0; i < phi.size(); ++i) {
    if (std::abs(phi[i]) > 1e-3 * big) {
      if (phi[i] < 0.0) phi = -phi;
      return;
    }
  }
}

}  // namespace

SpectralSplit eigenpairs(const Problem& problem, const Grid& grid, Index count, const EigenOptions& opts) {
  const Index m = grid.active_size();
  if (count < 1 || count > m) throw ConfigError("eigenpairs: requested mode count is out of range");
  const VectorXd w = grid.active(grid.weights());
  const SymTridiagonal form = quadratic_form_matrix(problem, grid);
  const SymTridiagonal sym = form.congruence(w);

  EigenMethod method = opts.method;
  if (method == EigenMethod::Automatic) method = m <= opts.dense_limit ? EigenMethod::Dense : EigenMethod::Tridiagonal;
  const Eigs eig = solve_symmetric(sym, count, method, opts.seed);

  SpectralSplit split;
  split.method = method;
  split.eigenvalues = eig.values;
  split.modes = MatrixXd::Zero(grid.size(), count);
  const VectorXd inv_sqrt_w = w.cwiseSqrt().cwiseInverse();
  for (Index j = 0; j < count; ++j) {
    VectorXd phi = eig.vectors.col(j).cwiseProduct(inv_sqrt_w);
    fix_sign(phi);
    split.modes.col(j).segment(grid.first_active(), grid.active_size()) = phi;
  }

  // A posteriori residual and orthonormality in the weighted product.
  for (Index j = 0; j < count; ++j) {
    const VectorXd phi = grid.active(split.modes.col(j));
    const VectorXd r = form.apply(phi).cwiseQuotient(w) - split.eigenvalues[j] * phi;
    const double res = std::sqrt(w.dot(r.cwiseProduct(r))) / std::max(1.0, std::abs(split.eigenvalues[j]));
    split.max_residual = std::max(split.max_residual, res);
    for (Index i = 0; i <= j; ++i) {
      const double ip = w.dot(phi.cwiseProduct(grid.active(split.modes.col(i))));
      split.orthogonality_error = std::max(split.orthogonality_error, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  }

  // Span of the computed part of the spectrum; the full discrete span grows like
  // h^-2 and would swamp the tolerance on fine grids.
  split.spectral_span = split.eigenvalues.maxCoeff() - split.eigenvalues.minCoeff();
  split.degeneracy_tol = 1e-8 * std::max(1.0, split.spectral_span);

  if (opts.extrapolate) {
    const Grid fine = grid.refined();
    const VectorXd wf = fine.active(fine.weights());
    const SymTridiagonal symf = quadratic_form_matrix(problem, fine).congruence(wf);
    const VectorXd lf = smallest_eigenvalues(symf, count);
    split.extrapolated = (4.0 * lf - split.eigenvalues) / 3.0;
    split.discretization_error = (split.eigenvalues - split.extrapolated).cwiseAbs();
  }

  for (Index i = 0; i < count; ++i) {
    const double lam = split.eigenvalues[i];
    bool flag = std::abs(lam) <= split.degeneracy_tol;
    if (opts.extrapolate)
      flag = flag ||
             std::abs(split.extrapolated[i]) <= split.degeneracy_tol + 2.0 * split.discretization_error[i];
    if (flag) split.degenerate.push_back(i);
    if (lam < 0.0) ++split.negative_count;
  }
  const Index l = split.negative_count;
  if (l + 1 > count) throw ConfigError("eigenpairs: every computed eigenvalue is negative; request more modes");
  split.gap = l == 0 ? split.eigenvalues[0] : std::min(-split.eigenvalues[l - 1], split.eigenvalues[l]);
  return split;
}

double coercivity_eta(const SpectralSplit& split, double shift) {
  if (split.is_degenerate()) throw NumericError("coercivity_eta: zero is (numerically) an eigenvalue");
  const Index l = split.negative_count;
  const double up = split.eigenvalues[l];
  double eta = up / (up + shift);
  if (l > 0) {
    const double down = split.eigenvalues[l - 1];
    eta = std::min(eta, -down / (down + shift));
  }
  return eta;
}

double beta(const SpectralSplit& split, double shift, Index k) {
  if (k < 1 || k > split.count()) throw ConfigError("beta: index out of range");
  return 1.0 / std::sqrt(split.eigenvalues[k - 1] + shift);
}

Field project(const SpectralSplit& split, const Grid& grid, const Field& field, Subspace which) {
  Field minus = grid.zeros();
  const VectorXd wf = grid.weights().cwiseProduct(field);
  for (Index i = 0; i < split.negative_count; ++i) minus += split.modes.col(i).dot(wf) * split.modes.col(i);
  return which == Subspace::Minus ? minus : Field(field - minus);
}

namespace {

double form_value(const Grid& grid, const VectorXd& potential, const Field& a, const Field& b) {
  return dirichlet_form(grid, a, b) + (grid.weights().array() * potential.array() * a.array() * b.array()).sum();
}

}  // namespace

RayleighExtrema rayleigh_extrema(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                 std::size_t samples, std::uint64_t seed) {
  RayleighExtrema out;
  const Index l = split.negative_count;
  const Index count = split.count();
  const VectorXd pot = sample_potential(problem, grid);
  const VectorXd pot_shift = pot.array() + problem.shift;

  auto quotient = [&](const Field& v) { return form_value(grid, pot, v, v) / form_value(grid, pot_shift, v, v); };

  if (l > 0) {
    MatrixXd b(l, l);
    MatrixXd g(l, l);
    for (Index i = 0; i < l; ++i)
      for (Index j = 0; j <= i; ++j) {
        b(i, j) = b(j, i) = form_value(grid, pot, split.modes.col(i), split.modes.col(j));
        g(i, j) = g(j, i) = form_value(grid, pot_shift, split.modes.col(i), split.modes.col(j));
      }
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(b, g);
    out.minus_max = ges.eigenvalues().maxCoeff();
  } else {
    out.minus_max = -std::numeric_limits<double>::infinity();
  }

  const double tail = tail_space_beta(problem, grid, split, l + 1, seed);
  out.plus_min = 1.0 - problem.shift * tail * tail;
  out.eta = l > 0 ? std::min(out.plus_min, -out.minus_max) : out.plus_min;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  out.sampled_minus_max = -std::numeric_limits<double>::infinity();
  out.sampled_plus_min = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    if (l > 0) {
      Field v = grid.zeros();
      for (Index i = 0; i < l; ++i) v += normal(rng) * split.modes.col(i);
      out.sampled_minus_max = std::max(out.sampled_minus_max, quotient(v));
    }
    Field v = grid.zeros();
    for (Index i = l; i < count; ++i) v += normal(rng) * split.modes.col(i);
    if (s % 4 == 3) {
      Field noise = grid.zeros();
      for (Index i = 0; i < grid.active_size(); ++i) grid.active(noise)[i] = normal(rng);
      v += 1e-2 * project(split, grid, noise, Subspace::Plus);
      grid.constrain(v);
    }
    out.sampled_plus_min = std::min(out.sampled_plus_min, quotient(v));
  }
  out.samples = samples;
  return out;
}

double tail_space_beta(const Problem& problem, const Grid& grid, const SpectralSplit& split, Index k,
                       std::uint64_t seed) {
  if (k < 1 || k > split.count()) throw ConfigError("tail_space_beta: index out of range");
  const VectorXd w = grid.active(grid.weights());
  const VectorXd vt = grid.active(sample_potential(problem, grid)).array() + problem.shift;
  const SymTridiagonal a = stiffness(grid).plus_diagonal(w.cwiseProduct(vt));
  const SpdTridiagonalSolver solver(a);

  MatrixXd basis(grid.active_size(), k - 1);
  for (Index i = 0; i + 1 < k; ++i) basis.col(i) = grid.active(split.modes.col(i));
  auto deflate = [&](VectorXd& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i + 1 < k; ++i) v -= basis.col(i).dot(w.cwiseProduct(v)) * basis.col(i);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VectorXd v(grid.active_size());
  for (Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  deflate(v);
  double theta = 0.0;
  for (int it = 0; it < 200000; ++it) {
    const double anorm = std::sqrt(v.dot(a.apply(v)));
    v /= anorm;
    VectorXd y = solver.solve(w.cwiseProduct(v));
    deflate(y);
    theta = v.dot(w.cwiseProduct(v));
    const VectorXd r = y - theta * v;
    const double res = std::sqrt(r.dot(a.apply(r)));
    v = y;
    if (res <= 1e-10 * theta) break;
  }
  return std::sqrt(theta);
}

}  // namespace qsw
