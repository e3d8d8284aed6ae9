#include <cmath>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "qsw/errors.hpp"
#include "qsw/spectrum.hpp"

using namespace qsw;

namespace {

Problem oscillator(double omega, const Grid& g) {
  Problem p{Potential::harmonic(omega), Nonlinearity::power(6.0, 6.0), 1, 0.0};
  p.shift = choose_shift(p.potential, g);
  return p;
}

// Textbook three-point finite differences for -u'' + x^2 u with u(+-R) = 0,
// assembled and solved densely.
Eigen::VectorXd dense_fd_oracle(double radius, Index n, double omega) {
  const Index m = n - 2;
  const double h = 2.0 * radius / static_cast<double>(n - 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    const double x = -radius + (i + 1) * h;
    a(i, i) = 2.0 / (h * h) + x * x - omega;
    if (i + 1 < m) a(i, i + 1) = a(i + 1, i) = -1.0 / (h * h);
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("bisection and dense paths agree with an independent dense oracle") {
  const Grid g = Grid::make(1, 12.0, 401);
  const Problem p = oscillator(0.0, g);
  const Eigen::VectorXd ref = dense_fd_oracle(12.0, 401, 0.0);
  for (EigenMethod m : {EigenMethod::Dense, EigenMethod::Tridiagonal}) {
    EigenOptions o;
    o.method = m;
    o.extrapolate = false;
    const SpectralSplit s = eigenpairs(p, g, 10, o);
    for (Index i = 0; i < 10; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-11));
    CHECK(s.orthogonality_error < 1e-10);
    CHECK(s.max_residual < 1e-9);
  }
}

TEST_CASE("harmonic oscillator: extrapolated eigenvalues match 2i - 1") {
  const Grid g = Grid::make(1, 12.0, 2401);
  const SpectralSplit s = eigenpairs(oscillator(0.0, g), g, 10);
  for (Index i = 0; i < 10; ++i) {
    const double exact = 2.0 * (i + 1) - 1.0;
    CHECK(std::abs(s.extrapolated[i] - exact) <= 1e-6 * exact);
    CHECK(std::abs(s.eigenvalues[i] - exact) <= 2e-3 * exact);  // raw: O(h^2)
  }
  CHECK(s.negative_count == 0);
  CHECK_FALSE(s.is_degenerate());
}

TEST_CASE("V = x^2 - 4 has l = 2 and V = x^2 - 3 is degenerate") {
  const Grid g = Grid::make(1, 12.0, 2401);
  const SpectralSplit s4 = eigenpairs(oscillator(4.0, g), g, 10);
  CHECK(s4.negative_count == 2);
  CHECK_FALSE(s4.is_degenerate());
  CHECK(s4.gap == doctest::Approx(1.0).epsilon(1e-3));
  const SpectralSplit s3 = eigenpairs(oscillator(3.0, g), g, 10);
  CHECK(s3.is_degenerate());
  REQUIRE(s3.degenerate.size() == 1);
  CHECK(s3.degenerate.front() == 1);
}

TEST_CASE("eta = 1/7 for V = x^2 - 4 with m = 6, and the quadratic forms agree") {
  const Grid g = Grid::make(1, 12.0, 2401);
  const Problem p = oscillator(4.0, g);
  CHECK(p.shift == doctest::Approx(6.0));
  const SpectralSplit s = eigenpairs(p, g, 10);
  const double eta = coercivity_eta(s, p.shift);
  CHECK(eta == doctest::Approx(1.0 / 7.0).epsilon(1e-5));  // discretisation error
  const RayleighExtrema r = rayleigh_extrema(p, g, s, 200);
  CHECK(std::abs(r.eta - eta) < 1e-8);
  CHECK(r.sampled_minus_max <= r.minus_max + 1e-12);
  CHECK(r.sampled_plus_min >= r.plus_min - 1e-12);
}

TEST_CASE("beta_k equals the tail-space maximum") {
  const Grid g = Grid::make(1, 12.0, 401);
  const Problem p = oscillator(4.0, g);
  const SpectralSplit s = eigenpairs(p, g, 11, {EigenMethod::Automatic, 512, false});
  for (Index k = 1; k <= 10; ++k) CHECK(std::abs(tail_space_beta(p, g, s, k) - beta(s, p.shift, k)) < 1e-8);
  CHECK(beta(s, p.shift, 1) == doctest::Approx(1.0 / std::sqrt(s.eigenvalues[0] + 6.0)));
}

TEST_CASE("eigen-decomposition split") {
  const Grid g = Grid::make(1, 8.0, 801);
  const Problem p = oscillator(4.0, g);
  const SpectralSplit s = eigenpairs(p, g, 6);
  const Field phi1 = s.mode(0);
  CHECK(l2_inner(g, phi1, phi1) == doctest::Approx(1.0));
  CHECK((project(s, g, phi1, Subspace::Minus) - phi1).norm() < 1e-10);
  CHECK(project(s, g, s.mode(3), Subspace::Minus).norm() < 1e-10);
  Field f = (g.nodes().array() * 0.3).sin() * (64.0 - g.nodes().array().square());
  g.constrain(f);
  CHECK((project(s, g, f, Subspace::Minus) + project(s, g, f, Subspace::Plus) - f).norm() < 1e-12);
  // the ground state is positive after sign normalisation
  CHECK(phi1.minCoeff() >= -1e-12);
}

TEST_CASE("radial spectrum: 3D oscillator ground state is 3") {
  const Grid g = Grid::make(3, 8.0, 1601);
  Problem p{Potential::harmonic(0.0), Nonlinearity::power(6.0, 6.0), 3, 0.0};
  p.shift = choose_shift(p.potential, g);
  const SpectralSplit s = eigenpairs(p, g, 3);
  // radial (l = 0) levels of the 3D oscillator: 3, 7, 11
  CHECK(s.extrapolated[0] == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(s.extrapolated[1] == doctest::Approx(7.0).epsilon(1e-5));
  CHECK(s.extrapolated[2] == doctest::Approx(11.0).epsilon(1e-5));
}

TEST_CASE("mode count out of range is a configuration error") {
  const Grid g = Grid::make(1, 4.0, 101);
  CHECK_THROWS_AS(eigenpairs(oscillator(0.0, g), g, 0), ConfigError);
  CHECK_THROWS_AS(eigenpairs(oscillator(0.0, g), g, 1000), ConfigError);
  // every requested eigenvalue negative
  CHECK_THROWS_AS(eigenpairs(oscillator(30.0, g), g, 2), ConfigError);
}
