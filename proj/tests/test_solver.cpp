#include <cmath>

#include <doctest.h>

#include "qsw/errors.hpp"
#include "qsw/solver.hpp"

using namespace qsw;

namespace {

Problem oscillator(double omega, const Grid& g) {
  Problem p{Potential::harmonic(omega), Nonlinearity::power(6.0, 6.0), 1, 0.0};
  p.shift = choose_shift(p.potential, g);
  return p;
}

// Residual tolerance for the small grids used here; the O(h^2) residual at
// n = 2001 sits near 5e-5.
SolveOptions coarse_options() {
  SolveOptions o;
  o.res_tol = 1e-3;
  return o;
}

}  // namespace

TEST_CASE("sign changes") {
  Field u(7);
  u << 0, 1, 2, 0, -1, -1e-20, 3;
  CHECK(count_sign_changes(u) == 2);
  CHECK(count_sign_changes(Field::Zero(4)) == 0);
}

TEST_CASE("definite case: mountain pass gives a positive ground state") {
  const Grid g = Grid::make(1, 6.0, 2001);
  const Problem p = oscillator(-1.0, g);
  const SpectralSplit s = eigenpairs(p, g, 6);
  REQUIRE(s.negative_count == 0);
  const SolveReport r = mountain_pass_solve(p, g, s, coarse_options());
  CHECK(r.converged);
  CHECK(r.grad_norm <= 1e-8);
  CHECK(r.phi > 0.0);
  CHECK(r.sign_changes == 0);
  CHECK(std::abs(r.energy_J - r.phi) <= 1e-6 * r.phi);
  Field u = r.u;
  if (u.sum() < 0) u = -u;
  CHECK(u.minCoeff() >= -1e-12);
  CHECK(r.morse_index == 1);
  CHECK_FALSE(r.log.empty());
}

TEST_CASE("indefinite case: local minimax finds a nontrivial critical point") {
  const Grid g = Grid::make(1, 6.0, 2001);
  const Problem p = oscillator(4.0, g);
  const SpectralSplit s = eigenpairs(p, g, 12);
  REQUIRE(s.negative_count == 2);
  const SolveReport r = local_linking_solve(p, g, s, coarse_options());
  CHECK(r.converged);
  CHECK_FALSE(r.trivial);
  CHECK(r.grad_norm <= 1e-8);
  CHECK(r.pde_residual <= 1e-3);
  // the same critical value on the fine two-grid run is 11.0832
  CHECK(r.phi == doctest::Approx(11.0832).epsilon(1e-4));

  SUBCASE("Newton returns to the same point from a perturbation") {
    const Field v0 = r.v + 1e-3 * s.mode(4);
    const SolveReport n = newton_refine(p, g, v0, coarse_options());
    CHECK(n.converged);
    CHECK((n.v - r.v).norm() <= 1e-6 * r.v.norm());
  }
  SUBCASE("a point is not distinct from itself or its negative") {
    SolveReport neg = r;
    neg.v = -r.v;
    CHECK_FALSE(distinct_solutions(g, r, r, {}));
    CHECK_FALSE(distinct_solutions(g, r, neg, {}));
  }
}

TEST_CASE("two-grid transfer recovers the fine-grid critical point") {
  const Grid fine = Grid::make(1, 6.0, 4001);
  const Problem p = oscillator(4.0, fine);
  const SpectralSplit s = eigenpairs(p, fine, 12);
  SolveOptions o = coarse_options();
  o.coarse_nodes = 1001;
  const SolveReport r = local_linking_solve(p, fine, s, o);
  CHECK(r.converged);
  CHECK(r.v.size() == fine.size());
  CHECK(r.pde_residual < 5e-5);
}

TEST_CASE("growth fit: C1 vanishes for the quintic") {
  Problem p{Potential::harmonic(4.0), Nonlinearity::power(6.0, 6.0), 1, 6.0};
  const GrowthFit fit = fit_growth_bound(p);
  CHECK(fit.c1 == 0.0);
  CHECK(fit.c2 > 0.0);
  const TransformTable tr;
  for (double t : log_samples(1e-4, 1e4, 200)) {
    const double u = tr.f(t);
    CHECK(std::abs(p.G(u)) <= fit.c1 * t * t + fit.c2 * std::pow(t, 3.0) * (1 + 1e-12));
  }
}

TEST_CASE("multiplicity on a small grid") {
  const Grid g = Grid::make(1, 6.0, 2001);
  const Problem p = oscillator(4.0, g);
  const SpectralSplit s = eigenpairs(p, g, 12);
  const MultiplicityReport m = multiplicity_search(p, g, s, 3, coarse_options());
  CHECK(m.complete);
  REQUIRE(m.solutions.size() >= 3);
  for (std::size_t i = 1; i < m.solutions.size(); ++i) {
    CHECK(m.solutions[i].phi - m.solutions[i - 1].phi >= 1e-6);
    CHECK(m.solutions[i].sign_changes >= m.solutions[i - 1].sign_changes);
  }
  for (double gn : m.negative_grad_norms) CHECK(gn <= 1e-8);
  CHECK(m.eta > 0.0);
  CHECK(m.lambda_k > 0.0);
}

TEST_CASE("continuation switches mode with l and skips the crossing") {
  const Grid g = Grid::make(1, 6.0, 2001);
  Problem base{Potential::harmonic(0.0), Nonlinearity::power(6.0, 6.0), 1, 0.0};
  const auto pts = continuation_in_omega(base, g, {0.0, 2.0, 3.0, 4.0}, 12, coarse_options());
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].negative_count == 0);
  CHECK(pts[0].mode == SolveMode::MountainPass);
  CHECK(pts[1].negative_count == 1);
  CHECK(pts[1].mode == SolveMode::LocalLinking);
  CHECK(pts[2].degenerate);
  CHECK_FALSE(pts[2].solved);
  CHECK(pts[3].negative_count == 2);
  for (int i : {0, 1, 3}) {
    CHECK(pts[i].solved);
    CHECK(pts[i].shift == doctest::Approx(2.0 + pts[i].omega));
  }
  CHECK_THROWS_AS(continuation_in_omega(base, g, {2.0, 1.0}, 12), ConfigError);
}

TEST_CASE("make_report of the trivial point") {
  const Grid g = Grid::make(1, 6.0, 201);
  const Problem p = oscillator(4.0, g);
  const Energy e(p, g);
  const SolveReport r = make_report(e, g.zeros(), SolveMode::Refine, {});
  CHECK(r.trivial);
  CHECK_FALSE(r.converged);
}
