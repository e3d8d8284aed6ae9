#include <cmath>
#include <random>

#include <doctest.h>

#include "qsw/energy.hpp"

using namespace qsw;

namespace {

Problem builtin(int which, const Grid& g) {
  Problem p{which == 0   ? Potential::harmonic(4.0)
            : which == 1 ? Potential::harmonic(-1.0)
                         : Potential::quartic(10.0),
            Nonlinearity::power(6.0, 6.0), g.dimension(), 0.0};
  p.shift = choose_shift(p.potential, g);
  return p;
}

Field random_field(const Grid& g, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n;
  // smooth random combination of bumps
  Field f = g.zeros();
  const Eigen::ArrayXd x = g.nodes().array();
  for (int k = 1; k <= 6; ++k) f += (scale * n(rng) / k) * (k * x * M_PI / (2.0 * g.radius()) + n(rng)).sin().matrix();
  f = f.cwiseProduct(Field((1.0 - (x / g.radius()).square()).matrix()));
  g.constrain(f);
  return f;
}

}  // namespace

TEST_CASE("Phi and J vanish at 0") {
  const Grid g = Grid::make(1, 6.0, 201);
  const Energy e(builtin(0, g), g);
  CHECK(e.value(g.zeros()) == 0.0);
  CHECK(e.gradient_norm(g.zeros()) == 0.0);
}

TEST_CASE("pairing matches central differences of Phi") {
  std::mt19937_64 rng(42);
  for (int which = 0; which < 3; ++which) {
    const Grid g = Grid::make(1, 4.0, 401);
    const Energy e(builtin(which, g), g);
    for (int s = 0; s < 20; ++s) {
      const Field v = random_field(g, rng, 1.5);
      const Field w = random_field(g, rng, 1.0);
      const double eps = 1e-5;
      const double fd = (e.value(v + eps * w) - e.value(v - eps * w)) / (2 * eps);
      CHECK(e.pairing(v, w) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("gradient representatives are consistent") {
  std::mt19937_64 rng(3);
  const Grid g = Grid::make(1, 5.0, 301);
  const Energy e(builtin(0, g), g);
  const Field v = random_field(g, rng, 1.0);
  const Field w = random_field(g, rng, 1.0);
  const Field d = e.dual_gradient(v);
  CHECK(d.dot(w) == doctest::Approx(e.pairing(v, w)));
  CHECK(l2_inner(g, e.gradient(v), w) == doctest::Approx(e.pairing(v, w)).epsilon(1e-10));
  CHECK(e.x_inner(e.sobolev_gradient(v), w) == doctest::Approx(e.pairing(v, w)).epsilon(1e-10));
  const Field sg = e.sobolev_gradient(v);
  CHECK(e.gradient_norm(v) == doctest::Approx(e.x_norm(sg)).epsilon(1e-10));
}

TEST_CASE("energy identity J(f(v)) = Phi(v)") {
  std::mt19937_64 rng(5);
  for (int which = 0; which < 3; ++which) {
    const Grid g = Grid::make(1, 4.0, 401);
    const Energy e(builtin(which, g), g);
    for (int s = 0; s < 5; ++s) {
      const Field v = random_field(g, rng, 2.0);
      const double phi = e.value(v);
      CHECK(std::abs(e.energy_J(e.to_u(v)) - phi) <= 1e-8 * std::max(1.0, std::abs(phi)));
    }
  }
}

TEST_CASE("tridiagonal Hessian matches differences of the gradient") {
  std::mt19937_64 rng(9);
  const Grid g = Grid::make(1, 4.0, 301);
  const Energy e(builtin(0, g), g);
  const Field v = random_field(g, rng, 1.5);
  const Field w = random_field(g, rng, 1.0);
  const SymTridiagonal h = e.hessian_tridiagonal(v);
  const Eigen::VectorXd exact = h.apply(Eigen::VectorXd(g.active(w)));
  const Eigen::VectorXd fd = g.active(e.hessian_vec_dual(v, w));
  CHECK((exact - fd).norm() <= 1e-6 * exact.norm());
}

TEST_CASE("Hessian at 0 is the quadratic form of the linearisation") {
  const Grid g = Grid::make(1, 4.0, 201);
  const Problem p = builtin(0, g);
  const Energy e(p, g);
  const SymTridiagonal h0 = e.hessian_tridiagonal(g.zeros());
  const SymTridiagonal q = q_hessian_origin(p, g);
  Field w = (g.nodes().array() * 0.8).cos();
  g.constrain(w);
  const Eigen::VectorXd wa = g.active(w);
  CHECK((h0.apply(wa) - q.apply(wa)).norm() <= 1e-12 * q.apply(wa).norm());
}

TEST_CASE("manufactured solution: residual falls at fourth order") {
  // u = exp(-x^2); forcing = -u'' + V u - u (u^2)'' - u^5 with V = x^2 - 4.
  auto residual = [](Index n) {
    const Grid g = Grid::make(1, 6.0, n);
    const Problem p = builtin(0, g);
    const Energy e(p, g);
    const Eigen::ArrayXd x = g.nodes().array();
    const Eigen::ArrayXd u = (-x.square()).exp();
    const Eigen::ArrayXd upp = (4.0 * x.square() - 2.0) * u;
    const Eigen::ArrayXd u2pp = (16.0 * x.square() - 4.0) * (-2.0 * x.square()).exp();
    const Eigen::ArrayXd v = x.square() - 4.0;
    Field forcing = (-upp + v * u - u * u2pp - u.pow(5)).matrix();
    Field uf = u.matrix();
    g.constrain(uf);
    return e.pde_residual(uf, &forcing).value;
  };
  const double r1 = residual(401), r2 = residual(801);
  INFO(r1 << " " << r2);
  CHECK(r1 < 1e-4);
  CHECK(r1 / r2 > 12.0);
}

TEST_CASE("rho and breakdown") {
  const Grid g = Grid::make(1, 4.0, 201);
  const Energy e(builtin(0, g), g);
  Field v = (g.nodes().array() * M_PI / 8.0).cos();
  g.constrain(v);
  const EnergyBreakdown b = e.breakdown(v);
  CHECK(b.total == doctest::Approx(b.dirichlet + b.potential - b.nonlinear));
  CHECK(b.rho > 0.0);
}

TEST_CASE("directional derivative criterion far out on a ray") {
  const Grid g = Grid::make(1, 6.0, 401);
  const Energy e(builtin(0, g), g);
  Field w = (-g.nodes().array().square()).exp();
  g.constrain(w);
  w /= e.x_norm(w);
  const L4Probe far = e.lemma_l4_probe(Field(80.0 * w), 1.0);
  CHECK(far.verdict == Verdict::Pass);
  CHECK(far.phi < -1.0);
  CHECK(far.derivative < 0.0);
  CHECK(e.lemma_l4_probe(Field(1e-3 * w), 1.0).verdict == Verdict::NotApplicable);
}
