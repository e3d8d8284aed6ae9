#include <cmath>

#include <doctest.h>

#include "qsw/errors.hpp"
#include "qsw/grid.hpp"
#include "qsw/model.hpp"

using namespace qsw;

namespace {

Problem make(Potential v, Nonlinearity g, int dim, const Grid& grid) {
  Problem p{std::move(v), std::move(g), dim, 0.0};
  p.shift = choose_shift(p.potential, grid);
  return p;
}

}  // namespace

TEST_CASE("shift examples") {
  const Grid g = Grid::make(1, 12.0, 401);
  CHECK(choose_shift(Potential::constant(5.0), g) == 0.0);
  CHECK(choose_shift(Potential::harmonic(4.0), g) == doctest::Approx(6.0));
  CHECK(choose_shift(Potential::quartic(10.0), g) == doctest::Approx(12.0));
  CHECK(choose_shift(Potential::constant(-3.0), g) == doctest::Approx(5.0));
}

TEST_CASE("unbounded below potential is a configuration error") {
  const Grid g = Grid::make(1, 12.0, 401);
  CHECK_THROWS_AS(choose_shift(Potential::constant(-1e13), g), ConfigError);
}

TEST_CASE("shifted data") {
  Problem p{Potential::harmonic(4.0), Nonlinearity::power(6.0, 6.0), 1, 6.0};
  CHECK(p.vtilde(0.0) == 2.0);
  CHECK(p.gtilde(2.0) == doctest::Approx(32.0 + 12.0));
  CHECK(p.Gtilde(2.0) == doctest::Approx(64.0 / 6.0 + 12.0));
}

TEST_CASE("quintic satisfies every hypothesis, with equality in (g1)") {
  const Grid g = Grid::make(3, 8.0, 401);
  const Problem p = make(Potential::harmonic(4.0), Nonlinearity::power(6.0, 6.0), 3, g);
  const ValidationReport rep = validate(p, g);
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.passed);
  }
  const auto* g1 = rep.find("(g1) 0 < mu G(t) <= t g(t)");
  REQUIRE(g1 != nullptr);
  CHECK(std::abs(g1->worst) < 1e-14);
  for (double t : {0.3, 2.0, 17.0}) CHECK(6.0 * p.G(t) == doctest::Approx(t * p.g(t)).epsilon(1e-15));
}

TEST_CASE("vtilde minimum on a grid through 0") {
  const Grid g = Grid::make(1, 12.0, 2401);
  const Problem p = make(Potential::harmonic(4.0), Nonlinearity::power(6.0, 6.0), 1, g);
  const ValidationReport rep = validate(p, g);
  CHECK(rep.vtilde_min == doctest::Approx(2.0));
  CHECK(rep.passed());
  const auto* ex = rep.find("(g0) exponent p in (4, 2*2^*)");
  REQUIRE(ex != nullptr);
  CHECK(ex->warning);  // N = 1
}

TEST_CASE("cubic fails (g1) for every mu > 4") {
  const Grid g = Grid::make(1, 6.0, 201);
  for (double mu : {4.5, 6.0, 10.0}) {
    const Problem p = make(Potential::harmonic(0.0), Nonlinearity::power(4.0, mu), 1, g);
    const ValidationReport rep = validate(p, g);
    const auto* g1 = rep.find("(g1) 0 < mu G(t) <= t g(t)");
    REQUIRE(g1 != nullptr);
    CHECK_FALSE(g1->passed);
    CHECK_FALSE(rep.passed());
  }
}

TEST_CASE("exponent above 2 * 2^* is rejected in N = 3") {
  const Grid g = Grid::make(3, 6.0, 201);
  CHECK(critical_growth_bound(3) == doctest::Approx(12.0));
  CHECK(std::isinf(critical_growth_bound(2)));
  const Problem p = make(Potential::harmonic(0.0), Nonlinearity::power(13.0, 13.0), 3, g);
  CHECK_FALSE(validate(p, g).find("(g0) exponent p in (4, 2*2^*)")->passed);
}

TEST_CASE("non-confining potential fails the surrogate") {
  const Grid g = Grid::make(1, 6.0, 201);
  const Problem p = make(Potential::table({-6.0, 0.0, 6.0}, {0.0, 5.0, 0.0}), Nonlinearity::power(6.0, 6.0), 1, g);
  CHECK_FALSE(validate(p, g).find("(V) confining on the truncated domain")->passed);
}

TEST_CASE("G~(t)/t^2 grows without bound along powers of two") {
  Problem p{Potential::harmonic(4.0), Nonlinearity::power(6.0, 6.0), 1, 6.0};
  bool exceeded = false;
  for (int k = 1; k <= 40 && !exceeded; ++k) {
    const double t = std::ldexp(1.0, k);
    CHECK(p.Gtilde(t) >= 0.0);
    exceeded = p.Gtilde(t) / (t * t) > 1e6;
  }
  CHECK(exceeded);
}

TEST_CASE("power nonlinearities are exactly odd") {
  for (double pw : {4.0, 5.5, 6.0}) {
    const auto n = Nonlinearity::power(pw, pw);
    for (double t : {1e-3, 0.7, 3.0, 1e3}) {
      CHECK(n.g(-t) == -n.g(t));
      CHECK(n.g_prime(t) == doctest::Approx((pw - 1) * std::pow(t, pw - 2)).epsilon(1e-13));
    }
  }
}

TEST_CASE("table potential interpolates linearly and is constant outside") {
  const auto v = Potential::table({0.0, 1.0, 3.0}, {1.0, 3.0, 7.0});
  CHECK(v(0.5) == doctest::Approx(2.0));
  CHECK(v(2.0) == doctest::Approx(5.0));
  CHECK(v(-1.0) == 1.0);
  CHECK(v(9.0) == 7.0);
  CHECK(v.declared_inf() == 1.0);
  CHECK_THROWS_AS(Potential::table({0.0, 0.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("frequency shift replaces omega") {
  const auto v = Potential::harmonic(0.0).with_omega(4.0);
  CHECK(v(1.0) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(Potential::constant(1.0).with_omega(2.0), ConfigError);
}
