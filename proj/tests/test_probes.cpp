#include <cmath>

#include <doctest.h>

#include "qsw/probes.hpp"

using namespace qsw;

namespace {

struct Setup {
  Grid grid;
  Problem problem;
  SpectralSplit split;
};

Setup make(double omega) {
  Grid g = Grid::make(1, 6.0, 2001);
  Problem p{Potential::harmonic(omega), Nonlinearity::power(6.0, 6.0), 1, 0.0};
  p.shift = choose_shift(p.potential, g);
  SpectralSplit s = eigenpairs(p, g, 8);
  return {g, p, s};
}

}  // namespace

TEST_CASE("local linking holds near 0 for the indefinite oscillator") {
  const Setup s = make(4.0);
  const LocalLinkingProbe r = local_linking_probe(s.problem, s.grid, s.split, 1e-2, 200);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.minus_max <= 1e-12);
  CHECK(r.plus_min > 0.0);
  CHECK(r.violating.size() == 0);
}

TEST_CASE("local linking fails on a large sphere") {
  const Setup s = make(4.0);
  const LocalLinkingProbe r = local_linking_probe(s.problem, s.grid, s.split, 50.0, 50);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.violating.size() == s.grid.size());
}

TEST_CASE("anti-coercivity on a modal span and the descent criterion") {
  const Setup s = make(4.0);
  std::vector<Field> basis;
  for (Index i = 0; i < 5; ++i) basis.push_back(s.split.mode(i));
  const AntiCoercivityProbe ac = anti_coercivity_probe(s.problem, s.grid, basis, {20.0, 40.0, 80.0}, 50);
  CHECK(ac.verdict == Verdict::Pass);
  CHECK(ac.rays.size() == 50);
  for (const auto& ray : ac.rays) CHECK(ray.values.back() < 0.0);
  const DescentProbe dp = descent_probe(s.problem, s.grid, ac);
  CHECK(dp.verdict == Verdict::Pass);
  CHECK(dp.tested > 0);
  CHECK(dp.failures == 0);
  CHECK(dp.worst_derivative < 0.0);
}

TEST_CASE("probes are reproducible for a fixed seed") {
  const Setup s = make(4.0);
  const auto a = local_linking_probe(s.problem, s.grid, s.split, 1e-2, 20, 77);
  const auto b = local_linking_probe(s.problem, s.grid, s.split, 1e-2, 20, 77);
  CHECK(a.minus_max == b.minus_max);
  CHECK(a.plus_min == b.plus_min);
}

TEST_CASE("definite problem: empty X^- side") {
  const Setup s = make(-1.0);
  const LocalLinkingProbe r = local_linking_probe(s.problem, s.grid, s.split, 1e-2, 50);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.plus_min > 0.0);
}

TEST_CASE("L2-unit directions are larger in X than X-unit ones") {
  const Setup s = make(4.0);
  std::vector<Field> basis;
  for (Index i = 0; i < 5; ++i) basis.push_back(s.split.mode(i));
  const auto l2 = anti_coercivity_probe(s.problem, s.grid, basis, {20.0}, 10, 3, DirectionNorm::L2);
  const Energy e(s.problem, s.grid);
  for (const auto& ray : l2.rays) {
    CHECK(l2_inner(s.grid, ray.direction, ray.direction) == doctest::Approx(1.0));
    // V~ >= 2 on the grid, so |w|_X >= sqrt(2) |w|_2
    CHECK(e.x_norm(ray.direction) >= std::sqrt(2.0));
  }
}
