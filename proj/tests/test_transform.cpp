#include <cmath>
#include <limits>

#include <doctest.h>

#include "oracles.hpp"
#include "qsw/transform.hpp"

using qsw::TransformTable;

TEST_CASE("inverse F matches quadrature of sqrt(1 + 2u^2)") {
  for (double u : {0.1, 0.5, 1.0, 3.0, 20.0}) {
    const double q = oracle::simpson([](double s) { return std::sqrt(1.0 + 2.0 * s * s); }, 0.0, u, 2000);
    CHECK(TransformTable::f_inverse(u) == doctest::Approx(q).epsilon(1e-12));
  }
  // frozen: mpmath at 40 digits
  CHECK(TransformTable::f_inverse(1.0) == doctest::Approx(1.2712738985228155).epsilon(1e-15));
}

TEST_CASE("f agrees with a long double RK4 integration of its ODE") {
  const TransformTable tr;
  const long double step = 1e-3L;
  const int every = 100;  // compare every 0.1
  const auto ref = oracle::rk4_transform(20.0L, step, every);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double t = 0.1 * static_cast<double>(i);
    worst = std::max(worst, std::abs(tr.f(t) - static_cast<double>(ref[i])));
    worst = std::max(worst, std::abs(tr.f(-t) + static_cast<double>(ref[i])));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("f at reference points") {
  const TransformTable tr;
  // frozen: mpmath root of F(u) = t at 40 digits
  CHECK(tr.f(0.5) == doctest::Approx(0.46782165907056834).epsilon(2e-15));
  CHECK(tr.f(1.0) == doctest::Approx(0.83442474148327925).epsilon(2e-15));
  CHECK(tr.f(10.0) == doctest::Approx(3.5684422734494365).epsilon(2e-15));
  CHECK(tr.f(100.0) == doctest::Approx(11.807493583103932).epsilon(2e-15));
  CHECK(tr.f(1e4) == doctest::Approx(118.90742865143205).epsilon(2e-15));
  CHECK(tr.f(1e8) == doctest::Approx(11892.070920392106).epsilon(2e-15));
  CHECK(tr.f(1e12) == doctest::Approx(1189207.1149994566).epsilon(2e-15));
  CHECK(tr.f(1e-8) == doctest::Approx(1e-8).epsilon(1e-15));
  CHECK(tr.f(0.0) == 0.0);
}

TEST_CASE("f is odd and inverts F") {
  const TransformTable tr;
  for (double t : qsw::log_samples(1e-8, 1e8, 400)) {
    CHECK(tr.f(-t) == -tr.f(t));
    CHECK(TransformTable::f_inverse(tr.f(t)) == doctest::Approx(t).epsilon(1e-14));
  }
}

TEST_CASE("asymptotic branch is continuous with Newton at the switch") {
  TransformTable::Options o;
  o.asymptotic_switch = std::numeric_limits<double>::infinity();
  const TransformTable newton_only(o);
  const TransformTable tr;
  for (double t : {1e8, 2e8, 1e10}) CHECK(tr.f(t) == doctest::Approx(newton_only.f(t)).epsilon(1e-14));
}

TEST_CASE("derivatives match finite differences") {
  const TransformTable tr;
  for (double t : {-7.0, -0.3, 0.2, 1.0, 4.0, 50.0}) {
    const double h = 1e-5 * std::max(1.0, std::abs(t));
    const double fd1 = (tr.f(t + h) - tr.f(t - h)) / (2 * h);
    const double fd2 = (tr.f_prime(t + h) - tr.f_prime(t - h)) / (2 * h);
    CHECK(tr.f_prime(t) == doctest::Approx(fd1).epsilon(1e-8));
    CHECK(tr.f_second(t) == doctest::Approx(fd2).epsilon(1e-6));
  }
}

TEST_CASE("second derivative carries the factor 2") {
  // f'' = -2 f f'^4: differentiate f' = (1 + 2f^2)^{-1/2}.
  const TransformTable tr;
  const double u = tr.f(1.5);
  const double d = 1.0 / std::sqrt(1.0 + 2.0 * u * u);
  CHECK(tr.f_second(1.5) == doctest::Approx(-2.0 * u * std::pow(d, 4)).epsilon(1e-15));
}

TEST_CASE("non-finite arguments are rejected") {
  const TransformTable tr;
  CHECK_THROWS_AS(tr.f(std::numeric_limits<double>::quiet_NaN()), qsw::DomainError);
  CHECK_THROWS_AS(tr.f(std::numeric_limits<double>::infinity()), qsw::DomainError);
}

TEST_CASE("sampled inequalities hold") {
  const TransformTable tr;
  const auto rep = qsw::verify_p1(tr, qsw::log_samples(1e-8, 1e8, 10000, true));
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.passed);
  }
  CHECK(rep.kappa_reported == doctest::Approx(0.83442474148327925).epsilon(1e-15));
  CHECK(rep.kappa_hat >= rep.kappa_reported * (1 - 1e-12));
  CHECK(rep.c_lambda == 4.0);
  CHECK(rep.c_lambda_hat <= rep.c_lambda * (1 + 1e-12));
}

TEST_CASE("l0 inequality for the shifted quintic") {
  const TransformTable tr;
  for (double m : {0.0, 1.0, 6.0}) {
    const auto rep = qsw::verify_l0(tr, [m](double t) { return std::pow(t, 5) + m * t; },
                                    qsw::log_samples(1e-6, 1e6, 2000, true));
    CHECK(rep.all_passed());
  }
}

TEST_CASE("log samples") {
  const auto s = qsw::log_samples(1e-2, 1e2, 5);
  REQUIRE(s.size() == 5);
  CHECK(s.front() == doctest::Approx(1e-2));
  CHECK(s[2] == doctest::Approx(1.0));
  CHECK(s.back() == doctest::Approx(1e2));
  CHECK(qsw::log_samples(1e-2, 1e2, 5, true).size() == 10);
}
