#include "qsw/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsw/errors.hpp"
#include "qsw/grid.hpp"
#include "qsw/transform.hpp"

namespace qsw {

Potential Potential::harmonic(double omega) {
  Potential p;
  p.kind_ = PotentialKind::Harmonic;
  p.name_ = "harmonic";
  p.omega_ = omega;
  p.declared_inf_ = -omega;
  p.eval_ = [omega](double x) { return x * x - omega; };
  return p;
}

Potential Potential::quartic(double omega) {
  Potential p;
  p.kind_ = PotentialKind::Quartic;
  p.name_ = "quartic";
  p.omega_ = omega;
  p.declared_inf_ = -omega;
  p.eval_ = [omega](double x) {
    const double x2 = x * x;
    return x2 * x2 - omega;
  };
  return p;
}

Potential Potential::constant(double value) {
  Potential p;
  p.kind_ = PotentialKind::Constant;
  p.name_ = "constant";
  p.declared_inf_ = value;
  p.eval_ = [value](double) { return value; };
  return p;
}

Potential Potential::table(std::vector<double> x, std::vector<double> values) {
  if (x.size() != values.size() || x.size() < 2) throw ConfigError("Potential::table: need at least two (x, V) pairs");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw ConfigError("Potential::table: abscissae must be strictly increasing");
  Potential p;
  p.kind_ = PotentialKind::Table;
  p.name_ = "table";
  p.declared_inf_ = *std::min_element(values.begin(), values.end());
  p.eval_ = [x = std::move(x), v = std::move(values)](double at) {
    if (at <= x.front()) return v.front();
    if (at >= x.back()) return v.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const auto j = static_cast<std::size_t>(it - x.begin());
    const double s = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - s) * v[j - 1] + s * v[j];
  };
  return p;
}

Potential Potential::custom(std::function<double(double)> v, double declared_inf, std::string name) {
  Potential p;
  p.kind_ = PotentialKind::Custom;
  p.name_ = std::move(name);
  p.declared_inf_ = declared_inf;
  p.eval_ = std::move(v);
  return p;
}

Potential Potential::with_omega(double omega) const {
  switch (kind_) {
    case PotentialKind::Harmonic:
      return harmonic(omega);
    case PotentialKind::Quartic:
      return quartic(omega);
    default:
      throw ConfigError("Potential::with_omega: frequency shift needs a harmonic or quartic potential");
  }
}

Nonlinearity Nonlinearity::power(double p, double mu, double growth_constant) {
  if (!(p > 2.0)) throw ConfigError("Nonlinearity::power: exponent must exceed 2");
  Nonlinearity n;
  n.p_ = p;
  n.mu_ = mu;
  n.c_ = growth_constant;
  n.odd_ = true;
  std::ostringstream name;
  name << "power(p=" << p << ")";
  n.name_ = name.str();
  if (p == 6.0) {
    n.g_ = [](double t) {
      const double t2 = t * t;
      return t2 * t2 * t;
    };
    n.G_ = [](double t) {
      const double t2 = t * t;
      return t2 * t2 * t2 / 6.0;
    };
    n.dg_ = [](double t) {
      const double t2 = t * t;
      return 5.0 * t2 * t2;
    };
  } else if (p == 4.0) {
    n.g_ = [](double t) { return t * t * t; };
    n.G_ = [](double t) { return t * t * t * t / 4.0; };
    n.dg_ = [](double t) { return 3.0 * t * t; };
  } else {
    n.g_ = [p](double t) { return std::pow(std::abs(t), p - 2.0) * t; };
    n.G_ = [p](double t) { return std::pow(std::abs(t), p) / p; };
    n.dg_ = [p](double t) { return (p - 1.0) * std::pow(std::abs(t), p - 2.0); };
  }
  return n;
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> g, std::function<double(double)> G, double p,
                                  double mu, double growth_constant, bool odd, std::string name) {
  Nonlinearity n;
  n.g_ = std::move(g);
  n.G_ = std::move(G);
  n.dg_ = [g = n.g_](double t) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (g(t + h) - g(t - h)) / (2.0 * h);
  };
  n.p_ = p;
  n.mu_ = mu;
  n.c_ = growth_constant;
  n.odd_ = odd;
  n.name_ = std::move(name);
  return n;
}

double critical_growth_bound(int dimension) {
  if (dimension <= 2) return std::numeric_limits<double>::infinity();
  return 2.0 * 2.0 * dimension / (dimension - 2.0);
}

double choose_shift(const Potential& potential, const Grid& grid) {
  double vmin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < grid.size(); ++i) vmin = std::min(vmin, potential(grid.nodes()[i]));
  if (!(vmin >= -1e12)) throw ConfigError("choose_shift: potential appears unbounded below on the grid");
  return std::max(0.0, 2.0 - vmin);
}

namespace {

void track(HypothesisCheck& c, double slack, double at, double tol) {
  if (slack < c.worst) {
    c.worst = slack;
    c.worst_at = at;
  }
  if (slack < -tol) c.passed = false;
}

// int_0^t g by composite 5-point Gauss-Legendre.
double primitive_by_quadrature(const Nonlinearity& nl, double t) {
  static constexpr std::array<double, 5> x = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                              0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                              0.2369268850561891, 0.2369268850561891};
  const int panels = 64;
  const double step = t / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * step;
    for (std::size_t j = 0; j < 5; ++j) sum += w[j] * nl.g(mid + 0.5 * step * x[j]);
  }
  return 0.5 * step * sum;
}

}  // namespace

ValidationReport validate(const Problem& problem, const Grid& grid, const SamplingPlan& plan) {
  ValidationReport rep;
  const Potential& pot = problem.potential;
  const Nonlinearity& nl = problem.nonlinearity;
  const Eigen::VectorXd vals = sample_potential(problem, grid);

  HypothesisCheck below{"(V) bounded below"};
  const double vmin = vals.minCoeff();
  below.worst = vmin - pot.declared_inf();
  below.passed = std::isfinite(vmin) && vmin >= pot.declared_inf() - 1e-9;
  rep.checks.push_back(below);

  HypothesisCheck confining{"(V) confining on the truncated domain"};
  {
    const double vmax = vals.maxCoeff();
    const double edge = grid.is_radial() ? vals[grid.size() - 1] : std::max(vals[0], vals[grid.size() - 1]);
    confining.worst = edge - vmax;
    confining.passed = edge >= vmax - 1e-12 * std::max(1.0, std::abs(vmax));
    confining.note = "surrogate: maximum attained on the boundary shell";
  }
  rep.checks.push_back(confining);

  HypothesisCheck shifted{"shifted potential V + m > 1"};
  rep.vtilde_min = vmin + problem.shift;
  shifted.worst = rep.vtilde_min - 1.0;
  shifted.passed = rep.vtilde_min > 1.0;
  rep.checks.push_back(shifted);

  HypothesisCheck exponent{"(g0) exponent p in (4, 2*2^*)"};
  {
    const double upper = critical_growth_bound(problem.dimension);
    exponent.worst = std::min(nl.p() - 4.0, upper - nl.p());
    exponent.passed = nl.p() > 4.0 && nl.p() < upper;
    if (problem.dimension == 1) {
      exponent.warning = true;
      exponent.note = "N = 1: embedding framework assumed as for N >= 2";
    }
  }
  rep.checks.push_back(exponent);

  const std::vector<double> ts = log_samples(plan.lo, plan.hi, plan.count, true);

  HypothesisCheck growth{"(g0) |g(t)| <= C(|t| + |t|^(p-1))"};
  HypothesisCheck g1{"(g1) 0 < mu G(t) <= t g(t)"};
  HypothesisCheck ge{"(ge) G~(t) - g~(t) t / mu <= (1/2 - 1/mu) m t^2"};
  HypothesisCheck odd{"g odd"};
  const double mu = nl.mu();
  const double m = problem.shift;
  for (double t : ts) {
    const double at = std::abs(t);
    const double gt = nl.g(t);
    const double Gt = nl.G(t);
    const double bound = nl.growth_constant() * (at + std::pow(at, nl.p() - 1.0));
    track(growth, (bound - std::abs(gt)) / bound, t, 1e-12);

    const double lower = mu * Gt;
    const double upper = t * gt;
    const double scale = std::max(std::abs(lower), std::abs(upper));
    const double pos = lower > 0.0 ? 1.0 : -1.0;
    track(g1, std::min(pos, scale > 0.0 ? (upper - lower) / scale : -1.0), t, 1e-12);

    const double lhs = problem.Gtilde(t) - problem.gtilde(t) * t / mu;
    const double rhs = (0.5 - 1.0 / mu) * m * t * t;
    const double sc = std::max({std::abs(lhs), std::abs(rhs), std::abs(problem.Gtilde(t)), 1e-300});
    track(ge, (rhs - lhs) / sc, t, 1e-12);

    if (nl.odd()) track(odd, nl.g(-t) == -gt ? 0.0 : -1.0, t, 0.0);
  }
  if (!(mu > 4.0)) {
    g1.passed = false;
    g1.note = "mu must exceed 4";
  }
  rep.checks.push_back(growth);
  rep.checks.push_back(g1);
  rep.checks.push_back(ge);
  if (nl.odd()) rep.checks.push_back(odd);

  HypothesisCheck e2{"(e2) g(t)/t -> 0"};
  {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= 8; ++k) {
      const double t = std::pow(10.0, -k);
      const double r = std::max(std::abs(nl.g(t) / t), std::abs(nl.g(-t) / t));
      if (r > prev * (1.0 + 1e-12)) e2.passed = false;
      prev = r;
    }
    e2.worst = -prev;
    if (prev > 1e-6) e2.passed = false;
    e2.note = "max |g(t)/t| at t = 1e-8 must fall below 1e-6 along a nonincreasing sequence";
  }
  rep.checks.push_back(e2);

  HypothesisCheck primitive{"G(t) = int_0^t g"};
  for (double t : log_samples(1e-4, 1e4, 200, true)) {
    const double q = primitive_by_quadrature(nl, t);
    const double Gt = nl.G(t);
    track(primitive, -std::abs(q - Gt) / std::max(std::abs(Gt), 1e-300), t, 1e-8);
  }
  rep.checks.push_back(primitive);
  return rep;
}

}  // namespace qsw
