#ifndef QSW_MODEL_HPP
#define QSW_MODEL_HPP

#include <functional>
#include <utility>
#include <limits>
#include <string>
#include <vector>

namespace qsw {

class Grid;

enum class PotentialKind { Harmonic, Quartic, Constant, Table, Custom };

/// Potential V(x), evaluated at the node coordinate (|x| on radial grids).
class Potential {
 public:
  /// V(x) = x^2 - omega.
  static Potential harmonic(double omega);
  /// V(x) = x^4 - omega.
  static Potential quartic(double omega);
  static Potential constant(double value);
  /// Piecewise-linear interpolation of (x, V) pairs, constant beyond the ends.
  static Potential table(std::vector<double> x, std::vector<double> values);
  static Potential custom(std::function<double(double)> v, double declared_inf, std::string name);

  double operator()(double x) const { return eval_(x); }

  PotentialKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double omega() const { return omega_; }
  double declared_inf() const { return declared_inf_; }
  /// Same profile with omega replaced; only meaningful for harmonic and quartic.
  Potential with_omega(double omega) const;

 private:
  PotentialKind kind_ = PotentialKind::Custom;
  std::string name_;
  double omega_ = 0.0;
  double declared_inf_ = -std::numeric_limits<double>::infinity();
  std::function<double(double)> eval_;
};

/// Nonlinearity g with primitive G, growth data (C, p) and superlinearity constant mu.
class Nonlinearity {
 public:
  /// g(t) = |t|^(p-2) t, G(t) = |t|^p / p.
  static Nonlinearity power(double p, double mu, double growth_constant = 1.0);
  static Nonlinearity custom(std::function<double(double)> g, std::function<double(double)> G, double p, double mu,
                             double growth_constant, bool odd, std::string name);

  double g(double t) const { return g_(t); }
  double G(double t) const { return G_(t); }
  /// g'(t); central differences for custom nonlinearities.
  double g_prime(double t) const { return dg_(t); }

  double p() const { return p_; }
  double mu() const { return mu_; }
  double growth_constant() const { return c_; }
  bool odd() const { return odd_; }
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> g_;
  std::function<double(double)> G_;
  std::function<double(double)> dg_;
  double p_ = 6.0;
  double mu_ = 6.0;
  double c_ = 1.0;
  bool odd_ = true;
  std::string name_;
};

/// Shifted problem data: V~ = V + m, g~(t) = g(t) + m t, G~(t) = G(t) + m t^2 / 2.
struct Problem {
  Potential potential;
  Nonlinearity nonlinearity;
  int dimension = 1;
  double shift = 0.0;

  double v(double x) const { return potential(x); }
  double vtilde(double x) const { return potential(x) + shift; }
  double g(double t) const { return nonlinearity.g(t); }
  double G(double t) const { return nonlinearity.G(t); }
  double gtilde(double t) const { return nonlinearity.g(t) + shift * t; }
  double Gtilde(double t) const { return nonlinearity.G(t) + 0.5 * shift * t * t; }
};

/// m = max(0, 2 - min_grid V), so that V + m >= 2 > 1 on the grid.
double choose_shift(const Potential& potential, const Grid& grid);

struct SamplingPlan {
  double lo = 1e-8;
  double hi = 1e8;
  std::size_t count = 10000;
};

struct HypothesisCheck {
  HypothesisCheck() = default;
  explicit HypothesisCheck(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  bool warning = false;
  double worst = 0.0;  // worst normalised slack (negative means violated)
  double worst_at = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  double vtilde_min = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const HypothesisCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Sampling-based check of the potential and nonlinearity hypotheses on `grid`.
ValidationReport validate(const Problem& problem, const Grid& grid, const SamplingPlan& plan = {});

/// 2 * 2^* with 2^* = 2N/(N-2); infinite for N <= 2.
double critical_growth_bound(int dimension);

}  // namespace qsw

#endif  // QSW_MODEL_HPP
