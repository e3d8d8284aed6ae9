#ifndef QSW_TRANSFORM_HPP
#define QSW_TRANSFORM_HPP

// The change of variables u = f(v) defined by
//
//   f'(t) = 1 / sqrt(1 + 2 f(t)^2),   f(0) = 0,   f odd,
//
// evaluated through its closed-form inverse
//
//   F(u) = u sqrt(1 + 2u^2) / 2 + asinh(sqrt(2) u) / (2 sqrt(2)),   F' = sqrt(1 + 2u^2).

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qsw/errors.hpp"

namespace qsw {

template <typename Scalar>
class Transform {
 public:
  struct Options {
    Scalar newton_tol = Scalar(4) * std::numeric_limits<Scalar>::epsilon();
    int max_newton_iter = 200;
    Scalar asymptotic_switch = Scalar(1e8);
  };

  Transform() = default;
  explicit Transform(Options opts) : opts_(opts) {}

  const Options& options() const { return opts_; }

  /// Closed-form inverse F(u).
  static Scalar f_inverse(Scalar u) {
    using std::asinh;
    using std::sqrt;
    if (!std::isfinite(static_cast<double>(u))) throw DomainError("f_inverse: non-finite argument");
    const Scalar sqrt2 = sqrt(Scalar(2));
    return u * sqrt(Scalar(1) + Scalar(2) * u * u) / Scalar(2) + asinh(sqrt2 * u) / (Scalar(2) * sqrt2);
  }

  Scalar f(Scalar t) const {
    if (!std::isfinite(static_cast<double>(t))) throw DomainError("f: non-finite argument");
    const Scalar a = t < Scalar(0) ? -t : t;
    const Scalar u = a >= opts_.asymptotic_switch ? large_argument(a) : newton(a);
    return t < Scalar(0) ? -u : u;
  }

  Scalar f_prime(Scalar t) const { return from_value_prime(f(t)); }

  Scalar f_second(Scalar t) const { return from_value_second(f(t)); }

  /// f'(t) expressed through u = f(t).
  static Scalar from_value_prime(Scalar u) {
    using std::sqrt;
    return Scalar(1) / sqrt(Scalar(1) + Scalar(2) * u * u);
  }

  /// f''(t) = -2 f f'^4 expressed through u = f(t).
  static Scalar from_value_second(Scalar u) {
    const Scalar d = from_value_prime(u);
    const Scalar d2 = d * d;
    return Scalar(-2) * u * d2 * d2;
  }

  /// Element-wise f on an Eigen array or vector.
  template <typename Derived>
  Eigen::Array<Scalar, Eigen::Dynamic, 1> apply(const Eigen::DenseBase<Derived>& t) const {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> out(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = f(t.derived().coeff(i));
    return out;
  }

 private:
  // Solves F(u) = a for a >= 0 by Newton, falling back to bisection whenever
  // the step leaves the bracket [0, min(a, 2^{1/4} sqrt(a))].
  Scalar newton(Scalar a) const {
    using std::abs;
    using std::pow;
    using std::sqrt;
    if (a == Scalar(0)) return Scalar(0);
    const Scalar root_scale = pow(Scalar(2), Scalar(0.25)) * sqrt(a);
    Scalar lo = Scalar(0);
    Scalar hi = a < root_scale ? a : root_scale;
    Scalar u = a <= Scalar(1) ? a : root_scale;
    if (u > hi) u = hi;
    for (int it = 0; it < opts_.max_newton_iter; ++it) {
      const Scalar r = f_inverse(u) - a;
      if (r == Scalar(0)) return u;
      if (r > Scalar(0))
        hi = u;
      else
        lo = u;
      Scalar next = u - r / sqrt(Scalar(1) + Scalar(2) * u * u);
      if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
      if (abs(next - u) <= opts_.newton_tol * u || hi - lo <= opts_.newton_tol * hi) return next;
      u = next;
    }
    throw NumericError("f: Newton inversion did not converge for t = " + std::to_string(static_cast<double>(a)));
  }

  // Inverts F(u) = u^2/sqrt2 + 1/(4 sqrt2) + ln(2 sqrt2 u)/(2 sqrt2) + O(u^-2).
  static Scalar large_argument(Scalar a) {
    using std::log;
    using std::pow;
    using std::sqrt;
    const Scalar sqrt2 = sqrt(Scalar(2));
    Scalar u = pow(Scalar(2), Scalar(0.25)) * sqrt(a);
    for (int it = 0; it < 4; ++it) u = sqrt(sqrt2 * a - Scalar(0.25) - log(Scalar(2) * sqrt2 * u) / Scalar(2));
    return u;
  }

  Options opts_{};
};

using TransformTable = Transform<double>;

/// Outcome of a single sampled inequality.
struct PropertyCheck {
  PropertyCheck() = default;
  explicit PropertyCheck(std::string n) : name(std::move(n)) {}

  std::string name;
  bool applicable = true;
  bool passed = true;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_at = 0.0;
  std::size_t samples = 0;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  double kappa_hat = 0.0;       // min of the item-5 ratios
  double kappa_reported = 0.0;  // f(1)
  double c_lambda = 0.0;        // max(lambda, lambda^2)
  double c_lambda_hat = 0.0;    // sampled sup of f^2(lambda t) / f^2(t)
  double lambda = 2.0;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.applicable && !c.passed) return false;
    return true;
  }
  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Samples Proposition-style bounds of f (items 2 to 6). `rel_tol` is the
/// allowed negative slack relative to the magnitude of the compared terms.
PropertyReport verify_p1(const TransformTable& tr, const std::vector<double>& samples, double lambda = 2.0,
                         double rel_tol = 1e-12);

/// Checks g(f(s)) f'(s) s >= g(f(s)) f(s) / 2 where g(s) s >= 0.
PropertyReport verify_l0(const TransformTable& tr, const std::function<double(double)>& gshift,
                         const std::vector<double>& samples, double rel_tol = 1e-12);

/// `count` log-spaced magnitudes in [lo, hi], optionally mirrored to negative values.
std::vector<double> log_samples(double lo, double hi, std::size_t count, bool symmetric = false);

}  // namespace qsw

#endif  // QSW_TRANSFORM_HPP
