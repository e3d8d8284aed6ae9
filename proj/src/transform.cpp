#include "qsw/transform.hpp"

#include <algorithm>
#include <cmath>

namespace qsw {

namespace {

// Records lhs >= rhs with slack normalised by `scale`.
void record(PropertyCheck& c, double slack, double scale, double at, double rel_tol) {
  const double s = scale > 0.0 ? slack / scale : slack;
  ++c.samples;
  if (s < c.worst_slack) {
    c.worst_slack = s;
    c.worst_at = at;
  }
  if (s < -rel_tol) c.passed = false;
}

}  // namespace

std::vector<double> log_samples(double lo, double hi, std::size_t count, bool symmetric) {
  std::vector<double> out;
  out.reserve(symmetric ? 2 * count : count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(std::exp(a + s * (b - a)));
  }
  if (symmetric) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(-out[i]);
  }
  return out;
}

PropertyReport verify_p1(const TransformTable& tr, const std::vector<double>& samples, double lambda,
                         double rel_tol) {
  PropertyReport rep;
  rep.lambda = lambda;
  PropertyCheck bound_f{"p1.2 |f(t)| <= |t|"};
  PropertyCheck bound_fp{"p1.2 0 < f'(t) <= 1"};
  PropertyCheck lower3{"p1.3 f(t)/2 <= f'(t) t"};
  PropertyCheck upper3{"p1.3 f'(t) t <= f(t)"};
  PropertyCheck item4a{"p1.4 f^2(t) >= f(t) f'(t) t"};
  PropertyCheck item4b{"p1.4 |f(t)| <= 2^(1/4) |t|^(1/2)"};
  PropertyCheck item5{"p1.5 |f(t)| >= kappa min(|t|, |t|^(1/2))"};
  PropertyCheck item6{"p1.6 f^2(lambda t) <= C_lambda f^2(t)"};

  const double kappa = tr.f(1.0);
  const double c_lambda = std::max(lambda, lambda * lambda);
  const double root_coef = std::pow(2.0, 0.25);
  double kappa_hat = std::numeric_limits<double>::infinity();
  double c_hat = 0.0;

  for (double t : samples) {
    const double u = tr.f(t);
    const double d = TransformTable::from_value_prime(u);
    const double at = std::abs(t);
    const double au = std::abs(u);

    // Zero tolerance: the Newton bracket never exceeds |t|.
    record(bound_f, at - au, 0.0, t, 0.0);
    record(bound_fp, std::min(d, 1.0 - d), 0.0, t, 0.0);
    if (t == 0.0) continue;

    if (t > 0.0) {
      record(lower3, d * t - 0.5 * u, u, t, rel_tol);
      record(upper3, u - d * t, u, t, rel_tol);
    }
    record(item4a, u * u - u * d * t, u * u, t, rel_tol);
    record(item4b, root_coef * std::sqrt(at) - au, au, t, rel_tol);

    const double ratio = at <= 1.0 ? au / at : au / std::sqrt(at);
    kappa_hat = std::min(kappa_hat, ratio);
    record(item5, ratio - kappa, kappa, t, rel_tol);

    const double ul = tr.f(lambda * t);
    const double q = (ul * ul) / (u * u);
    if (std::isfinite(q)) {
      c_hat = std::max(c_hat, q);
      record(item6, c_lambda * u * u - ul * ul, ul * ul, t, rel_tol);
    }
  }

  rep.checks = {bound_f, bound_fp, lower3, upper3, item4a, item4b, item5, item6};
  rep.kappa_hat = kappa_hat;
  rep.kappa_reported = kappa;
  rep.c_lambda = c_lambda;
  rep.c_lambda_hat = c_hat;
  return rep;
}

PropertyReport verify_l0(const TransformTable& tr, const std::function<double(double)>& gshift,
                         const std::vector<double>& samples, double rel_tol) {
  PropertyReport rep;
  PropertyCheck pre{"l0 precondition g(s) s >= 0"};
  PropertyCheck ineq{"l0 g(f(s)) f'(s) s >= g(f(s)) f(s) / 2"};
  for (double s : samples) {
    const double gs = gshift(s);
    record(pre, gs * s, 0.0, s, 0.0);
  }
  if (!pre.passed) {
    ineq.applicable = false;
    rep.checks = {pre, ineq};
    return rep;
  }
  for (double s : samples) {
    const double u = tr.f(s);
    const double d = TransformTable::from_value_prime(u);
    const double gu = gshift(u);
    const double lhs = gu * d * s;
    const double rhs = 0.5 * gu * u;
    record(ineq, lhs - rhs, std::abs(lhs) + std::abs(rhs), s, rel_tol);
  }
  rep.checks = {pre, ineq};
  return rep;
}

}  // namespace qsw
