#include "qsw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsw/errors.hpp"
#include "qsw/model.hpp"

namespace qsw {

namespace {

// Surface area of the unit sphere in R^N.
double sphere_area(int dimension) {
  switch (dimension) {
    case 2:
      return 2.0 * std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi;
    default:
      return 2.0;
  }
}

// Measure of the shell a <= r <= b.
double shell(int dimension, double a, double b) {
  return sphere_area(dimension) * (std::pow(b, dimension) - std::pow(a, dimension)) / dimension;
}

}  // namespace

Grid Grid::interval(double a, double b, Index n) {
  if (n < 3) throw ConfigError("Grid: at least 3 nodes are required");
  if (!(b > a)) throw ConfigError("Grid: empty interval");
  Grid g;
  g.dimension_ = 1;
  g.radial_ = false;
  g.lower_ = a;
  g.upper_ = b;
  g.radius_ = 0.5 * (b - a);
  g.h_ = (b - a) / static_cast<double>(n - 1);
  g.nodes_ = Eigen::VectorXd::LinSpaced(n, a, b);
  g.weights_ = Eigen::VectorXd::Constant(n, g.h_);
  g.weights_[0] = g.weights_[n - 1] = 0.5 * g.h_;
  g.conductance_ = Eigen::VectorXd::Constant(n - 1, 1.0 / g.h_);
  g.first_active_ = 1;
  g.active_size_ = n - 2;
  return g;
}

Grid Grid::radial(int dimension, double radius, Index n) {
  if (n < 3) throw ConfigError("Grid: at least 3 nodes are required");
  if (dimension < 2 || dimension > 3) throw ConfigError("Grid: radial mode needs N = 2 or 3");
  if (!(radius > 0.0)) throw ConfigError("Grid: radius must be positive");
  Grid g;
  g.dimension_ = dimension;
  g.radial_ = true;
  g.lower_ = 0.0;
  g.upper_ = radius;
  g.radius_ = radius;
  g.h_ = radius / static_cast<double>(n - 1);
  g.nodes_ = Eigen::VectorXd::LinSpaced(n, 0.0, radius);
  g.weights_.resize(n);
  const double h = g.h_;
  for (Index i = 0; i < n; ++i) {
    const double r = g.nodes_[i];
    const double a = i == 0 ? 0.0 : r - 0.5 * h;
    const double b = i == n - 1 ? radius : r + 0.5 * h;
    g.weights_[i] = shell(dimension, a, b);
  }
  g.conductance_.resize(n - 1);
  for (Index i = 0; i + 1 < n; ++i) {
    const double face = g.nodes_[i] + 0.5 * h;
    g.conductance_[i] = sphere_area(dimension) * std::pow(face, dimension - 1) / h;
  }
  g.first_active_ = 0;
  g.active_size_ = n - 1;
  return g;
}

Grid Grid::make(int dimension, double radius, Index n) {
  if (dimension == 1) return interval(-radius, radius, n);
  return radial(dimension, radius, n);
}

Grid Grid::refined() const { return with_nodes(2 * size() - 1); }

Grid Grid::with_nodes(Index n) const {
  return radial_ ? radial(dimension_, radius_, n) : interval(lower_, upper_, n);
}

Field Grid::extend(const Eigen::VectorXd& active_values) const {
  Field f = zeros();
  f.segment(first_active_, active_size_) = active_values;
  return f;
}

void Grid::constrain(Field& f) const {
  if (first_active_ > 0) f.head(first_active_).setZero();
  const Index tail = size() - first_active_ - active_size_;
  if (tail > 0) f.tail(tail).setZero();
}

SymTridiagonal stiffness(const Grid& grid) {
  const Index first = grid.first_active();
  const Index m = grid.active_size();
  const auto& c = grid.conductance();
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(std::max<Index>(m - 1, 0));
  for (Index k = 0; k < m; ++k) {
    const Index i = first + k;
    double d = 0.0;
    if (i > 0) d += c[i - 1];
    if (i + 1 < grid.size()) d += c[i];
    diag[k] = d;
    if (k + 1 < m) off[k] = -c[i];
  }
  return SymTridiagonal(std::move(diag), std::move(off));
}

Field laplacian(const Grid& grid, const Field& u) {
  const Index n = grid.size();
  const auto& c = grid.conductance();
  Field flux(n);
  flux.setZero();
  for (Index i = 0; i + 1 < n; ++i) {
    const double q = c[i] * (u[i + 1] - u[i]);
    flux[i] -= q;
    flux[i + 1] += q;
  }
  Field out = flux.cwiseQuotient(grid.weights());
  grid.constrain(out);
  return out;
}

Field laplacian_fourth_order(const Grid& grid, const Field& u) {
  const Index n = grid.size();
  if (n < 6) throw ConfigError("laplacian_fourth_order: at least 6 nodes are required");
  const double h = grid.spacing();
  const bool radial = grid.is_radial();
  // Radial fields are even in r: mirror across the origin.
  auto at = [&](Index k) { return k < 0 ? u[-k] : u[k]; };
  auto second = [&](Index i) {
    if (i + 2 <= n - 1 && (radial || i >= 2))
      return (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h);
    if (i + 2 > n - 1)
      return (at(i - 4) - 6.0 * at(i - 3) + 14.0 * at(i - 2) - 4.0 * at(i - 1) - 15.0 * at(i) + 10.0 * at(i + 1)) /
             (12.0 * h * h);
    return (10.0 * at(i - 1) - 15.0 * at(i) - 4.0 * at(i + 1) + 14.0 * at(i + 2) - 6.0 * at(i + 3) + at(i + 4)) /
           (12.0 * h * h);
  };
  auto first = [&](Index i) {
    if (i + 2 <= n - 1) return (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
    return (-at(i - 3) + 6.0 * at(i - 2) - 18.0 * at(i - 1) + 10.0 * at(i) + 3.0 * at(i + 1)) / (12.0 * h);
  };
  Field out = grid.zeros();
  const Index lo = grid.first_active();
  const Index hi = lo + grid.active_size();
  const int dim = grid.dimension();
  for (Index i = lo; i < hi; ++i) {
    if (!radial)
      out[i] = -second(i);
    else if (i == 0)
      out[i] = -dim * second(0);
    else
      out[i] = -(second(i) + (dim - 1) / grid.nodes()[i] * first(i));
  }
  return out;
}

Field interpolate(const Grid& from, const Field& values, const Grid& to) {
  if (from.is_radial() != to.is_radial()) throw ConfigError("interpolate: grids of different kinds");
  const auto& x = from.nodes();
  Field out = to.zeros();
  for (Index i = 0; i < to.size(); ++i) {
    const double at = to.nodes()[i];
    if (at < x[0] || at > x[x.size() - 1]) continue;
    const auto it = std::upper_bound(x.data(), x.data() + x.size(), at);
    const Index j = std::clamp<Index>(static_cast<Index>(it - x.data()), 1, x.size() - 1);
    const double s = (at - x[j - 1]) / (x[j] - x[j - 1]);
    out[i] = (1.0 - s) * values[j - 1] + s * values[j];
  }
  to.constrain(out);
  return out;
}

double l2_inner(const Grid& grid, const Field& a, const Field& b) {
  return (grid.weights().array() * a.array() * b.array()).sum();
}

double integrate(const Grid& grid, const Field& field) { return grid.weights().dot(field); }

double lq_norm(const Grid& grid, const Field& field, double q) {
  if (!(q >= 1.0)) throw DomainError("lq_norm: q must be at least 1");
  return std::pow((grid.weights().array() * field.array().abs().pow(q)).sum(), 1.0 / q);
}

double dirichlet_form(const Grid& grid, const Field& a, const Field& b) {
  const Index n = grid.size();
  const auto da = a.tail(n - 1) - a.head(n - 1);
  const auto db = b.tail(n - 1) - b.head(n - 1);
  return (grid.conductance().array() * da.array() * db.array()).sum();
}

Eigen::VectorXd sample_potential(const Problem& problem, const Grid& grid) {
  return grid.nodes().unaryExpr([&](double x) { return problem.v(x); });
}

double x_inner(const Problem& problem, const Grid& grid, const Field& a, const Field& b) {
  if (a.size() != grid.size() || b.size() != grid.size()) throw DomainError("x_inner: field does not match grid");
  const Eigen::VectorXd vt = sample_potential(problem, grid).array() + problem.shift;
  return dirichlet_form(grid, a, b) + (grid.weights().array() * vt.array() * a.array() * b.array()).sum();
}

double x_norm(const Problem& problem, const Grid& grid, const Field& a) {
  return std::sqrt(x_inner(problem, grid, a, a));
}

}  // namespace qsw
