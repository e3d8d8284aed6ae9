#ifndef QSW_GRID_HPP
#define QSW_GRID_HPP

#include <Eigen/Core>

#include "qsw/tridiagonal.hpp"

namespace qsw {

using Field = Eigen::VectorXd;
using Index = Eigen::Index;

struct Problem;

/// Uniform finite-volume grid on [a, b] (N = 1) or on the radial segment
/// [0, R] (N = 2, 3). Dirichlet nodes sit at the outer ends and are excluded
/// from the active block; the radial origin carries a Neumann closure.
class Grid {
 public:
  static Grid interval(double a, double b, Index n);
  static Grid radial(int dimension, double radius, Index n);
  /// [-R, R] for N = 1, radial [0, R] otherwise.
  static Grid make(int dimension, double radius, Index n);

  /// Same domain with spacing h / 2.
  Grid refined() const;
  /// Same domain with n nodes.
  Grid with_nodes(Index n) const;

  int dimension() const { return dimension_; }
  bool is_radial() const { return radial_; }
  double radius() const { return radius_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double spacing() const { return h_; }
  Index size() const { return nodes_.size(); }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  /// Cell measures; they sum to the domain volume.
  const Eigen::VectorXd& weights() const { return weights_; }
  /// Face conductances s_{i+1/2} / h between node i and i+1.
  const Eigen::VectorXd& conductance() const { return conductance_; }

  Index first_active() const { return first_active_; }
  Index active_size() const { return active_size_; }
  auto active(const Field& f) const { return f.segment(first_active_, active_size_); }
  auto active(Field& f) const { return f.segment(first_active_, active_size_); }
  Field zeros() const { return Field::Zero(size()); }
  Field extend(const Eigen::VectorXd& active_values) const;
  /// Clears the Dirichlet nodes.
  void constrain(Field& f) const;

  double volume() const { return weights_.sum(); }

 private:
  int dimension_ = 1;
  bool radial_ = false;
  double radius_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  double h_ = 0.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd conductance_;
  Index first_active_ = 0;
  Index active_size_ = 0;
};

/// Stiffness matrix of -Delta on the active block. The discrete Laplacian is
/// W^{-1} K, symmetric in the weighted inner product.
SymTridiagonal stiffness(const Grid& grid);

/// -Delta_h u on every node (zero on Dirichlet nodes).
Field laplacian(const Grid& grid, const Field& u);

/// -Delta u on the active nodes by fourth-order central differences (one-sided
/// next to the Dirichlet boundary, mirrored across r = 0). Used to measure
/// PDE residuals independently of the conservative scheme.
Field laplacian_fourth_order(const Grid& grid, const Field& u);

/// Quadrature of sum_i w_i a_i b_i.
double l2_inner(const Grid& grid, const Field& a, const Field& b);
double integrate(const Grid& grid, const Field& field);
double lq_norm(const Grid& grid, const Field& field, double q);

/// Face-difference form of int grad a . grad b.
double dirichlet_form(const Grid& grid, const Field& a, const Field& b);

/// X inner product int (grad a . grad b + V~ a b).
double x_inner(const Problem& problem, const Grid& grid, const Field& a, const Field& b);
double x_norm(const Problem& problem, const Grid& grid, const Field& a);

/// Piecewise-linear transfer of nodal values onto another grid of the same
/// kind; zero outside the source nodes and on the target's Dirichlet nodes.
Field interpolate(const Grid& from, const Field& values, const Grid& to);

/// Potential sampled at the nodes.
Eigen::VectorXd sample_potential(const Problem& problem, const Grid& grid);

}  // namespace qsw

#endif  // QSW_GRID_HPP
