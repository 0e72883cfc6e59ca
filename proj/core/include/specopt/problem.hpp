#pragma once

#include <functional>
#include <string>
#include <vector>

#include "specopt/manifold.hpp"

namespace specopt {

/// Iterate of the block model: x on a Stiefel manifold, y in R^n.
struct BlockPoint {
  ManifoldPoint x;
  Vector y;
};

/// Gradient of a block function. `x` is the Riemannian gradient (already
/// projected onto T_x M, ambient coordinates); `y` the Euclidean gradient.
struct BlockGradient {
  Matrix x;
  Vector y;

  double squared_norm() const { return x.squaredNorm() + y.squaredNorm(); }
  double dot(const BlockGradient& o) const {
    return (x.array() * o.x.array()).sum() + y.dot(o.y);
  }
};

/// A smooth scalar function on M x R^n together with its gradient.
struct BlockFunction {
  std::function<double(const BlockPoint&)> value;
  std::function<BlockGradient(const BlockPoint&)> gradient;
};

/// Inequalities g(y) <= 0 that depend on the y block only.
struct YConstraints {
  Eigen::Index rows = 0;
  std::function<Vector(const Vector&)> value;
  /// rows x n Jacobian.
  std::function<Matrix(const Vector&)> jacobian;
  bool affine = false;
};

/// min f(x,y) s.t. c(x,y) = 0, h(x,y) <= 0, g(y) <= 0, x in M, y in R^n.
///
/// `coupled_inequalities` are coordinate inequalities that depend on both
/// blocks (empty for the pure equality-coupled model).
struct BlockProblem {
  Eigen::Index manifold_rows = 0;
  Eigen::Index manifold_cols = 0;
  Eigen::Index y_dim = 0;
  BlockFunction objective;
  std::vector<BlockFunction> equalities;
  std::vector<BlockFunction> coupled_inequalities;
  YConstraints y_inequalities;
  /// c and h are affine in y for every fixed x (enables the exact polyhedral
  /// y-projection).
  bool affine_in_y = false;

  Eigen::Index num_equalities() const {
    return static_cast<Eigen::Index>(equalities.size());
  }
  Eigen::Index num_coupled() const {
    return static_cast<Eigen::Index>(coupled_inequalities.size());
  }
};

/// Constraint values at a point.
struct ConstraintValues {
  Vector eq;       // c
  Vector coupled;  // h
  Vector y_ineq;   // g

  /// ||c||_2.
  double residual_eq() const;
  /// max(h, g, 0) in the max norm.
  double residual_ineq() const;
};

ConstraintValues evaluate_constraints(const BlockProblem& problem,
                                      const BlockPoint& z);

/// Result of a finite-difference audit of every gradient in a problem.
struct GradientAuditReport {
  double max_rel_error = 0.0;
  std::string worst;  // human-readable name of the worst function/block
};

/// Compares analytic gradients against central differences with step `h`.
/// The y block is differenced coordinate-wise; the x block along random
/// tangent directions through the QR retraction. Errors are relative to
/// max(1, ||analytic||).
GradientAuditReport audit_gradients(const BlockProblem& problem,
                                    const BlockPoint& z, std::mt19937_64& rng,
                                    double h = 1e-6, int x_directions = 4);

}  // namespace specopt
