#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "specopt/manifold.hpp"
#include "specopt/problem.hpp"

namespace specopt {

/// Value and minimising direction of a stationarity measure, together with
/// the dual certificate that proves it.
///
/// Inequality rows are indexed in one combined list: the y-block rows g
/// first (0 .. g.rows-1), then the coupled rows h (g.rows .. g.rows+h-1).
struct DirectionResult {
  double measure = 0.0;
  /// x-block direction in ambient coordinates (0x0 when the x block is not
  /// part of the measure).
  Matrix dx;
  /// y-block direction (size 0 when the y block is not part of the measure).
  Vector dy;
  Vector eq_multipliers;
  /// Aligned with `active_set`; entrywise nonnegative.
  Vector ineq_multipliers;
  std::vector<Eigen::Index> active_set;

  double direction_norm() const {
    return std::sqrt(dx.squaredNorm() + dy.squaredNorm());
  }
};

/// Degenerate residual threshold: below it the measure is reported as 0.
inline constexpr double kZeroResidual = 1e-14;

/// { j : values_j >= -delta } (violations count as active).
std::vector<Eigen::Index> active_set(const Vector& values, double delta);

/// Everything the measures need at one iterate: values and gradients of f,
/// c, h, and the Jacobian of g.
struct PointEvaluation {
  BlockPoint point;
  double f = 0.0;
  BlockGradient grad_f;
  ConstraintValues values;
  std::vector<BlockGradient> grad_eq;
  std::vector<BlockGradient> grad_coupled;
  Matrix jac_y_ineq;
};

PointEvaluation evaluate_point(const BlockProblem& problem, const BlockPoint& z);

/// Combined inequality values (g rows then h rows).
Vector combined_inequalities(const PointEvaluation& ev);

// Low-level forms over explicit gradient data.

/// m_x with equality rows only: min_lambda ||grad f + sum lambda_i grad c_i||.
/// Throws LicqError when the grad c_i are dependent.
DirectionResult measure_x(const ManifoldPoint& x, const TangentVector& grad_f,
                          std::span<const TangentVector> grad_c);

/// m_y: grad_f in R^n, eq_rows p x n, ineq_rows |A| x n (rows already
/// restricted to the active set whose ids are `active_ids`).
DirectionResult measure_y(const Vector& grad_f, const Matrix& eq_rows,
                          const Matrix& ineq_rows,
                          std::vector<Eigen::Index> active_ids,
                          int max_pivots = -1);

/// m_KKT over the product tangent space with the block inner product.
DirectionResult measure_kkt(const BlockGradient& grad_f,
                            std::span<const BlockGradient> grad_eq,
                            std::span<const BlockGradient> grad_ineq,
                            std::vector<Eigen::Index> active_ids,
                            int max_pivots = -1);

// Problem-level forms. `delta` widens the active set; active coupled rows
// constrain m_x as well when the problem has them.

DirectionResult measure_x(const PointEvaluation& ev, double delta);
DirectionResult measure_y(const PointEvaluation& ev, double delta);
DirectionResult measure_kkt(const PointEvaluation& ev, double delta);

/// Worst violation of the DirectionResult invariants: unit-ball norm,
/// orthogonality to equality gradients, non-positivity on active rows,
/// <grad f, d> = -measure, and mu >= 0. Zero when all hold exactly.
double direction_invariant_violation(const DirectionResult& r,
                                     const BlockGradient& grad_f,
                                     std::span<const BlockGradient> grad_eq,
                                     std::span<const BlockGradient> grad_ineq);

}  // namespace specopt
