#pragma once

#include <functional>
#include <optional>
#include <random>

#include "specopt/problem.hpp"

namespace specopt {

enum class ProjectionMethod { kIdentity, kPolyhedral, kAlternating, kPenalty };

const char* to_string(ProjectionMethod m);

struct ProjectionOptions {
  double tol_feas = 1e-9;
  int max_restore = 200;
  /// Penalty-descent fallback when alternating projection fails (x and joint
  /// restorations only).
  bool penalty_fallback = true;
  int max_penalty_iterations = 2000;
};

struct ProjectionReport {
  BlockPoint point;
  double residual_eq = 0.0;
  double residual_ineq = 0.0;
  /// Embedding distance between the query and the returned point.
  double moved = 0.0;
  int iterations = 0;
  ProjectionMethod method = ProjectionMethod::kIdentity;
  /// Residual after each restoration sweep (index 0 is the query).
  std::vector<double> residual_history;
  /// Residuals are within tolerance.
  bool success = false;
  /// The restoration could not be completed; the caller should shrink its
  /// trial step.
  bool rejected = false;
};

/// Exact Euclidean projection of `query` onto { v : E v = d, A v <= b } by a
/// primal active-set method warm-started at `start`, which must satisfy the
/// constraints to within roughly `tol`. Throws NumericError on
/// non-convergence.
Vector project_polyhedron(const Vector& query, const Matrix& e, const Vector& d,
                          const Matrix& a, const Vector& b, const Vector& start,
                          double tol = 1e-9);

/// Projection of y onto C_y(x) = { y : c(x,y) = 0, h(x,y) <= 0, g(y) <= 0 }.
/// `anchor` is the last feasible iterate (its x is the fixed x block). Uses
/// the exact polyhedral projection when the problem is affine in y and
/// Gauss-Newton restoration otherwise; falls back to the anchor with
/// `rejected` set when the result is farther from the query than the anchor.
ProjectionReport project_y(const Vector& y_query, const BlockPoint& anchor,
                           const BlockProblem& problem,
                           const ProjectionOptions& opts = {});

/// Projection of x onto C_x(y) = { x in M : c(x,y) = 0, h(x,y) <= 0 } by
/// inexact alternating projection: a Gauss-Newton step on the active rows
/// followed by the polar projection onto M.
ProjectionReport project_x(const ManifoldPoint& x_query, const Vector& y,
                           const BlockProblem& problem,
                           const ProjectionOptions& opts = {});

/// Joint projection of (x, y) onto the full feasible set C.
ProjectionReport project_joint(const BlockPoint& z_query,
                               const BlockProblem& problem,
                               const ProjectionOptions& opts = {});

/// Penalty function on the stacked residual (c, max(h, 0)).
struct Penalty {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;

  /// P(r) = 0.5 ||r||^2.
  static Penalty squared();
};

/// Minimises P(c(x, y), max(h(x, y), 0)) over x in M with Riemannian
/// gradient descent and Armijo backtracking, starting at `z_query.x`; y is
/// held fixed.
ProjectionReport penalty_project(const BlockPoint& z_query,
                                 const BlockProblem& problem,
                                 const Penalty& pen = Penalty::squared(),
                                 const ProjectionOptions& opts = {});

/// Damped alternating restoration from an arbitrary (possibly far)
/// point. Returns nullopt when no feasible point is reached.
std::optional<BlockPoint> restore_feasibility(const BlockPoint& query,
                                              const BlockProblem& problem,
                                              const ProjectionOptions& opts = {},
                                              int max_iterations = 2000);

}  // namespace specopt
