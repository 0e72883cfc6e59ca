#include "specopt/directions.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include "specopt/errors.hpp"
#include "specopt/nnls.hpp"

namespace specopt {

namespace {

using Eigen::Index;

struct Layout {
  Index x_rows = 0;
  Index x_cols = 0;
  Index y_dim = 0;
  bool use_x = false;
  bool use_y = false;

  Index size() const {
    return (use_x ? x_rows * x_cols : 0) + (use_y ? y_dim : 0);
  }

  Vector flatten(const BlockGradient& g) const {
    Vector v(size());
    Index off = 0;
    if (use_x) {
      v.segment(off, x_rows * x_cols) =
          Eigen::Map<const Vector>(g.x.data(), x_rows * x_cols);
      off += x_rows * x_cols;
    }
    if (use_y) v.segment(off, y_dim) = g.y;
    return v;
  }

  void unflatten(const Vector& v, DirectionResult& r) const {
    Index off = 0;
    if (use_x) {
      r.dx = Eigen::Map<const Matrix>(v.data() + off, x_rows, x_cols);
      off += x_rows * x_cols;
    }
    if (use_y) r.dy = v.segment(off, y_dim);
  }
};

DirectionResult min_norm_direction(const Layout& layout,
                                   const BlockGradient& grad_f,
                                   std::span<const BlockGradient> eq,
                                   std::span<const BlockGradient> ineq,
                                   std::vector<Index> ids, int max_pivots) {
  const Index p = static_cast<Index>(eq.size());
  const Index q = static_cast<Index>(ineq.size());
  const Vector a = layout.flatten(grad_f);
  Matrix b(a.size(), p + q);
  for (Index i = 0; i < p; ++i) b.col(i) = layout.flatten(eq[static_cast<size_t>(i)]);
  for (Index j = 0; j < q; ++j) b.col(p + j) = layout.flatten(ineq[static_cast<size_t>(j)]);

  if (max_pivots < 0) max_pivots = static_cast<int>(10 * (p + q) * (p + q));
  // min ||a + B w||  <=>  min ||(-a) - B w||.
  const MixedNnlsResult sol = solve_mixed_nnls(b, -a, p, max_pivots);

  DirectionResult r;
  r.eq_multipliers = sol.coeffs.head(p);
  r.ineq_multipliers = sol.coeffs.tail(q);
  r.active_set = std::move(ids);
  const Vector resid = -sol.residual;  // a + B w
  const double norm = resid.norm();
  // Forming a + B w loses about eps * (|a| + sum |w_j| |b_j|); a residual
  // below that is cancellation noise and gives no usable direction.
  double magnitude = a.norm();
  for (Index j = 0; j < p + q; ++j) magnitude += std::abs(sol.coeffs(j)) * b.col(j).norm();
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  Vector d = Vector::Zero(a.size());
  if (norm > std::max(kZeroResidual, noise)) {
    r.measure = norm;
    d = -resid / norm;
  }
  layout.unflatten(d, r);
  return r;
}

Layout layout_for(const PointEvaluation& ev, bool use_x, bool use_y) {
  Layout l;
  l.x_rows = ev.point.x.rows();
  l.x_cols = ev.point.x.cols();
  l.y_dim = ev.point.y.size();
  l.use_x = use_x;
  l.use_y = use_y;
  return l;
}

BlockGradient inequality_gradient(const PointEvaluation& ev, Index j) {
  const Index g_rows = ev.jac_y_ineq.rows();
  if (j < g_rows) {
    return BlockGradient{Matrix::Zero(ev.point.x.rows(), ev.point.x.cols()),
                         ev.jac_y_ineq.row(j).transpose()};
  }
  return ev.grad_coupled[static_cast<size_t>(j - g_rows)];
}

void debug_check(const DirectionResult& r, const BlockGradient& gf,
                 std::span<const BlockGradient> eq,
                 std::span<const BlockGradient> ineq) {
#ifndef NDEBUG
  const double scale = std::max(1.0, std::sqrt(gf.squared_norm()));
  if (direction_invariant_violation(r, gf, eq, ineq) > 1e-6 * scale) {
    throw NumericError("DirectionResult invariants violated");
  }
#else
  (void)r;
  (void)gf;
  (void)eq;
  (void)ineq;
#endif
}

BlockGradient restrict(const BlockGradient& g, bool use_x, bool use_y) {
  return BlockGradient{use_x ? g.x : Matrix::Zero(g.x.rows(), g.x.cols()),
                       use_y ? g.y : Vector::Zero(g.y.size())};
}

}  // namespace

std::vector<Index> active_set(const Vector& values, double delta) {
  std::vector<Index> out;
  for (Index j = 0; j < values.size(); ++j) {
    if (values(j) >= -delta) out.push_back(j);
  }
  return out;
}

PointEvaluation evaluate_point(const BlockProblem& problem, const BlockPoint& z) {
  PointEvaluation ev{z, 0.0, {}, {}, {}, {}, {}};
  ev.f = problem.objective.value(z);
  ev.grad_f = problem.objective.gradient(z);
  ev.values = evaluate_constraints(problem, z);
  for (const auto& c : problem.equalities) ev.grad_eq.push_back(c.gradient(z));
  for (const auto& h : problem.coupled_inequalities) {
    ev.grad_coupled.push_back(h.gradient(z));
  }
  ev.jac_y_ineq = problem.y_inequalities.rows > 0
                      ? problem.y_inequalities.jacobian(z.y)
                      : Matrix(0, z.y.size());
  return ev;
}

Vector combined_inequalities(const PointEvaluation& ev) {
  Vector v(ev.values.y_ineq.size() + ev.values.coupled.size());
  v << ev.values.y_ineq, ev.values.coupled;
  return v;
}

DirectionResult measure_x(const ManifoldPoint& x, const TangentVector& grad_f,
                          std::span<const TangentVector> grad_c) {
  if (!(grad_f.base() == x)) {
    throw DomainError("measure_x: gradient is based at a different point");
  }
  Layout l;
  l.x_rows = x.rows();
  l.x_cols = x.cols();
  l.use_x = true;
  const BlockGradient gf{grad_f.matrix(), Vector(0)};
  std::vector<BlockGradient> eq;
  for (const auto& g : grad_c) {
    if (!(g.base() == x)) {
      throw DomainError("measure_x: gradient is based at a different point");
    }
    eq.push_back(BlockGradient{g.matrix(), Vector(0)});
  }
  DirectionResult r = min_norm_direction(l, gf, eq, {}, {}, -1);
  debug_check(r, gf, eq, {});
  return r;
}

DirectionResult measure_y(const Vector& grad_f, const Matrix& eq_rows,
                          const Matrix& ineq_rows, std::vector<Index> active_ids,
                          int max_pivots) {
  const Index n = grad_f.size();
  if ((eq_rows.rows() > 0 && eq_rows.cols() != n) ||
      (ineq_rows.rows() > 0 && ineq_rows.cols() != n) ||
      static_cast<Index>(active_ids.size()) != ineq_rows.rows()) {
    throw DimensionError("measure_y: inconsistent shapes");
  }
  Layout l;
  l.y_dim = n;
  l.use_y = true;
  const BlockGradient gf{Matrix(0, 0), grad_f};
  std::vector<BlockGradient> eq, in;
  for (Index i = 0; i < eq_rows.rows(); ++i) {
    eq.push_back(BlockGradient{Matrix(0, 0), eq_rows.row(i).transpose()});
  }
  for (Index i = 0; i < ineq_rows.rows(); ++i) {
    in.push_back(BlockGradient{Matrix(0, 0), ineq_rows.row(i).transpose()});
  }
  DirectionResult r = min_norm_direction(l, gf, eq, in, std::move(active_ids), max_pivots);
  debug_check(r, gf, eq, in);
  return r;
}

DirectionResult measure_kkt(const BlockGradient& grad_f,
                            std::span<const BlockGradient> grad_eq,
                            std::span<const BlockGradient> grad_ineq,
                            std::vector<Index> active_ids, int max_pivots) {
  if (static_cast<Index>(active_ids.size()) != static_cast<Index>(grad_ineq.size())) {
    throw DimensionError("measure_kkt: active ids and gradients disagree");
  }
  Layout l;
  l.x_rows = grad_f.x.rows();
  l.x_cols = grad_f.x.cols();
  l.y_dim = grad_f.y.size();
  l.use_x = l.x_rows * l.x_cols > 0;
  l.use_y = l.y_dim > 0;
  DirectionResult r =
      min_norm_direction(l, grad_f, grad_eq, grad_ineq, std::move(active_ids), max_pivots);
  debug_check(r, grad_f, grad_eq, grad_ineq);
  return r;
}

namespace {

DirectionResult measure_blocks(const PointEvaluation& ev, double delta,
                               bool use_x, bool use_y) {
  const Vector ineq = combined_inequalities(ev);
  const Index g_rows = ev.values.y_ineq.size();
  std::vector<Index> ids;
  std::vector<BlockGradient> in;
  for (Index j : active_set(ineq, delta)) {
    // y-only rows carry no information about the x block.
    if (!use_y && j < g_rows) continue;
    ids.push_back(j);
    in.push_back(restrict(inequality_gradient(ev, j), use_x, use_y));
  }
  std::vector<BlockGradient> eq;
  for (const auto& g : ev.grad_eq) eq.push_back(restrict(g, use_x, use_y));
  const BlockGradient gf = restrict(ev.grad_f, use_x, use_y);

  Layout l = layout_for(ev, use_x, use_y);
  DirectionResult r = min_norm_direction(l, gf, eq, in, std::move(ids), -1);
  if (!use_x) r.dx = Matrix(0, 0);
  if (!use_y) r.dy = Vector(0);
  debug_check(r, gf, eq, in);
  return r;
}

}  // namespace

DirectionResult measure_x(const PointEvaluation& ev, double delta) {
  return measure_blocks(ev, delta, true, false);
}

DirectionResult measure_y(const PointEvaluation& ev, double delta) {
  return measure_blocks(ev, delta, false, true);
}

DirectionResult measure_kkt(const PointEvaluation& ev, double delta) {
  return measure_blocks(ev, delta, true, true);
}

double direction_invariant_violation(const DirectionResult& r,
                                     const BlockGradient& grad_f,
                                     std::span<const BlockGradient> grad_eq,
                                     std::span<const BlockGradient> grad_ineq) {
  auto pair_dot = [&](const BlockGradient& g) {
    double s = 0.0;
    if (r.dx.size() > 0 && g.x.size() == r.dx.size()) {
      s += (g.x.array() * r.dx.array()).sum();
    }
    if (r.dy.size() > 0 && g.y.size() == r.dy.size()) s += g.y.dot(r.dy);
    return s;
  };
  double worst = std::max(0.0, r.direction_norm() - 1.0);
  for (const auto& g : grad_eq) worst = std::max(worst, std::abs(pair_dot(g)));
  for (const auto& g : grad_ineq) worst = std::max(worst, pair_dot(g));
  worst = std::max(worst, std::abs(pair_dot(grad_f) + r.measure));
  if (r.ineq_multipliers.size() > 0) {
    worst = std::max(worst, -r.ineq_multipliers.minCoeff());
  }
  return worst;
}

}  // namespace specopt
