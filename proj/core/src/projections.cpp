#include "specopt/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specopt/errors.hpp"

namespace specopt {

namespace {

using Eigen::Index;

// Rows within this distance of their boundary are linearised together with
// the violated ones.
constexpr double kNearActive = 1e-10;

double distance(const BlockPoint& a, const BlockPoint& b) {
  return std::sqrt((a.x.matrix() - b.x.matrix()).squaredNorm() +
                   (a.y - b.y).squaredNorm());
}

bool within(const ConstraintValues& cv, double tol) {
  return cv.residual_eq() <= tol && cv.residual_ineq() <= tol;
}

double combined_residual(const ConstraintValues& cv) {
  return std::max(cv.residual_eq(), cv.residual_ineq());
}

double merit(const ConstraintValues& cv) {
  double m = cv.eq.squaredNorm();
  m += cv.coupled.cwiseMax(0.0).squaredNorm();
  m += cv.y_ineq.cwiseMax(0.0).squaredNorm();
  return m;
}

void fill_report(ProjectionReport& rep, const BlockPoint& query,
                 const BlockPoint& z, const ConstraintValues& cv, double tol) {
  rep.point = z;
  rep.residual_eq = cv.residual_eq();
  rep.residual_ineq = cv.residual_ineq();
  rep.moved = distance(query, z);
  rep.success = within(cv, tol);
  rep.rejected = !rep.success;
}

struct Blocks {
  bool x = true;
  bool y = true;
};

// Linearised rows at z: all equalities plus every inequality that is
// violated or within kNearActive of its boundary (clamped to the boundary).
struct LinearRows {
  Matrix jac;  // rows x dim
  Vector values;
  Index num_eq = 0;
};

LinearRows linearise(const BlockProblem& problem, const BlockPoint& z,
                     const ConstraintValues& cv, Blocks blocks) {
  const Index nx = blocks.x ? z.x.rows() * z.x.cols() : 0;
  const Index ny = blocks.y ? z.y.size() : 0;
  std::vector<Vector> rows;
  std::vector<double> vals;
  auto push = [&](const BlockGradient& g, double v) {
    Vector r(nx + ny);
    if (nx > 0) r.head(nx) = Eigen::Map<const Vector>(g.x.data(), nx);
    if (ny > 0) r.tail(ny) = g.y;
    rows.push_back(std::move(r));
    vals.push_back(v);
  };
  for (size_t i = 0; i < problem.equalities.size(); ++i) {
    push(problem.equalities[i].gradient(z), cv.eq(static_cast<Index>(i)));
  }
  for (size_t i = 0; i < problem.coupled_inequalities.size(); ++i) {
    const double v = cv.coupled(static_cast<Index>(i));
    if (v > -kNearActive) push(problem.coupled_inequalities[i].gradient(z), v);
  }
  if (blocks.y && problem.y_inequalities.rows > 0) {
    Matrix jac;
    for (Index j = 0; j < cv.y_ineq.size(); ++j) {
      const double v = cv.y_ineq(j);
      if (v <= -kNearActive) continue;
      if (jac.size() == 0) jac = problem.y_inequalities.jacobian(z.y);
      BlockGradient g{Matrix::Zero(z.x.rows(), z.x.cols()), jac.row(j).transpose()};
      push(g, v);
    }
  }
  LinearRows out;
  out.num_eq = problem.num_equalities();
  out.jac.resize(static_cast<Index>(rows.size()), nx + ny);
  out.values.resize(static_cast<Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    out.jac.row(static_cast<Index>(i)) = rows[i].transpose();
    out.values(static_cast<Index>(i)) = vals[i];
  }
  return out;
}

// Minimum-norm Gauss-Newton correction d solving J d = -values.
Vector gauss_newton_step(const LinearRows& lin) {
  if (lin.jac.rows() == 0) return Vector::Zero(lin.jac.cols());
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(lin.jac);
  cod.setThreshold(1e-12);
  return cod.solve(-lin.values);
}

void check_equality_licq(const LinearRows& lin) {
  if (lin.num_eq == 0) return;
  Eigen::ColPivHouseholderQR<Matrix> qr(lin.jac.topRows(lin.num_eq).transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() < lin.num_eq) {
    std::vector<int> bad;
    const auto& perm = qr.colsPermutation().indices();
    for (Index i = qr.rank(); i < lin.num_eq; ++i) bad.push_back(perm(i));
    std::sort(bad.begin(), bad.end());
    throw LicqError("projection: equality constraint gradients are dependent", bad);
  }
}

BlockPoint apply_step(const BlockPoint& z, const Vector& d, Blocks blocks,
                      double tau) {
  BlockPoint out = z;
  Index off = 0;
  if (blocks.x) {
    const Index nx = z.x.rows() * z.x.cols();
    const Matrix dx = Eigen::Map<const Matrix>(d.data(), z.x.rows(), z.x.cols());
    off = nx;
    if (dx.squaredNorm() > 0.0) out.x = nearest_point(z.x.matrix() + tau * dx);
  }
  if (blocks.y) out.y = z.y + tau * d.segment(off, z.y.size());
  return out;
}

// Alternating restoration z <- P_M(Phi(z)) on the selected blocks.
ProjectionReport alternating(const BlockPoint& query, const BlockProblem& problem,
                             const ProjectionOptions& opts, Blocks blocks) {
  ProjectionReport rep;
  rep.method = ProjectionMethod::kAlternating;
  BlockPoint z = query;
  ConstraintValues cv = evaluate_constraints(problem, z);
  const double initial = combined_residual(cv);
  rep.residual_history.push_back(initial);
  if (within(cv, opts.tol_feas)) {
    rep.method = ProjectionMethod::kIdentity;
    fill_report(rep, query, z, cv, opts.tol_feas);
    return rep;
  }
  if (!blocks.y && cv.y_ineq.size() > 0 && cv.y_ineq.maxCoeff() > opts.tol_feas) {
    // y is frozen and already infeasible: nothing to restore on x.
    fill_report(rep, query, z, cv, opts.tol_feas);
    return rep;
  }
  for (int it = 0; it < opts.max_restore; ++it) {
    const LinearRows lin = linearise(problem, z, cv, blocks);
    if (it == 0 && blocks.x && !blocks.y) check_equality_licq(lin);
    const Vector d = gauss_newton_step(lin);
    if (!d.allFinite()) break;
    try {
      z = apply_step(z, d, blocks, 1.0);
    } catch (const NumericError&) {
      break;
    }
    cv = evaluate_constraints(problem, z);
    const double res = combined_residual(cv);
    rep.iterations = it + 1;
    rep.residual_history.push_back(res);
    if (!std::isfinite(res) || res > 1e3 * std::max(initial, opts.tol_feas)) break;
    if (within(cv, opts.tol_feas)) break;
  }
  fill_report(rep, query, z, cv, opts.tol_feas);
  return rep;
}

}  // namespace

const char* to_string(ProjectionMethod m) {
  switch (m) {
    case ProjectionMethod::kIdentity: return "identity";
    case ProjectionMethod::kPolyhedral: return "polyhedral";
    case ProjectionMethod::kAlternating: return "alternating";
    case ProjectionMethod::kPenalty: return "penalty";
  }
  return "unknown";
}

Vector project_polyhedron(const Vector& query, const Matrix& e, const Vector& d,
                          const Matrix& a, const Vector& b, const Vector& start,
                          double tol) {
  const Index n = query.size();
  const Index p = e.rows();
  const Index m = a.rows();
  if (start.size() != n || (p > 0 && e.cols() != n) || (m > 0 && a.cols() != n) ||
      d.size() != p || b.size() != m) {
    throw DimensionError("project_polyhedron: inconsistent shapes");
  }
  const double scale = 1.0 + query.norm() + start.norm();
  Vector x = start;

  // Remove the small infeasibility of the warm start.
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Index> viol;
    for (Index i = 0; i < m; ++i) {
      if (a.row(i).dot(x) - b(i) > 0.0) viol.push_back(i);
    }
    Matrix j(p + static_cast<Index>(viol.size()), n);
    Vector r(j.rows());
    if (p > 0) {
      j.topRows(p) = e;
      r.head(p) = e * x - d;
    }
    for (size_t k = 0; k < viol.size(); ++k) {
      j.row(p + static_cast<Index>(k)) = a.row(viol[k]);
      r(p + static_cast<Index>(k)) = a.row(viol[k]).dot(x) - b(viol[k]);
    }
    if (r.size() == 0 || r.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
    if (r.cwiseAbs().maxCoeff() > 1e3 * tol * scale) {
      throw DomainError("project_polyhedron: warm start is not feasible");
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(j);
    x -= cod.solve(r);
  }

  std::vector<Index> work;
  std::vector<bool> in_work(static_cast<size_t>(m), false);
  auto working_matrix = [&]() {
    Matrix mm(p + static_cast<Index>(work.size()), n);
    if (p > 0) mm.topRows(p) = e;
    for (size_t k = 0; k < work.size(); ++k) mm.row(p + static_cast<Index>(k)) = a.row(work[k]);
    return mm;
  };
  auto rank_of = [](const Matrix& mm) {
    if (mm.rows() == 0) return Index{0};
    Eigen::ColPivHouseholderQR<Matrix> qr(mm.transpose());
    qr.setThreshold(1e-10);
    return qr.rank();
  };
  Index rank = rank_of(working_matrix());
  for (Index i = 0; i < m; ++i) {
    if (std::abs(a.row(i).dot(x) - b(i)) <= 1e-12 * scale) {
      work.push_back(i);
      const Index r2 = rank_of(working_matrix());
      if (r2 > rank) {
        rank = r2;
        in_work[static_cast<size_t>(i)] = true;
      } else {
        work.pop_back();
      }
    }
  }

  const int max_iter = static_cast<int>(20 * (n + m) + 100);
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = x - query;
    const Matrix mm = working_matrix();
    Vector nu = Vector::Zero(mm.rows());
    Vector step = -g;
    if (mm.rows() > 0) {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(mm.transpose());
      nu = cod.solve(-g);
      step = -(g + mm.transpose() * nu);
    }
    if (step.norm() <= 1e-13 * scale) {
      Index drop = -1;
      double most_negative = -1e-12 * scale;
      for (size_t k = 0; k < work.size(); ++k) {
        const double mu = nu(p + static_cast<Index>(k));
        if (mu < most_negative) {
          most_negative = mu;
          drop = static_cast<Index>(k);
        }
      }
      if (drop < 0) return x;
      in_work[static_cast<size_t>(work[static_cast<size_t>(drop)])] = false;
      work.erase(work.begin() + drop);
      continue;
    }
    double alpha = 1.0;
    Index block = -1;
    const double step_norm = step.norm();
    for (Index i = 0; i < m; ++i) {
      if (in_work[static_cast<size_t>(i)]) continue;
      const double ap = a.row(i).dot(step);
      if (ap <= 1e-14 * a.row(i).norm() * step_norm) continue;
      const double slack = std::max(0.0, b(i) - a.row(i).dot(x));
      const double ai = slack / ap;
      if (ai < alpha) {
        alpha = ai;
        block = i;
      }
    }
    x += alpha * step;
    if (block >= 0) {
      work.push_back(block);
      in_work[static_cast<size_t>(block)] = true;
    }
  }
  throw NumericError("project_polyhedron: active-set iteration limit reached");
}

ProjectionReport project_y(const Vector& y_query, const BlockPoint& anchor,
                           const BlockProblem& problem,
                           const ProjectionOptions& opts) {
  if (y_query.size() != anchor.y.size()) {
    throw DimensionError("project_y: query has wrong size");
  }
  const BlockPoint query{anchor.x, y_query};
  ConstraintValues cv = evaluate_constraints(problem, query);
  ProjectionReport rep;
  rep.residual_history.push_back(combined_residual(cv));
  if (within(cv, opts.tol_feas)) {
    rep.method = ProjectionMethod::kIdentity;
    fill_report(rep, query, query, cv, opts.tol_feas);
    return rep;
  }

  BlockPoint z = query;
  if (problem.affine_in_y && problem.y_inequalities.affine) {
    rep.method = ProjectionMethod::kPolyhedral;
    const Index n = anchor.y.size();
    const ConstraintValues ca = evaluate_constraints(problem, anchor);
    const Index p = problem.num_equalities();
    const Index hcount = problem.num_coupled();
    const Index grows = problem.y_inequalities.rows;
    Matrix e(p, n);
    for (Index i = 0; i < p; ++i) {
      e.row(i) = problem.equalities[static_cast<size_t>(i)].gradient(anchor).y.transpose();
    }
    const Vector d = e * anchor.y - ca.eq;
    Matrix a(grows + hcount, n);
    Vector b(grows + hcount);
    if (grows > 0) {
      a.topRows(grows) = problem.y_inequalities.jacobian(anchor.y);
      b.head(grows) = a.topRows(grows) * anchor.y - ca.y_ineq;
    }
    for (Index i = 0; i < hcount; ++i) {
      a.row(grows + i) =
          problem.coupled_inequalities[static_cast<size_t>(i)].gradient(anchor).y.transpose();
      b(grows + i) = a.row(grows + i).dot(anchor.y) - ca.coupled(i);
    }
    try {
      z.y = project_polyhedron(y_query, e, d, a, b, anchor.y, opts.tol_feas);
      rep.iterations = 1;
    } catch (const NumericError&) {
      z = anchor;
    }
    cv = evaluate_constraints(problem, z);
  } else {
    rep.method = ProjectionMethod::kAlternating;
    for (int it = 0; it < opts.max_restore && !within(cv, opts.tol_feas); ++it) {
      const LinearRows lin = linearise(problem, z, cv, Blocks{false, true});
      const Vector dy = gauss_newton_step(lin);
      if (!dy.allFinite()) break;
      z.y += dy;
      cv = evaluate_constraints(problem, z);
      rep.iterations = it + 1;
      rep.residual_history.push_back(combined_residual(cv));
    }
  }
  rep.residual_history.push_back(combined_residual(cv));
  fill_report(rep, query, z, cv, opts.tol_feas);
  const double anchor_gap = (anchor.y - y_query).norm();
  if (!rep.success || rep.moved > anchor_gap * (1 + 1e-12) + 1e-15) {
    const ConstraintValues ca = evaluate_constraints(problem, anchor);
    fill_report(rep, query, anchor, ca, opts.tol_feas);
    rep.rejected = true;
  }
  return rep;
}

ProjectionReport project_x(const ManifoldPoint& x_query, const Vector& y,
                           const BlockProblem& problem,
                           const ProjectionOptions& opts) {
  const BlockPoint query{x_query, y};
  ProjectionReport rep = alternating(query, problem, opts, Blocks{true, false});
  if (!rep.success && opts.penalty_fallback) {
    ProjectionReport pen = penalty_project(query, problem, Penalty::squared(), opts);
    if (pen.success) return pen;
  }
  return rep;
}

ProjectionReport project_joint(const BlockPoint& z_query,
                               const BlockProblem& problem,
                               const ProjectionOptions& opts) {
  ProjectionReport rep = alternating(z_query, problem, opts, Blocks{true, true});
  if (!rep.success && opts.penalty_fallback && rep.residual_history.size() > 1) {
    // Finish the x restoration by penalty descent from the best y found.
    const ConstraintValues cv = evaluate_constraints(problem, rep.point);
    if (cv.y_ineq.size() == 0 || cv.y_ineq.maxCoeff() <= opts.tol_feas) {
      ProjectionReport pen = penalty_project(rep.point, problem, Penalty::squared(), opts);
      if (pen.success) {
        pen.moved = distance(z_query, pen.point);
        return pen;
      }
    }
  }
  return rep;
}

Penalty Penalty::squared() {
  return Penalty{[](const Vector& r) { return 0.5 * r.squaredNorm(); },
                 [](const Vector& r) { return r; }};
}

ProjectionReport penalty_project(const BlockPoint& z_query,
                                 const BlockProblem& problem, const Penalty& pen,
                                 const ProjectionOptions& opts) {
  ProjectionReport rep;
  rep.method = ProjectionMethod::kPenalty;
  const Index p = problem.num_equalities();
  const Index hcount = problem.num_coupled();

  auto stacked = [&](const ConstraintValues& cv) {
    Vector r(p + hcount);
    r << cv.eq, cv.coupled.cwiseMax(0.0);
    return r;
  };

  BlockPoint z = z_query;
  ConstraintValues cv = evaluate_constraints(problem, z);
  rep.residual_history.push_back(combined_residual(cv));
  double value = pen.value(stacked(cv));
  double t = 1.0;
  for (int it = 0; it < opts.max_penalty_iterations; ++it) {
    if (within(cv, opts.tol_feas)) break;
    const Vector w = pen.gradient(stacked(cv));
    Matrix grad = Matrix::Zero(z.x.rows(), z.x.cols());
    for (Index i = 0; i < p; ++i) {
      grad += w(i) * problem.equalities[static_cast<size_t>(i)].gradient(z).x;
    }
    for (Index i = 0; i < hcount; ++i) {
      if (w(p + i) != 0.0) {
        grad += w(p + i) * problem.coupled_inequalities[static_cast<size_t>(i)].gradient(z).x;
      }
    }
    const double g2 = grad.squaredNorm();
    if (!(g2 > 0.0)) break;
    t = std::min(2.0 * t, 1e12);
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      const BlockPoint trial{retract(z.x, TangentVector(z.x, -t * grad)), z.y};
      const ConstraintValues ct = evaluate_constraints(problem, trial);
      const double vt = pen.value(stacked(ct));
      if (vt <= value - 1e-4 * t * g2) {
        z = trial;
        cv = ct;
        value = vt;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    rep.iterations = it + 1;
    rep.residual_history.push_back(combined_residual(cv));
    if (!accepted) break;
  }
  fill_report(rep, z_query, z, cv, opts.tol_feas);
  return rep;
}

std::optional<BlockPoint> restore_feasibility(const BlockPoint& query,
                                              const BlockProblem& problem,
                                              const ProjectionOptions& opts,
                                              int max_iterations) {
  BlockPoint z = query;
  ConstraintValues cv = evaluate_constraints(problem, z);
  double m = merit(cv);
  for (int it = 0; it < max_iterations; ++it) {
    if (within(cv, opts.tol_feas)) return z;
    const LinearRows lin = linearise(problem, z, cv, Blocks{true, true});
    const Vector d = gauss_newton_step(lin);
    if (!d.allFinite()) return std::nullopt;
    bool accepted = false;
    double tau = 1.0;
    for (int bt = 0; bt < 40; ++bt, tau *= 0.5) {
      BlockPoint trial;
      try {
        trial = apply_step(z, d, Blocks{true, true}, tau);
      } catch (const NumericError&) {
        continue;
      }
      const ConstraintValues ct = evaluate_constraints(problem, trial);
      const double mt = merit(ct);
      if (std::isfinite(mt) && mt < m) {
        z = std::move(trial);
        cv = ct;
        m = mt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (within(cv, opts.tol_feas)) return z;
  return std::nullopt;
}

}  // namespace specopt
