#include "specopt/problem.hpp"

#include <algorithm>
#include <cmath>

namespace specopt {

double ConstraintValues::residual_eq() const { return eq.norm(); }

double ConstraintValues::residual_ineq() const {
  double r = 0.0;
  if (coupled.size() > 0) r = std::max(r, coupled.maxCoeff());
  if (y_ineq.size() > 0) r = std::max(r, y_ineq.maxCoeff());
  return r;
}

ConstraintValues evaluate_constraints(const BlockProblem& problem,
                                      const BlockPoint& z) {
  ConstraintValues cv;
  cv.eq.resize(problem.num_equalities());
  for (Eigen::Index i = 0; i < cv.eq.size(); ++i) {
    cv.eq(i) = problem.equalities[static_cast<size_t>(i)].value(z);
  }
  cv.coupled.resize(problem.num_coupled());
  for (Eigen::Index i = 0; i < cv.coupled.size(); ++i) {
    cv.coupled(i) = problem.coupled_inequalities[static_cast<size_t>(i)].value(z);
  }
  cv.y_ineq = problem.y_inequalities.rows > 0
                  ? problem.y_inequalities.value(z.y)
                  : Vector(0);
  return cv;
}

namespace {

double rel(double err, double scale) { return err / std::max(1.0, scale); }

void audit_function(const BlockFunction& fn, const std::string& name,
                    const BlockPoint& z, std::mt19937_64& rng, double h,
                    int x_directions, GradientAuditReport& report) {
  const BlockGradient g = fn.gradient(z);
  Vector fd(z.y.size());
  for (Eigen::Index i = 0; i < z.y.size(); ++i) {
    BlockPoint zp = z, zm = z;
    zp.y(i) += h;
    zm.y(i) -= h;
    fd(i) = (fn.value(zp) - fn.value(zm)) / (2 * h);
  }
  const double ey = rel((fd - g.y).norm(), g.y.norm());
  if (ey > report.max_rel_error) {
    report.max_rel_error = ey;
    report.worst = name + " (y block)";
  }
  for (int k = 0; k < x_directions; ++k) {
    const Matrix raw = gaussian_matrix(z.x.rows(), z.x.cols(), rng);
    TangentVector xi = tangent_project(z.x, raw);
    xi = xi.scaled(1.0 / std::max(xi.matrix().norm(), 1e-300));
    const BlockPoint zp{retract(z.x, xi.scaled(h)), z.y};
    const BlockPoint zm{retract(z.x, xi.scaled(-h)), z.y};
    const double dd = (fn.value(zp) - fn.value(zm)) / (2 * h);
    const double an = (g.x.array() * xi.matrix().array()).sum();
    const double ex = rel(std::abs(dd - an), g.x.norm());
    if (ex > report.max_rel_error) {
      report.max_rel_error = ex;
      report.worst = name + " (x block)";
    }
  }
}

}  // namespace

GradientAuditReport audit_gradients(const BlockProblem& problem,
                                    const BlockPoint& z, std::mt19937_64& rng,
                                    double h, int x_directions) {
  GradientAuditReport report;
  audit_function(problem.objective, "f", z, rng, h, x_directions, report);
  for (size_t i = 0; i < problem.equalities.size(); ++i) {
    audit_function(problem.equalities[i], "c" + std::to_string(i), z, rng, h,
                   x_directions, report);
  }
  for (size_t i = 0; i < problem.coupled_inequalities.size(); ++i) {
    audit_function(problem.coupled_inequalities[i], "h" + std::to_string(i), z,
                   rng, h, x_directions, report);
  }
  const auto& gy = problem.y_inequalities;
  if (gy.rows > 0) {
    const Matrix jac = gy.jacobian(z.y);
    for (Eigen::Index j = 0; j < gy.rows; ++j) {
      Vector fd(z.y.size());
      for (Eigen::Index i = 0; i < z.y.size(); ++i) {
        Vector yp = z.y, ym = z.y;
        yp(i) += h;
        ym(i) -= h;
        fd(i) = (gy.value(yp)(j) - gy.value(ym)(j)) / (2 * h);
      }
      const double e = rel((fd - jac.row(j).transpose()).norm(), jac.row(j).norm());
      if (e > report.max_rel_error) {
        report.max_rel_error = e;
        report.worst = "g" + std::to_string(j);
      }
    }
  }
  return report;
}

}  // namespace specopt
