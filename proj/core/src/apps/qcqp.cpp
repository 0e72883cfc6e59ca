#include "specopt/apps/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specopt/errors.hpp"
#include "specopt/projections.hpp"

namespace specopt::apps {

using Eigen::Index;

QcqpInstance qcqp_instance(Index m, std::uint64_t seed) {
  if (m < 1) throw DomainError("qcqp_instance: need m >= 1");
  std::mt19937_64 rng(seed);
  QcqpInstance inst;
  inst.m = m;
  inst.seed = seed;
  for (Index i = 0; i < m; ++i) {
    const Matrix b = gaussian_matrix(2, 2, rng);
    inst.a.push_back(sym(b.transpose() * b + 0.05 * Matrix::Identity(2, 2)));
  }
  return inst;
}

double qcqp_min_constraint(const QcqpInstance& inst, const Vector& x) {
  double lo = std::numeric_limits<double>::infinity();
  for (const Matrix& a : inst.a) lo = std::min(lo, x.dot(a * x));
  return lo;
}

MatrixProblem build_sco_problem(const QcqpInstance& inst, double delta) {
  if (!(delta >= 0.0)) throw DomainError("build_sco_problem: delta must be >= 0");
  MatrixProblem mp;
  mp.n = 2;
  mp.objective.value = [](const Matrix& x) { return x.trace(); };
  mp.objective.gradient = [](const Matrix&) -> Matrix { return Matrix::Identity(2, 2); };
  for (const Matrix& a : inst.a) {
    mp.inequalities.push_back(MatrixFunction{
        [a](const Matrix& x) { return 1.0 - (a.array() * x.array()).sum(); },
        [a](const Matrix&) -> Matrix { return -a; }});
  }
  Matrix jac(3, 2);
  jac << -1, 0, 0, -1, 0, 1;
  Vector offset(3);
  offset << -delta, 0.0, delta;
  mp.spectral.rows = 3;
  mp.spectral.affine = true;
  mp.spectral.value = [jac, offset](const Vector& lam) -> Vector {
    return jac * lam - offset;
  };
  mp.spectral.jacobian = [jac](const Vector&) { return jac; };
  mp.affine_coordinates = true;
  return mp;
}

namespace {

// Barrier objective on p = (x11, x12, x22); returns +inf outside the domain.
struct Barrier {
  const QcqpInstance& inst;
  std::vector<Eigen::Vector3d> w;

  explicit Barrier(const QcqpInstance& q) : inst(q) {
    for (const Matrix& a : q.a) w.emplace_back(a(0, 0), 2.0 * a(0, 1), a(1, 1));
  }

  double value(const Eigen::Vector3d& p, double t) const {
    const double det = p(0) * p(2) - p(1) * p(1);
    if (!(p(0) > 0.0 && det > 0.0)) return std::numeric_limits<double>::infinity();
    double v = t * (p(0) + p(2)) - std::log(det);
    for (const auto& wi : w) {
      const double s = wi.dot(p) - 1.0;
      if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
      v -= std::log(s);
    }
    return v;
  }

  void derivatives(const Eigen::Vector3d& p, double t, Eigen::Vector3d& g,
                   Eigen::Matrix3d& h) const {
    const double det = p(0) * p(2) - p(1) * p(1);
    const Eigen::Vector3d dd(p(2), -2.0 * p(1), p(0));
    Eigen::Matrix3d d2;
    d2 << 0, 0, 1, 0, -2, 0, 1, 0, 0;
    g = Eigen::Vector3d(t, 0.0, t) - dd / det;
    h = dd * dd.transpose() / (det * det) - d2 / det;
    for (const auto& wi : w) {
      const double s = wi.dot(p) - 1.0;
      g -= wi / s;
      h += wi * wi.transpose() / (s * s);
    }
  }
};

}  // namespace

Matrix sdr_solve(const QcqpInstance& inst) {
  const Barrier bar(inst);
  double min_tr = std::numeric_limits<double>::infinity();
  for (const Matrix& a : inst.a) min_tr = std::min(min_tr, a.trace());
  const double kappa = 2.0 / min_tr + 1.0;
  Eigen::Vector3d p(kappa, 0.0, kappa);
  const double nu = static_cast<double>(inst.m) + 2.0;
  double t = 1.0;
  for (int outer = 0; outer < 200; ++outer) {
    for (int it = 0; it < 200; ++it) {
      Eigen::Vector3d g;
      Eigen::Matrix3d h;
      bar.derivatives(p, t, g, h);
      const Eigen::Vector3d step = -h.ldlt().solve(g);
      const double decrement = -g.dot(step);
      if (!std::isfinite(decrement)) throw NumericError("sdr_solve: Newton step failed");
      if (decrement <= 1e-14) break;
      const double v0 = bar.value(p, t);
      double s = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt, s *= 0.5) {
        const Eigen::Vector3d q = p + s * step;
        if (bar.value(q, t) <= v0 - 0.25 * s * decrement) {
          p = q;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (nu / t <= 1e-9) {
      Matrix x(2, 2);
      x << p(0), p(1), p(1), p(2);
      return x;
    }
    t = std::min(t * 10.0, nu / 1e-9);
  }
  throw NumericError("sdr_solve: barrier method did not converge");
}

RoundedPoint scale_to_feasible(const QcqpInstance& inst, const Vector& xi) {
  const double lo = qcqp_min_constraint(inst, xi);
  if (!(lo > 0.0)) throw DomainError("scale_to_feasible: zero direction");
  RoundedPoint r;
  r.x = xi / std::sqrt(lo);
  r.value = r.x.squaredNorm();
  return r;
}

RoundedPoint randomize(const Matrix& xstar, const QcqpInstance& inst, int samples,
                       std::uint64_t seed) {
  if (samples < 1) throw DomainError("randomize: need at least one sample");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(xstar));
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  if (root.maxCoeff() <= 0.0) throw DomainError("randomize: covariance is zero");
  const Matrix factor = es.eigenvectors() * root.asDiagonal();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RoundedPoint best;
  best.value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Vector xi;
    for (int tries = 0;; ++tries) {
      Vector z(2);
      z(0) = normal(rng);
      z(1) = normal(rng);
      xi = factor * z;
      if (xi.squaredNorm() > 0.0) break;
      if (tries > 100) throw DomainError("randomize: degenerate draws");
    }
    RoundedPoint r = scale_to_feasible(inst, xi);
    if (r.value < best.value) best = std::move(r);
  }
  return best;
}

RoundedPoint project_rank1(const Matrix& xstar, const QcqpInstance& inst) {
  const SpectralPoint p = eig_sorted(SymmetricMatrix(xstar));
  if (!(p.lam()(0) > 0.0)) throw DomainError("project_rank1: top eigenvalue is not positive");
  const Vector xi = std::sqrt(p.lam()(0)) * p.q().matrix().col(0);
  return scale_to_feasible(inst, xi);
}

OracleResult grid_oracle(const QcqpInstance& inst, int angles) {
  if (angles < 8) throw DomainError("grid_oracle: too few angles");
  auto radius2 = [&](double theta) {
    Vector u(2);
    u << std::cos(theta), std::sin(theta);
    return 1.0 / qcqp_min_constraint(inst, u);
  };
  const double pi = std::numbers::pi;
  double best_theta = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < angles; ++k) {
    const double theta = pi * k / angles;
    const double v = radius2(theta);
    if (v < best) {
      best = v;
      best_theta = theta;
    }
  }
  double half = pi / angles;
  for (int pass = 0; pass < 4; ++pass) {
    const double centre = best_theta;
    for (int k = -500; k <= 500; ++k) {
      const double theta = centre + half * k / 500.0;
      const double v = radius2(theta);
      if (v < best) {
        best = v;
        best_theta = theta;
      }
    }
    half /= 250.0;
  }
  OracleResult r;
  r.value = best;
  r.x.resize(2);
  r.x << std::cos(best_theta), std::sin(best_theta);
  r.x *= std::sqrt(best);
  return r;
}

namespace {

std::optional<BlockPoint> restored_start(const Matrix& x, const BlockProblem& problem) {
  const SpectralPoint p = eig_sorted(SymmetricMatrix(x));
  return restore_feasibility(p.as_block(), problem);
}

}  // namespace

QcqpOutcome run_qcqp_comparison(const QcqpInstance& inst,
                                const std::vector<double>& deltas, int restarts,
                                int samples, std::uint64_t seed,
                                const SolverConfig& cfg) {
  if (restarts < 1) throw DomainError("run_qcqp_comparison: need restarts >= 1");
  QcqpOutcome out;
  const OracleResult oracle = grid_oracle(inst);
  out.oracle_opt = oracle.value;
  out.oracle_x = oracle.x;
  out.sdr_x = sdr_solve(inst);
  out.sdr_orig = out.sdr_x.trace();
  out.sdr_random = randomize(out.sdr_x, inst, samples, seed);
  out.sdr_random_solved = std::abs(out.sdr_random.value - out.oracle_opt) <= kQcqpSolvedTol;

  for (size_t di = 0; di < deltas.size(); ++di) {
    DeltaOutcome d;
    d.delta = deltas[di];
    const BlockProblem problem = decompose(build_sco_problem(inst, d.delta));

    std::vector<std::optional<BlockPoint>> starts;
    starts.push_back(restored_start(out.sdr_x, problem));
    std::mt19937_64 rng(seed * 1000003ULL + di + 1);
    for (int r = 1; r < restarts; ++r) {
      const Matrix g = gaussian_matrix(2, 2, rng);
      starts.push_back(restored_start(out.sdr_orig * sym(g), problem));
    }

    std::optional<SolveResult> best;
    for (const auto& z0 : starts) {
      if (!z0) continue;
      try {
        SolveResult r = solve(problem, *z0, cfg);
        d.traces.push_back(r.trace);
        ++d.starts_solved;
        if (!best || r.f_final < best->f_final) best = std::move(r);
      } catch (const Error&) {
        // An unusable start only reduces the multi-start pool.
      }
    }
    if (best) {
      d.status = best->trace.status;
      d.x_final = reconstruct(best->point.x, best->point.y);
      d.ours_orig = best->f_final;
      d.orig_solved = std::abs(d.ours_orig - out.oracle_opt) <= kQcqpSolvedTol;
      try {
        d.ours_random = randomize(d.x_final, inst, samples, seed + 1);
        d.random_solved = std::abs(d.ours_random.value - out.oracle_opt) <= kQcqpSolvedTol;
        d.ours_project = project_rank1(d.x_final, inst);
        d.project_solved = std::abs(d.ours_project.value - out.oracle_opt) <= kQcqpSolvedTol;
      } catch (const Error&) {
        d.failed = true;
      }
    } else {
      d.failed = true;
    }
    out.per_delta.push_back(std::move(d));
  }
  return out;
}

}  // namespace specopt::apps
