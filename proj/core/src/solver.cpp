#include "specopt/solver.hpp"

#include <cmath>
#include <fstream>

#include "specopt/errors.hpp"
#include "specopt/trace_io.hpp"

namespace specopt {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::kY: return "Y";
    case Phase::kX: return "X";
    case Phase::kJoint: return "JOINT";
  }
  return "?";
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kKkt: return "KKT";
    case SolveStatus::kCap: return "cap";
    case SolveStatus::kStalled: return "stalled";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(eps_y > 0 && eps_x > 0 && eps_kkt > 0)) {
    throw DomainError("SolverConfig: tolerances must be positive");
  }
  if (!(delta1 >= 0 && delta2 >= 0)) {
    throw DomainError("SolverConfig: active-set widths must be nonnegative");
  }
  if (!(alpha > 0 && alpha < 1) || !(gamma > 0 && gamma < 1)) {
    throw DomainError("SolverConfig: alpha and gamma must lie in (0,1)");
  }
  if (!(t_base > 0) || !(min_step > 0) || !(tol_feas > 0) || max_outer < 0) {
    throw DomainError("SolverConfig: t_base, min_step, tol_feas must be positive");
  }
}

namespace {

ProjectionReport trial_point(const BlockProblem& problem, Phase phase,
                             const BlockPoint& z, const DirectionResult& dir,
                             double t, const SolverConfig& cfg) {
  switch (phase) {
    case Phase::kY:
      return project_y(z.y + t * dir.dy, z, problem, cfg.projection);
    case Phase::kX: {
      const ManifoldPoint x = retract(z.x, TangentVector(z.x, t * dir.dx));
      return project_x(x, z.y, problem, cfg.projection);
    }
    case Phase::kJoint: {
      BlockPoint q{retract(z.x, TangentVector(z.x, t * dir.dx)), z.y + t * dir.dy};
      return project_joint(q, problem, cfg.projection);
    }
  }
  throw DomainError("armijo_search: unknown phase");
}

}  // namespace

StepResult armijo_search(const BlockProblem& problem, Phase phase,
                         const PointEvaluation& ev, const DirectionResult& dir,
                         const SolverConfig& cfg) {
  StepResult out;
  double t = cfg.t_base;
  for (int j = 0; t >= cfg.min_step; ++j, t *= cfg.gamma) {
    ProjectionReport rep;
    try {
      rep = trial_point(problem, phase, ev.point, dir, t, cfg);
    } catch (const Error&) {
      continue;
    }
    if (!rep.success || rep.rejected) continue;
    const double f = problem.objective.value(rep.point);
    if (!std::isfinite(f) || f > ev.f - cfg.alpha * t * dir.measure) continue;
    // The test can pass with f == ev.f once alpha*t*m is below the spacing
    // of doubles near f; such a step makes no progress.
    if (!(f < ev.f)) {
      out.below_resolution = true;
      continue;
    }
    {
      out.accepted = true;
      out.t = t;
      out.backtracks = j;
      out.f = f;
      out.point = rep.point;
      out.report = std::move(rep);
      return out;
    }
  }
  out.point = ev.point;
  out.f = ev.f;
  out.t = t;
  return out;
}

SolveResult solve(const BlockProblem& problem, const BlockPoint& z0,
                  const SolverConfig& cfg) {
  cfg.validate();
  const ConstraintValues cv0 = evaluate_constraints(problem, z0);
  if (cv0.residual_eq() > cfg.tol_feas || cv0.residual_ineq() > cfg.tol_feas) {
    throw DomainError("solve: starting point is not feasible");
  }

  SolveResult res;
  BlockPoint z = z0;
  bool done = false;
  int k = 0;
  for (; k < cfg.max_outer && !done; ++k) {
    const PointEvaluation ev = evaluate_point(problem, z);
    Phase phase = Phase::kY;
    DirectionResult dir;
    try {
      dir = measure_y(ev, cfg.delta1);
      res.m_y = dir.measure;
      if (dir.measure <= cfg.eps_y) {
        phase = Phase::kX;
        dir = measure_x(ev, cfg.delta1);
        res.m_x = dir.measure;
        if (dir.measure <= cfg.eps_x) {
          phase = Phase::kJoint;
          dir = measure_kkt(ev, cfg.delta2);
          res.m_kkt = dir.measure;
          if (dir.measure <= cfg.eps_kkt) {
            res.trace.status = SolveStatus::kKkt;
            done = true;
            break;
          }
        }
      }
    } catch (const Error& e) {
      res.trace.status = SolveStatus::kStalled;
      res.trace.diagnostic = std::string("measure failed: ") + e.what();
      done = true;
      break;
    }

    const StepResult step = armijo_search(problem, phase, ev, dir, cfg);
    if (!step.accepted) {
      res.trace.status = SolveStatus::kStalled;
      res.trace.diagnostic = std::string(to_string(phase)) +
                             " line search reached min_step (measure " +
                             std::to_string(dir.measure) + ")" +
                             (step.below_resolution
                                  ? "; decrease below floating-point resolution of f"
                                  : "");
      done = true;
      break;
    }
    TraceRecord rec;
    rec.iteration = k;
    rec.phase = phase;
    rec.measure = dir.measure;
    rec.t = step.t;
    rec.backtracks = step.backtracks;
    rec.f_before = ev.f;
    rec.f = step.f;
    rec.residual_eq = step.report.residual_eq;
    rec.residual_ineq = step.report.residual_ineq;
    rec.projection = step.report.method;
    res.trace.records.push_back(rec);
    z = step.point;
  }
  if (!done) res.trace.status = SolveStatus::kCap;

  res.point = z;
  res.f_final = problem.objective.value(z);
  if (res.trace.status != SolveStatus::kKkt) {
    try {
      const PointEvaluation ev = evaluate_point(problem, z);
      res.m_y = measure_y(ev, cfg.delta1).measure;
      res.m_x = measure_x(ev, cfg.delta1).measure;
      res.m_kkt = measure_kkt(ev, cfg.delta2).measure;
    } catch (const Error& e) {
      if (res.trace.diagnostic.empty()) {
        res.trace.diagnostic = std::string("exit measures failed: ") + e.what();
      }
    }
  }
  if (!cfg.trace_path.empty()) write_trace_jsonl(res.trace, cfg.trace_path);
  return res;
}

SolveResult solve_multistart(const BlockProblem& problem,
                             const std::vector<BlockPoint>& starts,
                             const SolverConfig& cfg) {
  std::optional<SolveResult> best;
  for (const BlockPoint& z0 : starts) {
    const ConstraintValues cv = evaluate_constraints(problem, z0);
    if (cv.residual_eq() > cfg.tol_feas || cv.residual_ineq() > cfg.tol_feas) continue;
    SolveResult r = solve(problem, z0, cfg);
    if (!best || r.f_final < best->f_final) best = std::move(r);
  }
  if (!best) throw DomainError("solve_multistart: no feasible start");
  return std::move(*best);
}

}  // namespace specopt
