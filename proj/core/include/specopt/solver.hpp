#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specopt/directions.hpp"
#include "specopt/problem.hpp"
#include "specopt/projections.hpp"

namespace specopt {

enum class Phase { kY, kX, kJoint };
const char* to_string(Phase p);

struct SolverConfig {
  double eps_y = 1e-6;
  double eps_x = 1e-6;
  double eps_kkt = 1e-6;
  double delta1 = 1e-6;
  double delta2 = 1e-6;
  double alpha = 1e-4;
  double gamma = 0.5;
  double t_base = 1.0;
  int max_outer = 5000;
  double min_step = 1e-14;
  double tol_feas = 1e-9;
  std::uint64_t seed = 0;
  /// When non-empty, one JSON object per accepted iteration is written here.
  std::string trace_path;
  ProjectionOptions projection;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

struct TraceRecord {
  int iteration = 0;
  Phase phase = Phase::kY;
  double measure = 0.0;
  double t = 0.0;
  int backtracks = 0;
  double f_before = 0.0;
  double f = 0.0;
  double residual_eq = 0.0;
  double residual_ineq = 0.0;
  ProjectionMethod projection = ProjectionMethod::kIdentity;
};

enum class SolveStatus { kKkt, kCap, kStalled };
const char* to_string(SolveStatus s);

struct SolverTrace {
  std::vector<TraceRecord> records;
  SolveStatus status = SolveStatus::kCap;
  std::string diagnostic;
};

struct SolveResult {
  BlockPoint point;
  double f_final = 0.0;
  double m_y = 0.0;
  double m_x = 0.0;
  double m_kkt = 0.0;
  SolverTrace trace;
  int iterations() const { return static_cast<int>(trace.records.size()); }
};

struct StepResult {
  bool accepted = false;
  double t = 0.0;
  int backtracks = 0;
  BlockPoint point;
  double f = 0.0;
  ProjectionReport report;
  /// Some trial passed the Armijo test without lowering f in floating point.
  bool below_resolution = false;
};

/// Backtracking over t = t_base * gamma^j. The trial point for each phase is
/// y: P_{C_y}(y + t d; x), x: P_{C_x}(R_x(t d); y), joint: P_C(R_z(t d)).
/// A failed or rejected projection counts as an Armijo failure, and so does
/// a trial whose objective is not strictly below f.
StepResult armijo_search(const BlockProblem& problem, Phase phase,
                         const PointEvaluation& ev, const DirectionResult& dir,
                         const SolverConfig& cfg);

/// Staged block-coordinate descent from a feasible start. Throws DomainError
/// when z0 violates the constraints by more than cfg.tol_feas.
SolveResult solve(const BlockProblem& problem, const BlockPoint& z0,
                  const SolverConfig& cfg = {});

/// Runs solve from each start and returns the result with the lowest final
/// objective (the first one on ties). Starts that are infeasible are skipped;
/// throws DomainError when none is usable.
SolveResult solve_multistart(const BlockProblem& problem,
                             const std::vector<BlockPoint>& starts,
                             const SolverConfig& cfg = {});

}  // namespace specopt
