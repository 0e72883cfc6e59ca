#pragma once

#include <cstdint>
#include <vector>

#include "specopt/solver.hpp"
#include "specopt/spectral.hpp"

namespace specopt::apps {

/// min ||x||^2 s.t. x^T A_i x >= 1, x in R^2.
struct QcqpInstance {
  Eigen::Index m = 0;
  std::uint64_t seed = 0;
  std::vector<Matrix> a;  // 2x2, positive definite
};

/// A_i = B_i^T B_i + 0.05 I with B_i standard Gaussian 2x2.
QcqpInstance qcqp_instance(Eigen::Index m, std::uint64_t seed);

/// min_i x^T A_i x.
double qcqp_min_constraint(const QcqpInstance& inst, const Vector& x);

/// min tr X s.t. <A_i, X> >= 1, lambda_1 >= delta, 0 <= lambda_2 <= delta.
MatrixProblem build_sco_problem(const QcqpInstance& inst, double delta);

/// Semidefinite relaxation min tr X s.t. <A_i, X> >= 1, X PSD, solved by a
/// log-barrier method to duality gap 1e-9.
Matrix sdr_solve(const QcqpInstance& inst);

struct RoundedPoint {
  Vector x;
  double value = 0.0;
};

/// Scales xi onto the boundary: x = xi / sqrt(min_i xi^T A_i xi).
RoundedPoint scale_to_feasible(const QcqpInstance& inst, const Vector& xi);

/// Best of `samples` Gaussian draws xi ~ N(0, X*), each scaled onto the
/// feasible boundary.
RoundedPoint randomize(const Matrix& xstar, const QcqpInstance& inst, int samples,
                       std::uint64_t seed);

/// sqrt(lambda_1) v_1 scaled onto the feasible boundary. Throws DomainError
/// when lambda_1 <= 0.
RoundedPoint project_rank1(const Matrix& xstar, const QcqpInstance& inst);

struct OracleResult {
  double value = 0.0;
  Vector x;
};

/// Polar grid search: r(theta)^2 = 1 / min_i u^T A_i u is exact per angle;
/// the best angle is then refined locally.
OracleResult grid_oracle(const QcqpInstance& inst, int angles = 200000);

/// Rounded values within this distance of the oracle count as solved.
inline constexpr double kQcqpSolvedTol = 0.013;

struct DeltaOutcome {
  double delta = 0.0;
  double ours_orig = 0.0;
  RoundedPoint ours_random;
  RoundedPoint ours_project;
  bool orig_solved = false;
  bool random_solved = false;
  bool project_solved = false;
  SolveStatus status = SolveStatus::kStalled;
  /// Final matrix of the best start.
  Matrix x_final;
  /// One trace per start that was solved.
  std::vector<SolverTrace> traces;
  int starts_solved = 0;
  /// No start produced a result, or rounding failed.
  bool failed = false;
};

struct QcqpOutcome {
  double oracle_opt = 0.0;
  Vector oracle_x;
  Matrix sdr_x;
  double sdr_orig = 0.0;
  RoundedPoint sdr_random;
  bool sdr_random_solved = false;
  std::vector<DeltaOutcome> per_delta;
};

/// SDR, randomization, then for each delta a multi-start relaxation solve
/// (one SDR-projected start and restarts - 1 random starts) followed by both
/// roundings.
QcqpOutcome run_qcqp_comparison(const QcqpInstance& inst,
                                const std::vector<double>& deltas, int restarts,
                                int samples, std::uint64_t seed,
                                const SolverConfig& cfg = {});

}  // namespace specopt::apps
