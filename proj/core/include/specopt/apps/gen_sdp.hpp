#pragma once

#include <cstdint>
#include <vector>

#include "specopt/solver.hpp"
#include "specopt/spectral.hpp"

namespace specopt::apps {

/// min <-I, X> s.t. <A_i, X> = l_i, partial sums of the i smallest
/// eigenvalues <= b_i, lambda_n >= 0. The planted C is optimal with value
/// -b_n.
struct GenSdpInstance {
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  std::uint64_t seed = 0;
  std::vector<Matrix> a;
  Vector ell;
  Vector b;
  Matrix c;
  double f_star = 0.0;
};

/// C = M^T M + 0.1 I with M standard Gaussian; A_i = (G + G^T) / 2.
GenSdpInstance gen_sdp_instance(Eigen::Index n, Eigen::Index s, std::uint64_t seed);

/// Largest violation of the instance invariants (0 for a valid instance).
double gen_sdp_invariant_violation(const GenSdpInstance& inst);

MatrixProblem build_gen_sdp_problem(const GenSdpInstance& inst);

/// Feasible start obtained by restoring a random symmetric matrix. Retries
/// with derived seeds; throws NumericError when every attempt fails.
BlockPoint gen_sdp_start(const GenSdpInstance& inst, const BlockProblem& problem,
                         std::uint64_t seed);

struct GenSdpRun {
  double f = 0.0;
  double f_star = 0.0;
  double dist_to_opt = 0.0;
  /// ||G(X)||_2 at the reconstructed final matrix.
  double residual_eq = 0.0;
  /// ||max(g(lambda(X)), 0)||_2 at the reconstructed final matrix.
  double residual_ineq = 0.0;
  bool solved = false;
  SolveResult result;
};

/// Solved when |f - f*|, residual_eq and residual_ineq are all <= 1e-6.
inline constexpr double kGenSdpSolvedTol = 1e-6;

GenSdpRun run_gen_sdp(const GenSdpInstance& inst, const SolverConfig& cfg);

}  // namespace specopt::apps
