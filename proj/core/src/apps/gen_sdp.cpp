#include "specopt/apps/gen_sdp.hpp"

#include <algorithm>
#include <cmath>

#include "specopt/errors.hpp"
#include "specopt/projections.hpp"

namespace specopt::apps {

using Eigen::Index;

GenSdpInstance gen_sdp_instance(Index n, Index s, std::uint64_t seed) {
  if (n < 2 || s < 1) throw DomainError("gen_sdp_instance: need n >= 2, s >= 1");
  std::mt19937_64 rng(seed);
  GenSdpInstance inst;
  inst.n = n;
  inst.s = s;
  inst.seed = seed;
  const Matrix m = gaussian_matrix(n, n, rng);
  inst.c = m.transpose() * m + 0.1 * Matrix::Identity(n, n);
  inst.c = sym(inst.c);
  inst.ell.resize(s);
  for (Index i = 0; i < s; ++i) {
    const Matrix g = gaussian_matrix(n, n, rng);
    inst.a.push_back(sym(g));
    inst.ell(i) = (inst.a.back().array() * inst.c.array()).sum();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(inst.c, Eigen::EigenvaluesOnly);
  const Vector ascending = es.eigenvalues();
  inst.b.resize(n);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    acc += ascending(i);
    inst.b(i) = acc;
  }
  inst.f_star = -inst.b(n - 1);
  return inst;
}

double gen_sdp_invariant_violation(const GenSdpInstance& inst) {
  double worst = 0.0;
  for (Index i = 0; i < inst.s; ++i) {
    const double v = (inst.a[static_cast<size_t>(i)].array() * inst.c.array()).sum();
    worst = std::max(worst, std::abs(v - inst.ell(i)));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(inst.c, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Index i = 0; i < inst.n; ++i) {
    acc += es.eigenvalues()(i);
    worst = std::max(worst, std::abs(acc - inst.b(i)));
  }
  if (es.eigenvalues()(0) <= 0.0) worst = std::max(worst, 1.0);
  return worst;
}

MatrixProblem build_gen_sdp_problem(const GenSdpInstance& inst) {
  const Index n = inst.n;
  MatrixProblem mp;
  mp.n = n;
  mp.objective.value = [](const Matrix& x) { return -x.trace(); };
  mp.objective.gradient = [n](const Matrix&) -> Matrix {
    return -Matrix::Identity(n, n);
  };
  for (Index i = 0; i < inst.s; ++i) {
    const Matrix a = inst.a[static_cast<size_t>(i)];
    const double l = inst.ell(i);
    mp.equalities.push_back(MatrixFunction{
        [a, l](const Matrix& x) { return (a.array() * x.array()).sum() - l; },
        [a](const Matrix&) { return a; }});
  }
  // Row i (0-based, i < n): lambda_{n-i} + ... + lambda_n - b_{i+1};
  // row n: -lambda_n.
  Matrix jac = Matrix::Zero(n + 1, n);
  for (Index i = 0; i < n; ++i) jac.row(i).tail(i + 1).setOnes();
  jac(n, n - 1) = -1.0;
  Vector offset = Vector::Zero(n + 1);
  offset.head(n) = inst.b;
  mp.spectral.rows = n + 1;
  mp.spectral.affine = true;
  mp.spectral.value = [jac, offset](const Vector& lam) -> Vector {
    return jac * lam - offset;
  };
  mp.spectral.jacobian = [jac](const Vector&) { return jac; };
  mp.affine_coordinates = true;
  return mp;
}

BlockPoint gen_sdp_start(const GenSdpInstance& inst, const BlockProblem& problem,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const double scale = std::sqrt(inst.c.trace() / static_cast<double>(inst.n));
  ProjectionOptions opts;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const Matrix g = gaussian_matrix(inst.n, inst.n, rng);
    const SpectralPoint p = eig_sorted(SymmetricMatrix(scale * sym(g)));
    auto z = restore_feasibility(p.as_block(), problem, opts);
    if (z) return *z;
  }
  throw NumericError("gen_sdp_start: could not restore a feasible start");
}

GenSdpRun run_gen_sdp(const GenSdpInstance& inst, const SolverConfig& cfg) {
  const MatrixProblem mp = build_gen_sdp_problem(inst);
  const BlockProblem problem = decompose(mp);
  const BlockPoint z0 = gen_sdp_start(inst, problem, cfg.seed ^ inst.seed);
  GenSdpRun run;
  run.result = solve(problem, z0, cfg);
  const Matrix x = reconstruct(run.result.point.x, run.result.point.y);
  run.f = mp.objective.value(x);
  run.f_star = inst.f_star;
  run.dist_to_opt = std::abs(run.f - inst.f_star);
  Vector eq(inst.s);
  for (Index i = 0; i < inst.s; ++i) eq(i) = mp.equalities[static_cast<size_t>(i)].value(x);
  run.residual_eq = eq.norm();
  const SpectralPoint p = eig_sorted(SymmetricMatrix(x));
  run.residual_ineq = mp.spectral.value(p.lam()).cwiseMax(0.0).norm();
  run.solved = run.dist_to_opt <= kGenSdpSolvedTol && run.residual_eq <= kGenSdpSolvedTol &&
               run.residual_ineq <= kGenSdpSolvedTol;
  return run;
}

}  // namespace specopt::apps
