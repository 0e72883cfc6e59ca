#include <benchmark/benchmark.h>

#include <random>

#include "specopt/apps/gen_sdp.hpp"
#include "specopt/apps/qcqp.hpp"
#include "specopt/directions.hpp"
#include "specopt/nnls.hpp"
#include "specopt/projections.hpp"

using namespace specopt;

static void BM_MixedNnls(benchmark::State& state) {
  const auto k = state.range(0);
  std::mt19937_64 rng(1);
  const Matrix b = gaussian_matrix(2 * k, k, rng);
  const Vector t = gaussian_matrix(2 * k, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_mixed_nnls(b, t, k / 4));
}
BENCHMARK(BM_MixedNnls)->Arg(8)->Arg(32)->Arg(64);

static void BM_MeasureKktGenSdp(benchmark::State& state) {
  const auto n = state.range(0);
  const auto inst = apps::gen_sdp_instance(n, n, 0);
  const BlockProblem bp = decompose(apps::build_gen_sdp_problem(inst));
  const PointEvaluation ev = evaluate_point(bp, apps::gen_sdp_start(inst, bp, 0));
  for (auto _ : state) benchmark::DoNotOptimize(measure_kkt(ev, 1e-6));
}
BENCHMARK(BM_MeasureKktGenSdp)->Arg(5)->Arg(10)->Arg(25);

static void BM_ProjectJointGenSdp(benchmark::State& state) {
  const auto n = state.range(0);
  const auto inst = apps::gen_sdp_instance(n, n, 0);
  const BlockProblem bp = decompose(apps::build_gen_sdp_problem(inst));
  const BlockPoint z = apps::gen_sdp_start(inst, bp, 0);
  const PointEvaluation ev = evaluate_point(bp, z);
  const DirectionResult d = measure_kkt(ev, 1e-6);
  const ManifoldPoint x = retract(z.x, TangentVector(z.x, 1e-3 * d.dx));
  const BlockPoint query{x, z.y + 1e-3 * d.dy};
  for (auto _ : state) benchmark::DoNotOptimize(project_joint(query, bp));
}
BENCHMARK(BM_ProjectJointGenSdp)->Arg(5)->Arg(10);

static void BM_GridOracle(benchmark::State& state) {
  const auto inst = apps::qcqp_instance(state.range(0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(apps::grid_oracle(inst));
}
BENCHMARK(BM_GridOracle)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SolveGenSdp(benchmark::State& state) {
  const auto inst = apps::gen_sdp_instance(state.range(0), state.range(0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(apps::run_gen_sdp(inst, SolverConfig{}));
}
BENCHMARK(BM_SolveGenSdp)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
