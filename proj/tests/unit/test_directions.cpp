#include <gtest/gtest.h>

#include "oracles.hpp"
#include "specopt/apps/gen_sdp.hpp"
#include "specopt/directions.hpp"
#include "specopt/errors.hpp"

using namespace specopt;

namespace {

Vector flat(const BlockGradient& g) {
  Vector v(g.x.size() + g.y.size());
  v << Eigen::Map<const Vector>(g.x.data(), g.x.size()), g.y;
  return v;
}

}  // namespace

TEST(ActiveSet, IncludesNearAndViolatedRows) {
  Vector v(4);
  v << -1.0, -1e-7, 0.0, 0.3;
  const auto ids = active_set(v, 1e-6);
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_EQ(ids[0], 1);
  EXPECT_EQ(active_set(v, 0.0).size(), 2u);
}

TEST(MeasureY, UnconstrainedEqualsGradientNorm) {
  Vector g(3);
  g << 3, 0, 4;
  const auto r = measure_y(g, Matrix(0, 3), Matrix(0, 3), {});
  EXPECT_NEAR(r.measure, 5.0, 1e-14);
  EXPECT_NEAR((r.dy + g / 5.0).norm(), 0.0, 1e-14);
}

TEST(MeasureY, StationaryPointReportsZeroWithZeroDirection) {
  Vector g(2);
  g << 1, 0;
  Matrix ineq(1, 2);
  ineq << -1, 0;  // -y1 <= 0 active: pushing y1 down is blocked
  const auto r = measure_y(g, Matrix(0, 2), ineq, {0});
  EXPECT_EQ(r.measure, 0.0);
  EXPECT_EQ(r.dy.norm(), 0.0);
  EXPECT_NEAR(r.ineq_multipliers(0), 1.0, 1e-14);
}

TEST(MeasureY, MatchesNnlsOracleWithInvariants) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector g = gaussian_matrix(6, 1, rng);
    const Matrix eq = gaussian_matrix(2, 6, rng);
    const Matrix in = gaussian_matrix(5, 6, rng);
    std::vector<Eigen::Index> ids{0, 1, 2, 3, 4};
    const auto r = measure_y(g, eq, in, ids);
    Matrix b(6, 7);
    b << eq.transpose(), in.transpose();
    EXPECT_NEAR(r.measure, oracle::nnls_enumeration(b, g, 2), 1e-8);
    std::vector<BlockGradient> ge, gi;
    for (int i = 0; i < 2; ++i) ge.push_back({Matrix(0, 0), eq.row(i).transpose()});
    for (int i = 0; i < 5; ++i) gi.push_back({Matrix(0, 0), in.row(i).transpose()});
    EXPECT_LE(direction_invariant_violation(r, {Matrix(0, 0), g}, ge, gi), 1e-8);
  }
}

TEST(MeasureX, MatchesDenseLeastSquares) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const ManifoldPoint x = random_point(4, rng);
    const TangentVector gf = tangent_project(x, gaussian_matrix(4, 4, rng));
    std::vector<TangentVector> gc;
    for (int i = 0; i < 3; ++i) gc.push_back(tangent_project(x, gaussian_matrix(4, 4, rng)));
    const auto r = measure_x(x, gf, gc);
    Matrix b(16, 3);
    for (int i = 0; i < 3; ++i) b.col(i) = Eigen::Map<const Vector>(gc[i].matrix().data(), 16);
    EXPECT_NEAR(r.measure, oracle::dense_ls_residual(b, Eigen::Map<const Vector>(gf.matrix().data(), 16)), 1e-8);
    EXPECT_LE(tangent_project(x, r.dx).matrix().isApprox(r.dx, 1e-10) ? 0.0 : 1.0, 0.0);
  }
}

TEST(MeasureX, DependentConstraintGradientsRaiseLicq) {
  std::mt19937_64 rng(33);
  const ManifoldPoint x = random_point(3, rng);
  const TangentVector gf = tangent_project(x, gaussian_matrix(3, 3, rng));
  const TangentVector c = tangent_project(x, gaussian_matrix(3, 3, rng));
  std::vector<TangentVector> gc{c, c.scaled(2.0)};
  EXPECT_THROW(measure_x(x, gf, gc), LicqError);
}

TEST(MeasureKkt, MatchesNnlsOracleOnBlockSystems) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const ManifoldPoint x = random_point(3, rng);
    auto block = [&]() {
      return BlockGradient{tangent_project(x, gaussian_matrix(3, 3, rng)).matrix(),
                           gaussian_matrix(3, 1, rng)};
    };
    const BlockGradient gf = block();
    std::vector<BlockGradient> ge{block(), block()};
    std::vector<BlockGradient> gi{block(), block(), block(), block()};
    const auto r = measure_kkt(gf, ge, gi, {0, 1, 2, 3});
    Matrix b(12, 6);
    for (int i = 0; i < 2; ++i) b.col(i) = flat(ge[i]);
    for (int i = 0; i < 4; ++i) b.col(2 + i) = flat(gi[i]);
    EXPECT_NEAR(r.measure, oracle::nnls_enumeration(b, flat(gf), 2), 1e-8);
    EXPECT_LE(direction_invariant_violation(r, gf, ge, gi), 1e-8);
  }
}

TEST(ProblemMeasures, GenSdpStructure) {
  // Trace objective: grad_Q f = 0, so m_x vanishes; s = n equalities in n
  // unknowns pin y for fixed Q, so m_y vanishes.
  const auto inst = apps::gen_sdp_instance(4, 4, 1);
  const BlockProblem bp = decompose(apps::build_gen_sdp_problem(inst));
  const SpectralPoint p = eig_sorted(SymmetricMatrix(inst.c));
  const PointEvaluation ev = evaluate_point(bp, p.as_block());
  EXPECT_EQ(measure_x(ev, 1e-6).measure, 0.0);
  EXPECT_LE(measure_y(ev, 1e-6).measure, 1e-10);
  const auto kkt = measure_kkt(ev, 1e-6);
  EXPECT_EQ(kkt.dx.rows(), 4);
  EXPECT_EQ(kkt.dy.size(), 4);
  EXPECT_LE(kkt.direction_norm(), 1.0 + 1e-12);
}
