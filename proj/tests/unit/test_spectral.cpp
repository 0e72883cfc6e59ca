#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "specopt/apps/gen_sdp.hpp"
#include "specopt/errors.hpp"
#include "specopt/spectral.hpp"

using namespace specopt;

TEST(EigSorted, SortedNonIncreasingWithSignConvention) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralPoint p = eig_sorted(SymmetricMatrix(oracle::random_symmetric(6, rng)));
    for (Eigen::Index i = 0; i + 1 < 6; ++i) EXPECT_GE(p.lam()(i), p.lam()(i + 1));
    for (Eigen::Index j = 0; j < 6; ++j) {
      Eigen::Index imax = 0;
      p.q().matrix().col(j).cwiseAbs().maxCoeff(&imax);
      EXPECT_GT(p.q().matrix()(imax, j), 0.0);
    }
  }
}

TEST(Reconstruct, RoundTripsToTolerance) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x = oracle::random_symmetric(5, rng);
    const SpectralPoint p = eig_sorted(SymmetricMatrix(x));
    EXPECT_LE((reconstruct(p).matrix() - x).norm(), 1e-9);
  }
}

TEST(Reconstruct, SignFlipsLeaveMatrixUnchangedExactly) {
  std::mt19937_64 rng(12);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 50; ++trial) {
    const ManifoldPoint q = random_point(4, rng);
    Vector lam = oracle::random_symmetric(4, rng).diagonal();
    std::sort(lam.data(), lam.data() + 4, std::greater<>());
    Matrix e = Matrix::Identity(4, 4);
    for (int i = 0; i < 4; ++i) e(i, i) = coin(rng) ? -1.0 : 1.0;
    const ManifoldPoint qe(q.matrix() * e);
    EXPECT_TRUE(reconstruct(qe, lam) == reconstruct(q, lam));
  }
}

TEST(SpectralPoint, RejectsUnsortedAndBadSizes) {
  Vector lam(3);
  lam << 1.0, 2.0, 0.0;
  EXPECT_THROW(SpectralPoint(ManifoldPoint::identity(3), lam), DomainError);
  EXPECT_THROW(SpectralPoint(ManifoldPoint::identity(2), Vector::Zero(3)), DimensionError);
}

TEST(SymmetricMatrix, SymmetrisesInput) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_DOUBLE_EQ(SymmetricMatrix(a).matrix()(0, 1), 1.0);
}

TEST(ChainRule, LambdaGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixProblem mp = fixtures::nonlinear_problem(4, rng);
    const ManifoldPoint q = random_point(4, rng);
    const Vector lam = Vector::LinSpaced(4, 2.0, -1.0);
    const Vector analytic = grad_lambda(mp.objective.gradient(reconstruct(q, lam)), q);
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& l) { return mp.objective.value(reconstruct(q, l)); }, lam);
    EXPECT_LE((analytic - fd).norm(), 1e-6 * std::max(1.0, analytic.norm()));
  }
}

TEST(ChainRule, RiemannianQGradientMatchesDirectionalDerivatives) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixProblem mp = fixtures::nonlinear_problem(4, rng);
    const ManifoldPoint q = random_point(4, rng);
    const Vector lam = Vector::LinSpaced(4, 2.0, -1.0);
    const TangentVector g =
        grad_q_riemannian(mp.objective.gradient(reconstruct(q, lam)), q, lam);
    EXPECT_LE(g.tangency_residual(), 1e-10);
    const Matrix v = oracle::random_tangent(q.matrix(), rng);
    const double fd = oracle::fd_along_manifold(
        [&](const Matrix& qq) { return mp.objective.value(reconstruct(ManifoldPoint(qq), lam)); },
        q.matrix(), v);
    EXPECT_NEAR((g.matrix().array() * v.array()).sum(), fd, 1e-6 * std::max(1.0, g.matrix().norm()));
  }
}

TEST(Decompose, RowLayoutAndCounts) {
  const auto inst = apps::gen_sdp_instance(5, 5, 0);
  const BlockProblem bp = decompose(apps::build_gen_sdp_problem(inst));
  EXPECT_EQ(bp.num_equalities(), 5);
  EXPECT_EQ(bp.num_coupled(), 0);
  EXPECT_EQ(bp.y_inequalities.rows, 6 + 4);
  EXPECT_TRUE(bp.y_inequalities.affine);
  EXPECT_TRUE(bp.affine_in_y);
  // Ordering rows follow the user's rows: lambda_{i+1} - lambda_i.
  Vector lam(5);
  lam << 5, 4, 3, 2, 1;
  const Vector g = bp.y_inequalities.value(lam);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g(6 + i), -1.0);
  EXPECT_EQ(ordering_rows(5).size(), 4u);
  EXPECT_EQ(ordering_rows(5).front().index, 1);
}

TEST(Decompose, GradientAuditOnNonlinearProblem) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const BlockProblem bp = decompose(fixtures::nonlinear_problem(4, rng));
    const BlockPoint z{random_point(4, rng), Vector::LinSpaced(4, 1.5, -0.5)};
    const auto rep = audit_gradients(bp, z, rng);
    EXPECT_LE(rep.max_rel_error, 1e-5) << rep.worst;
  }
}
