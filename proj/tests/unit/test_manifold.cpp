#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "specopt/errors.hpp"
#include "specopt/manifold.hpp"

using namespace specopt;

namespace {

Matrix skew2(double theta) {
  Matrix v(2, 2);
  v << 0, -theta, theta, 0;
  return v;
}

Matrix rotation(double phi) {
  Matrix r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

}  // namespace

TEST(ManifoldPoint, AcceptsOrthogonalAndRejectsOthers) {
  EXPECT_NO_THROW(ManifoldPoint(Matrix::Identity(3, 3)));
  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 0) = 1.1;
  EXPECT_THROW(ManifoldPoint{bad}, DomainError);
  EXPECT_LE(ManifoldPoint::identity(4).orthonormality_residual(), 0.0);
}

TEST(ManifoldPoint, StiefelRectangular) {
  std::mt19937_64 rng(3);
  const Matrix q = oracle::random_orthogonal(5, rng).leftCols(2);
  const ManifoldPoint x(q);
  EXPECT_EQ(x.rows(), 5);
  EXPECT_EQ(x.cols(), 2);
}

TEST(TangentProject, ProducesTangentAndIsIdempotent) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const ManifoldPoint x = random_point(4, rng);
    const Matrix v = gaussian_matrix(4, 4, rng);
    const TangentVector t = tangent_project(x, v);
    EXPECT_LE(t.tangency_residual(), 1e-12);
    const TangentVector t2 = tangent_project(x, t.matrix());
    EXPECT_LE((t2.matrix() - t.matrix()).norm(), 1e-12);
  }
}

TEST(TangentProject, ShapeMismatchThrows) {
  const ManifoldPoint x = ManifoldPoint::identity(3);
  EXPECT_THROW(tangent_project(x, Matrix::Zero(2, 3)), DimensionError);
  EXPECT_THROW(TangentVector(x, Matrix::Zero(3, 2)), DimensionError);
}

TEST(Retract, ZeroStepIsExactIdentity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ManifoldPoint x = random_point(5, rng);
    const TangentVector zero = TangentVector::zero(x);
    EXPECT_TRUE(retract(x, zero, Retraction::kQR) == x);
    EXPECT_LE((retract(x, zero, Retraction::kPolar).matrix() - x.matrix()).norm(), 1e-14);
  }
}

TEST(Retract, TwoByTwoRotationMatchesClosedForm) {
  // I + theta J has orthogonal factor equal to the rotation by atan(theta).
  const ManifoldPoint x = ManifoldPoint::identity(2);
  for (double theta : {0.1, 0.7, 2.5, -1.3}) {
    const TangentVector v(x, skew2(theta));
    const Matrix expect = rotation(std::atan(theta));
    EXPECT_LE((retract(x, v, Retraction::kQR).matrix() - expect).norm(), 1e-14);
    EXPECT_LE((retract(x, v, Retraction::kPolar).matrix() - expect).norm(), 1e-14);
  }
}

TEST(Retract, StaysOnManifoldAndAgreesToSecondOrder) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ManifoldPoint x = random_point(4, rng);
    const TangentVector v = tangent_project(x, gaussian_matrix(4, 4, rng));
    for (auto method : {Retraction::kQR, Retraction::kPolar}) {
      const ManifoldPoint y = retract(x, v.scaled(0.3), method);
      EXPECT_LE(y.orthonormality_residual(), 1e-12);
      const double c_far = retraction_second_order_constant(x, v, method, {1e-1, 5e-2});
      const double c_near = retraction_second_order_constant(x, v, method, {1e-3, 1e-4});
      EXPECT_TRUE(std::isfinite(c_near));
      EXPECT_LE(c_near, 2.0 * c_far + 1e-6);
    }
  }
}

TEST(Retract, OffManifoldBaseIsRejected) {
  EXPECT_THROW(ManifoldPoint(2.0 * Matrix::Identity(2, 2)), DomainError);
}

TEST(NearestPoint, MatchesSvdPolarAndBeatsOtherPoints) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = gaussian_matrix(4, 4, rng);
    const Matrix p = nearest_point(a).matrix();
    EXPECT_LE((p - oracle::polar(a)).norm(), 1e-10);
    for (int k = 0; k < 5; ++k) {
      const Matrix other = oracle::random_orthogonal(4, rng);
      EXPECT_LE((a - p).norm(), (a - other).norm() + 1e-12);
    }
  }
}

TEST(NearestPoint, RankDeficientThrows) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  EXPECT_THROW(nearest_point(a), NumericError);
}

TEST(Inner, RejectsDifferentBases) {
  std::mt19937_64 rng(2);
  const ManifoldPoint x = random_point(3, rng);
  const ManifoldPoint y = random_point(3, rng);
  const TangentVector u = tangent_project(x, gaussian_matrix(3, 3, rng));
  const TangentVector w = tangent_project(y, gaussian_matrix(3, 3, rng));
  EXPECT_THROW(inner(x, u, w), DomainError);
  EXPECT_NEAR(inner(x, u, u), u.matrix().squaredNorm(), 1e-12);
}

TEST(RandomPoint, DeterministicWithSignConvention) {
  const ManifoldPoint a = random_point(6, std::uint64_t{42});
  const ManifoldPoint b = random_point(6, std::uint64_t{42});
  EXPECT_TRUE(a == b);
  EXPECT_LE(a.orthonormality_residual(), 1e-12);
  for (Eigen::Index j = 0; j < 6; ++j) {
    Eigen::Index imax = 0;
    a.matrix().col(j).cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(a.matrix()(imax, j), 0.0);
  }
}

TEST(SignConvention, TieResolvesToFirstEntry) {
  Matrix q(2, 1);
  q << -0.5, 0.5;
  apply_column_sign_convention(q);
  EXPECT_GT(q(0, 0), 0.0);
}
