#include "specopt/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specopt/errors.hpp"

namespace specopt {

namespace {

double residual_of(const Matrix& x) {
  return (x.transpose() * x - Matrix::Identity(x.cols(), x.cols())).norm();
}

}  // namespace

ManifoldPoint::ManifoldPoint(Matrix factor) : factor_(std::move(factor)) {
  if (factor_.cols() == 0 || factor_.rows() < factor_.cols()) {
    std::ostringstream os;
    os << "ManifoldPoint: invalid shape " << factor_.rows() << "x"
       << factor_.cols();
    throw DimensionError(os.str());
  }
  const double res = residual_of(factor_);
  if (!(res <= kOnManifoldTol)) {
    std::ostringstream os;
    os << "ManifoldPoint: ||X^T X - I||_F = " << res << " exceeds "
       << kOnManifoldTol;
    throw DomainError(os.str());
  }
}

ManifoldPoint ManifoldPoint::identity(Eigen::Index n) {
  return ManifoldPoint(Matrix::Identity(n, n));
}

double ManifoldPoint::orthonormality_residual() const {
  return residual_of(factor_);
}

TangentVector::TangentVector(ManifoldPoint base, Matrix data)
    : base_(std::move(base)), data_(std::move(data)) {
  if (data_.rows() != base_.rows() || data_.cols() != base_.cols()) {
    throw DimensionError("TangentVector: shape does not match base point");
  }
}

TangentVector TangentVector::zero(const ManifoldPoint& base) {
  return TangentVector(base, Matrix::Zero(base.rows(), base.cols()));
}

double TangentVector::tangency_residual() const {
  const Matrix xtv = base_.matrix().transpose() * data_;
  return (xtv + xtv.transpose()).norm();
}

TangentVector TangentVector::scaled(double t) const {
  return TangentVector(base_, t * data_);
}

Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }

TangentVector tangent_project(const ManifoldPoint& x, const Matrix& v) {
  if (v.rows() != x.rows() || v.cols() != x.cols()) {
    throw DimensionError("tangent_project: ambient matrix has wrong shape");
  }
  const Matrix& q = x.matrix();
  return TangentVector(x, v - q * sym(q.transpose() * v));
}

ManifoldPoint nearest_point(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || !(s(s.size() - 1) > 1e-12 * std::max(1.0, s(0)))) {
    throw NumericError("nearest_point: matrix is numerically rank deficient");
  }
  return ManifoldPoint(svd.matrixU() * svd.matrixV().transpose());
}

ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& v,
                      Retraction method) {
  if (!(v.base() == x)) {
    throw DomainError("retract: tangent vector is based at a different point");
  }
  if (v.matrix().isZero(0.0)) return x;
  const Matrix y = x.matrix() + v.matrix();
  if (method == Retraction::kPolar) {
    return nearest_point(y);
  }
  Eigen::HouseholderQR<Matrix> qr(y);
  const Eigen::Index k = y.cols();
  Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), k);
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    const double d = r(j, j);
    if (!(std::abs(d) > 1e-12)) {
      throw NumericError("retract: QR factor is rank deficient");
    }
    if (d < 0) q.col(j) = -q.col(j);
  }
  return ManifoldPoint(std::move(q));
}

double inner(const ManifoldPoint& x, const TangentVector& u,
             const TangentVector& v) {
  if (!(u.base() == x) || !(v.base() == x)) {
    throw DomainError("inner: tangent vectors are based at different points");
  }
  return (u.matrix().array() * v.matrix().array()).sum();
}

void apply_column_sign_convention(Matrix& q) {
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      const double a = std::abs(q(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (q(arg, j) < 0) q.col(j) = -q.col(j);
  }
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

ManifoldPoint random_point(Eigen::Index n, std::mt19937_64& rng) {
  if (n < 1) throw DimensionError("random_point: n must be >= 1");
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  apply_column_sign_convention(q);
  return ManifoldPoint(std::move(q));
}

ManifoldPoint random_point(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_point(n, rng);
}

double retraction_second_order_constant(const ManifoldPoint& x,
                                        const TangentVector& v,
                                        Retraction method,
                                        const std::vector<double>& steps) {
  double worst = 0.0;
  for (double t : steps) {
    const TangentVector tv = v.scaled(t);
    const ManifoldPoint r = retract(x, tv, method);
    const double err = (r.matrix() - (x.matrix() + tv.matrix())).norm();
    worst = std::max(worst, err / (t * t));
  }
  return worst;
}

}  // namespace specopt
