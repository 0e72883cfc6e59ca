#include "specopt/spectral.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <sstream>

#include "specopt/errors.hpp"

namespace specopt {

SymmetricMatrix::SymmetricMatrix(const Matrix& data) {
  if (data.rows() != data.cols()) {
    throw DimensionError("SymmetricMatrix: matrix is not square");
  }
  data_ = sym(data);
}

SpectralPoint::SpectralPoint(ManifoldPoint q, Vector lam)
    : q_(std::move(q)), lam_(std::move(lam)) {
  if (q_.rows() != q_.cols() || q_.rows() != lam_.size()) {
    throw DimensionError("SpectralPoint: Q must be n x n and lam length n");
  }
  for (Eigen::Index i = 0; i + 1 < lam_.size(); ++i) {
    if (lam_(i) < lam_(i + 1) - 1e-12) {
      std::ostringstream os;
      os << "SpectralPoint: eigenvalues not non-increasing at index " << i;
      throw DomainError(os.str());
    }
  }
}

std::vector<AugmentedRow> ordering_rows(Eigen::Index n) {
  std::vector<AugmentedRow> rows;
  for (Eigen::Index i = 1; i < n; ++i) rows.push_back(AugmentedRow{i});
  return rows;
}

SpectralPoint eig_sorted(const SymmetricMatrix& x) {
  const Eigen::Index n = x.size();
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericError("eig_sorted: eigensolver did not converge");
  }
  // Eigen returns ascending eigenvalues; a stable sort on the descending key
  // keeps equal eigenvalues in ascending column order.
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });
  Matrix q(n, n);
  Vector lam(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    q.col(j) = es.eigenvectors().col(order[static_cast<size_t>(j)]);
    lam(j) = ev(order[static_cast<size_t>(j)]);
  }
  apply_column_sign_convention(q);
  return SpectralPoint(ManifoldPoint(std::move(q)), std::move(lam));
}

Matrix reconstruct(const ManifoldPoint& q, const Vector& lam) {
  if (q.cols() != lam.size()) {
    throw DimensionError("reconstruct: Q and lam sizes disagree");
  }
  const Matrix& u = q.matrix();
  return sym(u * lam.asDiagonal() * u.transpose());
}

SymmetricMatrix reconstruct(const SpectralPoint& p) {
  return SymmetricMatrix(reconstruct(p.q(), p.lam()));
}

Vector grad_lambda(const Matrix& grad_f, const ManifoldPoint& q) {
  const Matrix& u = q.matrix();
  if (grad_f.rows() != u.rows() || grad_f.cols() != u.rows()) {
    throw DimensionError("grad_lambda: gradient has wrong shape");
  }
  return (u.array() * (grad_f * u).array()).colwise().sum().transpose();
}

TangentVector grad_q_riemannian(const Matrix& grad_f, const ManifoldPoint& q,
                                const Vector& lam) {
  const Matrix& u = q.matrix();
  if (grad_f.rows() != u.rows() || grad_f.cols() != u.rows() ||
      lam.size() != u.cols()) {
    throw DimensionError("grad_q_riemannian: inconsistent shapes");
  }
  // grad_F U Diag(lam) + grad_F^T U Diag(lam); callers pass symmetric grad_F
  // but the general form costs nothing extra.
  const Matrix ambient = (grad_f + grad_f.transpose()) * u * lam.asDiagonal();
  return tangent_project(q, ambient);
}

TangentVector grad_q_riemannian(const Matrix& grad_f, const SpectralPoint& p) {
  return grad_q_riemannian(grad_f, p.q(), p.lam());
}

namespace {

BlockFunction lift(MatrixFunction fn) {
  auto shared = std::make_shared<MatrixFunction>(std::move(fn));
  BlockFunction out;
  out.value = [shared](const BlockPoint& z) {
    return shared->value(reconstruct(z.x, z.y));
  };
  out.gradient = [shared](const BlockPoint& z) {
    const Matrix g = shared->gradient(reconstruct(z.x, z.y));
    return BlockGradient{grad_q_riemannian(g, z.x, z.y).matrix(),
                         grad_lambda(sym(g), z.x)};
  };
  return out;
}

}  // namespace

BlockProblem decompose(const MatrixProblem& mp) {
  const Eigen::Index n = mp.n;
  if (n < 1) throw DimensionError("decompose: n must be >= 1");
  BlockProblem bp;
  bp.manifold_rows = n;
  bp.manifold_cols = n;
  bp.y_dim = n;
  bp.objective = lift(mp.objective);
  for (const auto& g : mp.equalities) bp.equalities.push_back(lift(g));
  for (const auto& h : mp.inequalities) bp.coupled_inequalities.push_back(lift(h));

  const SpectralFunction spectral = mp.spectral;
  const Eigen::Index s = spectral.rows;
  const Eigen::Index rows = s + (n - 1);
  bp.y_inequalities.rows = rows;
  bp.y_inequalities.affine = spectral.affine || s == 0;
  bp.y_inequalities.value = [spectral, s, n, rows](const Vector& lam) {
    Vector out(rows);
    if (s > 0) out.head(s) = spectral.value(lam);
    for (Eigen::Index i = 0; i + 1 < n; ++i) out(s + i) = lam(i + 1) - lam(i);
    return out;
  };
  bp.y_inequalities.jacobian = [spectral, s, n, rows](const Vector& lam) {
    Matrix jac = Matrix::Zero(rows, n);
    if (s > 0) jac.topRows(s) = spectral.jacobian(lam);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      jac(s + i, i) = -1.0;
      jac(s + i, i + 1) = 1.0;
    }
    return jac;
  };
  bp.affine_in_y = mp.affine_coordinates;
  return bp;
}

}  // namespace specopt
