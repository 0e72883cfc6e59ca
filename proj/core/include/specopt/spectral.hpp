#pragma once

#include <functional>
#include <vector>

#include "specopt/manifold.hpp"
#include "specopt/problem.hpp"

namespace specopt {

/// Symmetric n x n matrix; symmetrised on construction.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Matrix& data);

  const Matrix& matrix() const noexcept { return data_; }
  Eigen::Index size() const noexcept { return data_.rows(); }

 private:
  Matrix data_;
};

/// Eigen-pair representation X = Q Diag(lam) Q^T with lam non-increasing.
class SpectralPoint {
 public:
  /// Throws DomainError when lam is not non-increasing (to 1e-12) or the
  /// sizes disagree.
  SpectralPoint(ManifoldPoint q, Vector lam);

  const ManifoldPoint& q() const noexcept { return q_; }
  const Vector& lam() const noexcept { return lam_; }

  BlockPoint as_block() const { return BlockPoint{q_, lam_}; }

 private:
  ManifoldPoint q_;
  Vector lam_;
};

/// A smooth scalar function of a symmetric matrix with its Euclidean gradient.
struct MatrixFunction {
  std::function<double(const Matrix&)> value;
  std::function<Matrix(const Matrix&)> gradient;
};

/// Spectral inequalities g(lambda) <= 0 on the ordered eigenvalue vector.
struct SpectralFunction {
  Eigen::Index rows = 0;
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;
  bool affine = false;
};

/// min F(X) s.t. G(X) = 0, H(X) <= 0, g(lambda(X)) <= 0, X symmetric.
struct MatrixProblem {
  Eigen::Index n = 0;
  MatrixFunction objective;
  std::vector<MatrixFunction> equalities;
  /// Coordinate inequalities H_i(X) <= 0.
  std::vector<MatrixFunction> inequalities;
  SpectralFunction spectral;
  /// F, G and H are affine in X.
  bool affine_coordinates = false;
};

/// Marker for the ordering row lambda_{i+1} - lambda_i <= 0 (1-based i).
struct AugmentedRow {
  Eigen::Index index;
};

/// Ordering rows appended after the user's spectral rows, i = 1..n-1.
std::vector<AugmentedRow> ordering_rows(Eigen::Index n);

/// Eigendecomposition with eigenvalues sorted non-increasing and the column
/// sign convention applied to the eigenvectors.
SpectralPoint eig_sorted(const SymmetricMatrix& x);

/// Q Diag(lam) Q^T, symmetrised.
SymmetricMatrix reconstruct(const SpectralPoint& p);
Matrix reconstruct(const ManifoldPoint& q, const Vector& lam);

/// d/d lam_i F(Q Diag(lam) Q^T) = q_i^T grad_F q_i.
Vector grad_lambda(const Matrix& grad_f, const ManifoldPoint& q);

/// Riemannian gradient in Q of F(Q Diag(lam) Q^T) for symmetric grad_F:
/// the tangent projection of 2 grad_F Q Diag(lam).
TangentVector grad_q_riemannian(const Matrix& grad_f, const ManifoldPoint& q,
                                const Vector& lam);
TangentVector grad_q_riemannian(const Matrix& grad_f, const SpectralPoint& p);

/// Converts a problem over symmetric matrices into the block model over
/// O(n) x R^n. The y-block inequalities are the user's spectral rows followed
/// by the n-1 ordering rows.
BlockProblem decompose(const MatrixProblem& mp);

}  // namespace specopt
