#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace specopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance a point must meet to be accepted as lying on St(n,k).
inline constexpr double kOnManifoldTol = 1e-8;

/// A point on the Stiefel manifold St(n,k) = { X : X^T X = I_k }. The square
/// case k = n is the orthogonal group O(n).
class ManifoldPoint {
 public:
  /// Validates ||X^T X - I||_F <= kOnManifoldTol; throws DomainError otherwise.
  /// Empty 0 x 0 point; placeholder for default-constructed aggregates.
  ManifoldPoint() = default;
  explicit ManifoldPoint(Matrix factor);

  static ManifoldPoint identity(Eigen::Index n);

  const Matrix& matrix() const noexcept { return factor_; }
  Eigen::Index rows() const noexcept { return factor_.rows(); }
  Eigen::Index cols() const noexcept { return factor_.cols(); }

  /// ||X^T X - I||_F.
  double orthonormality_residual() const;

  friend bool operator==(const ManifoldPoint& a, const ManifoldPoint& b) {
    return a.factor_.rows() == b.factor_.rows() &&
           a.factor_.cols() == b.factor_.cols() && a.factor_ == b.factor_;
  }

 private:
  Matrix factor_;
};

/// An element of T_X St(n,k), stored in ambient coordinates together with a
/// copy of its base point.
class TangentVector {
 public:
  TangentVector(ManifoldPoint base, Matrix data);

  static TangentVector zero(const ManifoldPoint& base);

  const Matrix& matrix() const noexcept { return data_; }
  const ManifoldPoint& base() const noexcept { return base_; }

  /// ||X^T V + V^T X||_F, zero for a true tangent vector.
  double tangency_residual() const;

  TangentVector scaled(double t) const;

 private:
  ManifoldPoint base_;
  Matrix data_;
};

enum class Retraction { kQR, kPolar };

/// sym(A) = (A + A^T) / 2.
Matrix sym(const Matrix& a);

/// Orthogonal projection of an ambient matrix onto T_X St(n,k):
/// V - X sym(X^T V).
TangentVector tangent_project(const ManifoldPoint& x, const Matrix& v);

/// Retraction R_X(V). QR uses the Q factor of X + V normalised so that R has
/// a positive diagonal, which makes R_X(0) = X exactly; polar uses the
/// orthogonal polar factor of X + V.
ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& v,
                      Retraction method = Retraction::kQR);

/// Nearest point of St(n,k) to an arbitrary full-rank n x k matrix in the
/// Frobenius norm (the polar factor U V^T of its thin SVD).
ManifoldPoint nearest_point(const Matrix& a);

/// Ambient trace inner product trace(U^T V); throws DomainError when the
/// base points differ.
double inner(const ManifoldPoint& x, const TangentVector& u,
             const TangentVector& v);

/// Flips each column so that its largest-magnitude entry is positive. Ties in
/// magnitude resolve to the first such entry.
void apply_column_sign_convention(Matrix& q);

/// Random point of O(n): QR of a standard Gaussian matrix followed by the
/// column sign convention. Deterministic given the generator state.
ManifoldPoint random_point(Eigen::Index n, std::mt19937_64& rng);
ManifoldPoint random_point(Eigen::Index n, std::uint64_t seed);

/// Largest observed ||R_X(tV) - (X + tV)||_F / t^2 over the supplied steps;
/// bounded for every retraction with first-order agreement.
double retraction_second_order_constant(const ManifoldPoint& x,
                                        const TangentVector& v,
                                        Retraction method,
                                        const std::vector<double>& steps);

/// Standard Gaussian matrix with entries drawn row by row.
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                       std::mt19937_64& rng);

}  // namespace specopt
