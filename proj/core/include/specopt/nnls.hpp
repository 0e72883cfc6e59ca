#pragma once

#include <Eigen/Dense>

namespace specopt {

/// Solution of min ||target - B w|| with w_j >= 0 for j >= num_free.
struct MixedNnlsResult {
  Eigen::VectorXd coeffs;
  /// target - B * coeffs.
  Eigen::VectorXd residual;
  int pivots = 0;
};

/// Lawson-Hanson active-set NNLS extended with unconstrained leading
/// variables. The first `num_free` columns must be linearly independent
/// (throws LicqError naming the dependent columns otherwise); columns that
/// enter the passive set later are independent by construction. Throws
/// NumericError when more than `max_pivots` set changes are needed
/// (max_pivots < 0 selects 10 * k^2, k = B.cols()).
MixedNnlsResult solve_mixed_nnls(const Eigen::MatrixXd& b,
                                 const Eigen::VectorXd& target,
                                 Eigen::Index num_free, int max_pivots = -1);

}  // namespace specopt
