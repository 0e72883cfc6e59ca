#include "specopt/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "specopt/errors.hpp"

namespace specopt {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Least squares on the passive columns through the Gram matrix.
VectorXd solve_passive(const MatrixXd& gram, const VectorXd& bt,
                       const std::vector<Index>& passive) {
  const Index m = static_cast<Index>(passive.size());
  VectorXd z = VectorXd::Zero(gram.rows());
  if (m == 0) return z;
  MatrixXd g(m, m);
  VectorXd rhs(m);
  for (Index i = 0; i < m; ++i) {
    rhs(i) = bt(passive[i]);
    for (Index j = 0; j < m; ++j) g(i, j) = gram(passive[i], passive[j]);
  }
  const VectorXd sol = g.ldlt().solve(rhs);
  for (Index i = 0; i < m; ++i) z(passive[i]) = sol(i);
  return z;
}

// True when column j is numerically in the span of the passive columns:
// its Schur complement against the passive Gram block is negligible.
bool dependent_on(const MatrixXd& gram, const std::vector<Index>& passive, Index j) {
  const double gjj = gram(j, j);
  if (!(gjj > 0.0)) return true;
  const Index m = static_cast<Index>(passive.size());
  if (m == 0) return false;
  MatrixXd g(m, m);
  VectorXd c(m);
  for (Index i = 0; i < m; ++i) {
    c(i) = gram(passive[i], j);
    for (Index l = 0; l < m; ++l) g(i, l) = gram(passive[i], passive[l]);
  }
  const double schur = gjj - c.dot(g.ldlt().solve(c));
  return schur <= 1e-10 * gjj;
}

// Re-solves the final support directly on the columns for full accuracy.
VectorXd polish(const MatrixXd& b, const VectorXd& target,
                const std::vector<Index>& passive, const VectorXd& w) {
  const Index m = static_cast<Index>(passive.size());
  if (m == 0) return w;
  MatrixXd bp(b.rows(), m);
  for (Index i = 0; i < m; ++i) bp.col(i) = b.col(passive[i]);
  const VectorXd sol = bp.colPivHouseholderQr().solve(target);
  VectorXd out = VectorXd::Zero(w.size());
  for (Index i = 0; i < m; ++i) out(passive[i]) = sol(i);
  return out;
}

}  // namespace

MixedNnlsResult solve_mixed_nnls(const MatrixXd& b, const VectorXd& target,
                                 Index num_free, int max_pivots) {
  const Index k = b.cols();
  if (b.rows() != target.size()) {
    throw DimensionError("solve_mixed_nnls: B and target sizes disagree");
  }
  if (num_free < 0 || num_free > k) {
    throw DimensionError("solve_mixed_nnls: invalid number of free columns");
  }
  MixedNnlsResult out;
  if (k == 0) {
    out.coeffs = VectorXd(0);
    out.residual = target;
    return out;
  }
  if (max_pivots < 0) max_pivots = static_cast<int>(10 * k * k);

  if (num_free > 0) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(b.leftCols(num_free));
    qr.setThreshold(1e-10);
    if (qr.rank() < num_free) {
      std::vector<int> offending;
      const auto& perm = qr.colsPermutation().indices();
      for (Index i = qr.rank(); i < num_free; ++i) offending.push_back(perm(i));
      std::sort(offending.begin(), offending.end());
      std::ostringstream os;
      os << "equality constraint gradients are linearly dependent (LICQ "
            "violated); dependent indices:";
      for (int i : offending) os << ' ' << i;
      throw LicqError(os.str(), offending);
    }
  }

  const MatrixXd gram = b.transpose() * b;
  const VectorXd bt = b.transpose() * target;
  double col_scale = 0.0;
  for (Index j = 0; j < k; ++j) col_scale = std::max(col_scale, b.col(j).norm());
  const double tol = 1e-13 * std::max(1.0, col_scale) * std::max(1.0, target.norm());

  std::vector<Index> passive;
  std::vector<bool> in_passive(static_cast<size_t>(k), false);
  for (Index j = 0; j < num_free; ++j) {
    passive.push_back(j);
    in_passive[static_cast<size_t>(j)] = true;
  }
  VectorXd w = solve_passive(gram, bt, passive);
  int pivots = 0;
  // Columns found dependent on the current passive set; cleared whenever a
  // column leaves the passive set.
  std::vector<bool> excluded(static_cast<size_t>(k), false);

  for (;;) {
    const VectorXd dual = bt - gram * w;
    Index best = -1;
    for (;;) {
      best = -1;
      double best_val = tol;
      for (Index j = num_free; j < k; ++j) {
        const auto uj = static_cast<size_t>(j);
        if (!in_passive[uj] && !excluded[uj] && dual(j) > best_val) {
          best_val = dual(j);
          best = j;
        }
      }
      if (best < 0 || !dependent_on(gram, passive, best)) break;
      excluded[static_cast<size_t>(best)] = true;
    }
    if (best < 0) break;
    if (++pivots > max_pivots) {
      throw NumericError("solve_mixed_nnls: pivot limit exceeded");
    }
    passive.push_back(best);
    in_passive[static_cast<size_t>(best)] = true;

    for (;;) {
      VectorXd z = solve_passive(gram, bt, passive);
      double alpha = 2.0;
      for (Index j : passive) {
        if (j >= num_free && z(j) <= 0.0) {
          const double denom = w(j) - z(j);
          const double a = denom > 0.0 ? w(j) / denom : 0.0;
          alpha = std::min(alpha, a);
        }
      }
      if (alpha > 1.0) {
        w = z;
        break;
      }
      if (++pivots > max_pivots) {
        throw NumericError("solve_mixed_nnls: pivot limit exceeded");
      }
      w += alpha * (z - w);
      std::vector<Index> kept;
      for (Index j : passive) {
        if (j >= num_free && w(j) <= 1e-15 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
          w(j) = 0.0;
          in_passive[static_cast<size_t>(j)] = false;
        } else {
          kept.push_back(j);
        }
      }
      passive.swap(kept);
      std::fill(excluded.begin(), excluded.end(), false);
    }
  }

  std::sort(passive.begin(), passive.end());
  VectorXd refined = polish(b, target, passive, w);
  bool nonneg = true;
  for (Index j = num_free; j < k; ++j) nonneg = nonneg && refined(j) >= 0.0;
  if (nonneg) w = refined;

  out.coeffs = w;
  out.residual = target - b * w;
  out.pivots = pivots;
  return out;
}

}  // namespace specopt
