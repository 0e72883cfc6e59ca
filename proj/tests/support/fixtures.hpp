#pragma once

#include <random>

#include "specopt/spectral.hpp"

namespace fixtures {

using specopt::Matrix;
using specopt::MatrixFunction;
using specopt::MatrixProblem;
using specopt::Vector;

/// Nonlinear problem with nontrivial gradients in both blocks:
/// F = 0.5 ||X - C||^2, G = <A, X>^2 - 1, H = <B, X X> - 1,
/// spectral sum(lam^2) - 10 and lam_1 - 5.
inline MatrixProblem nonlinear_problem(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  auto sym = [&](void) {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = nd(rng);
    return Matrix(0.5 * (g + g.transpose()));
  };
  const Matrix c = sym();
  const Matrix a = sym();
  const Matrix b = sym();
  MatrixProblem mp;
  mp.n = n;
  mp.objective = MatrixFunction{
      [c](const Matrix& x) { return 0.5 * (x - c).squaredNorm(); },
      [c](const Matrix& x) -> Matrix { return x - c; }};
  mp.equalities.push_back(MatrixFunction{
      [a](const Matrix& x) {
        const double s = (a.array() * x.array()).sum();
        return s * s - 1.0;
      },
      [a](const Matrix& x) -> Matrix { return 2.0 * (a.array() * x.array()).sum() * a; }});
  mp.inequalities.push_back(MatrixFunction{
      [b](const Matrix& x) { return (b.array() * (x * x).array()).sum() - 1.0; },
      [b](const Matrix& x) -> Matrix { return b * x + x * b; }});
  mp.spectral.rows = 2;
  mp.spectral.value = [](const Vector& lam) {
    Vector v(2);
    v << lam.squaredNorm() - 10.0, lam(0) - 5.0;
    return v;
  };
  mp.spectral.jacobian = [n](const Vector& lam) {
    Matrix j = Matrix::Zero(2, n);
    j.row(0) = 2.0 * lam.transpose();
    j(1, 0) = 1.0;
    return j;
  };
  return mp;
}

}  // namespace fixtures
