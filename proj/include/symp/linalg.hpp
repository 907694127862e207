#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "symp/errors.hpp"
#include "symp/rng.hpp"

namespace symp {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// Standard symplectic matrix J_n = [[0, I_n], [-I_n, 0]].
inline MatrixXd standard_j(int n) {
  if (n < 1) throw DimensionError("standard_j: n must be >= 1");
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Largest singular value.
inline double operator_norm(const MatrixXd& m) {
  return m.jacobiSvd().singularValues()(0);
}

/// Uniform point in the unit ball of R^d (direction from normals, radius
/// from the d-th-root law).
inline VectorXd ball_point(int d, Rng& rng) {
  VectorXd v(d);
  double s2;
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.normal();
    s2 = v.squaredNorm();
  } while (s2 == 0.0);
  double r = std::pow(rng.uniform(), 1.0 / d);
  return v * (r / std::sqrt(s2));
}

/// Uniform point in the spherical shell of R^d whose radius^d is uniform
/// on [f_lo, f_hi] (fractions of the unit ball volume). Used for radial
/// stratification.
inline VectorXd shell_point(int d, double f_lo, double f_hi, Rng& rng) {
  VectorXd v(d);
  double s2;
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.normal();
    s2 = v.squaredNorm();
  } while (s2 == 0.0);
  double r = std::pow(rng.uniform(f_lo, f_hi), 1.0 / d);
  return v * (r / std::sqrt(s2));
}

/// Orthonormal basis (columns) of the orthogonal complement of the span
/// of the columns of `span`. Throws DegenerateError if `span` is
/// rank-deficient relative to its column count.
inline MatrixXd orthogonal_complement(const MatrixXd& span, double rank_tol = 1e-8) {
  const int d = static_cast<int>(span.rows());
  const int m = static_cast<int>(span.cols());
  if (m == 0) return MatrixXd::Identity(d, d);
  Eigen::HouseholderQR<MatrixXd> qr(span);
  MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  double scale = span.colwise().norm().maxCoeff();
  for (int i = 0; i < m; ++i) {
    if (std::abs(r(i, i)) <= rank_tol * scale)
      throw DegenerateError("orthogonal_complement: span is rank-deficient");
  }
  MatrixXd q = qr.householderQ();
  return q.rightCols(d - m);
}

/// Random traceless matrix with independent N(0, scale^2) entries,
/// projected to trace zero. exp of it lies in SL.
inline MatrixXd random_traceless(int d, double scale, Rng& rng) {
  MatrixXd s(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i, j) = scale * rng.normal();
  double t = s.trace() / d;
  for (int i = 0; i < d; ++i) s(i, i) -= t;
  return s;
}

/// Matrix exponential by scaling-and-squaring with a Taylor core.
/// Accurate enough for the small generators used in experiments.
inline MatrixXd matrix_exp(const MatrixXd& a) {
  const int d = static_cast<int>(a.rows());
  double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  MatrixXd x = a;
  while (nrm > 0.5) {
    x *= 0.5;
    nrm *= 0.5;
    ++squarings;
  }
  MatrixXd result = MatrixXd::Identity(d, d);
  MatrixXd term = MatrixXd::Identity(d, d);
  for (int k = 1; k <= 24; ++k) {
    term = (term * x) / k;
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace symp
