#pragma once

// Lattice basics shared by the random-lattice module: LLL reduction with
// transform tracking and Fincke-Pohst point enumeration in a ball.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "symp/errors.hpp"
#include "symp/linalg.hpp"

namespace symp {

struct LllResult {
  MatrixXd basis;        // reduced basis, columns
  Eigen::MatrixXi u;     // unimodular transform: basis = input * u
};

/// Textbook LLL (delta = 0.75) on basis columns with double arithmetic;
/// fine for the small dimensions used here.
inline LllResult lll_reduce(MatrixXd b) {
  const int d = static_cast<int>(b.cols());
  Eigen::MatrixXi u = Eigen::MatrixXi::Identity(d, d);
  const double delta = 0.75;

  MatrixXd bstar = b;
  MatrixXd mu = MatrixXd::Identity(d, d);
  std::vector<double> norms2(d);
  auto gram_schmidt = [&]() {
    for (int i = 0; i < d; ++i) {
      VectorXd v = b.col(i);
      for (int j = 0; j < i; ++j) {
        mu(i, j) = b.col(i).dot(bstar.col(j)) / norms2[j];
        v -= mu(i, j) * bstar.col(j);
      }
      bstar.col(i) = v;
      norms2[i] = v.squaredNorm();
    }
  };
  gram_schmidt();

  int kk = 1;
  int guard = 0;
  while (kk < d && guard++ < 10000) {
    for (int j = kk - 1; j >= 0; --j) {
      double m = b.col(kk).dot(bstar.col(j)) / norms2[j];
      long r = std::lround(m);
      if (r != 0) {
        b.col(kk) -= double(r) * b.col(j);
        u.col(kk) -= int(r) * u.col(j);
        gram_schmidt();
      }
    }
    double proj = b.col(kk).dot(bstar.col(kk - 1)) / norms2[kk - 1];
    if (norms2[kk] + proj * proj * norms2[kk - 1] >=
        delta * norms2[kk - 1]) {
      ++kk;
    } else {
      b.col(kk).swap(b.col(kk - 1));
      u.col(kk).swap(u.col(kk - 1));
      gram_schmidt();
      kk = std::max(kk - 1, 1);
    }
  }
  return LllResult{std::move(b), std::move(u)};
}

/// Visits every nonzero x in Z^d with ||basis * x|| <= radius
/// (branch-and-bound on the Cholesky factor of the Gram matrix). The
/// visit order is deterministic. Includes x = 0 when include_zero.
template <class Fn>
void enumerate_lattice_ball(const MatrixXd& basis, double radius,
                            bool include_zero, Fn&& visit) {
  const int d = static_cast<int>(basis.cols());
  MatrixXd gram = basis.transpose() * basis;
  Eigen::LLT<MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw DegenerateError("lattice: basis is numerically singular");
  MatrixXd r = llt.matrixL().transpose();  // ||Bx||^2 = ||Rx||^2
  const double r2 = radius * radius * (1.0 + 1e-12) + 1e-12;

  std::vector<std::int64_t> x(d, 0);
  // recurse from the last coordinate down
  auto rec = [&](auto&& self, int i, double partial) -> void {
    double center = 0;
    for (int j = i + 1; j < d; ++j) center += r(i, j) * double(x[j]);
    center = -center / r(i, i);
    double slack = std::sqrt(std::max(0.0, r2 - partial)) / r(i, i);
    auto lo = static_cast<std::int64_t>(std::ceil(center - slack));
    auto hi = static_cast<std::int64_t>(std::floor(center + slack));
    for (std::int64_t v = lo; v <= hi; ++v) {
      double term = r(i, i) * (double(v) - center);
      double p = partial + term * term;
      if (p > r2) continue;
      x[i] = v;
      if (i == 0) {
        bool zero = true;
        for (int j = 0; j < d; ++j) zero = zero && x[j] == 0;
        if (!zero || include_zero) visit(x);
      } else {
        self(self, i - 1, p);
      }
    }
    x[i] = 0;
  };
  rec(rec, d - 1, 0.0);
}

/// Shortest nonzero vector length (exact enumeration after LLL).
inline double shortest_vector_length(const MatrixXd& basis) {
  LllResult red = lll_reduce(basis);
  double best = red.basis.colwise().norm().minCoeff();
  enumerate_lattice_ball(red.basis, best, false,
                         [&](const std::vector<std::int64_t>& x) {
                           VectorXd p = VectorXd::Zero(basis.rows());
                           for (int j = 0; j < red.basis.cols(); ++j)
                             p += double(x[j]) * red.basis.col(j);
                           double l = p.norm();
                           if (l > 0 && l < best) best = l;
                         });
  return best;
}

}  // namespace symp
