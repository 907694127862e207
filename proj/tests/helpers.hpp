#pragma once

// Shared test utilities: random SL matrices, brute-force counting
// oracles, and small conveniences. Oracles here are independent of the
// library implementation paths they check.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "symp/enumeration.hpp"
#include "symp/forms.hpp"
#include "symp/linalg.hpp"
#include "symp/rng.hpp"

namespace testutil {

using namespace symp;

/// Random g in SL_d(R) close to the identity: exp of a small traceless
/// matrix, determinant corrected for floating drift.
inline MatrixXd random_sl(int d, double scale, Rng& rng) {
  MatrixXd g = matrix_exp(random_traceless(d, scale, rng));
  double det = g.determinant();
  g /= std::pow(std::abs(det), 1.0 / d);
  if (det < 0) g.col(0) = -g.col(0);
  return g;
}

inline VectorXd random_vector(int d, double scale, Rng& rng) {
  VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * rng.normal();
  return v;
}

/// Naive integer-vector enumeration oracle: full box scan.
inline std::vector<VectorXd> brute_ball(int dim, double T,
                                        const VectorClass& cls,
                                        bool include_zero = false) {
  std::vector<VectorXd> out;
  auto limit = static_cast<std::int64_t>(std::floor(T)) + 1;
  std::vector<std::int64_t> c(dim, -limit);
  for (;;) {
    double norm2 = 0;
    bool zero = true;
    for (int d = 0; d < dim; ++d) {
      norm2 += double(c[d]) * double(c[d]);
      zero = zero && c[d] == 0;
    }
    if (norm2 < T * T && (!zero || include_zero) &&
        cls.accepts(c.data(), dim)) {
      VectorXd v(dim);
      for (int d = 0; d < dim; ++d) v(d) = double(c[d]);
      out.push_back(v);
    }
    int pos = 0;
    while (pos < dim && c[pos] == limit) {
      c[pos] = -limit;
      ++pos;
    }
    if (pos == dim) break;
    ++c[pos];
  }
  return out;
}

/// Brute-force ordered k-tuple counting oracle (all index combinations
/// with repetition, every pairwise constraint checked directly).
inline std::int64_t brute_count_tuples(const SymplecticForm& form,
                                       const IntervalGrid& grid, double T,
                                       const VectorClass& cls,
                                       bool include_zero = false) {
  auto pts = brute_ball(form.dim(), T, cls, include_zero);
  const int k = grid.k();
  const auto n = static_cast<std::int64_t>(pts.size());
  std::int64_t count = 0;
  std::vector<std::int64_t> idx(k, 0);
  if (n == 0) return 0;
  for (;;) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int j = i + 1; j < k && ok; ++j)
        ok = grid.contains(i + 1, j + 1,
                           form.evaluate(pts[idx[i]], pts[idx[j]]));
    count += ok;
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - 1) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[pos];
  }
  return count;
}

}  // namespace testutil
