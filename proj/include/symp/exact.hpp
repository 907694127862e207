#pragma once

// Exact integer linear algebra: HNF with transform, Smith diagonalization,
// integer kernels, lattice membership, and an incremental rational-span
// tracker over gcd-normalized integer rows.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "symp/errors.hpp"

namespace symp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntRow = std::vector<Int>;
using IntMat = std::vector<IntRow>;

inline IntMat int_identity(std::size_t n) {
  IntMat m(n, IntRow(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat int_transpose(const IntMat& a) {
  if (a.empty()) return {};
  IntMat t(a[0].size(), IntRow(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Int content_gcd(const IntRow& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

namespace detail {

inline void row_axpy(IntRow& dst, const Int& c, const IntRow& src) {
  for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += c * src[j];
}

}  // namespace detail

/// Row-style Hermite normal form. Returns H (same shape as A) together
/// with a unimodular T such that T*A = H. Pivots are positive, entries
/// above a pivot are reduced into [0, pivot), rows of zeros sink to the
/// bottom. Pivot columns strictly increase.
struct HnfResult {
  IntMat h;
  IntMat t;          // transform, rows(A) x rows(A)
  std::size_t rank;  // number of nonzero rows of h
  std::vector<std::size_t> pivot_cols;
};

inline HnfResult hermite_normal_form(IntMat a) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  IntMat t = int_identity(m);
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    // Euclid entries in this column below `row` down to a single pivot.
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = row; i < m; ++i) {
        if (a[i][col] != 0 &&
            (best == m || boost::multiprecision::abs(a[i][col]) <
                              boost::multiprecision::abs(a[best][col])))
          best = i;
      }
      if (best == m) break;  // column clear below row
      std::swap(a[row], a[best]);
      std::swap(t[row], t[best]);
      bool clean = true;
      for (std::size_t i = row + 1; i < m; ++i) {
        if (a[i][col] == 0) continue;
        Int q = a[i][col] / a[row][col];
        if (q != 0) {
          detail::row_axpy(a[i], -q, a[row]);
          detail::row_axpy(t[i], -q, t[row]);
        }
        if (a[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[row][col] == 0) continue;
    if (a[row][col] < 0) {
      for (auto& x : a[row]) x = -x;
      for (auto& x : t[row]) x = -x;
    }
    // Reduce entries above the pivot into [0, pivot).
    for (std::size_t i = 0; i < row; ++i) {
      Int q = a[i][col] / a[row][col];
      if (a[i][col] - q * a[row][col] < 0) q -= 1;
      if (q != 0) {
        detail::row_axpy(a[i], -q, a[row]);
        detail::row_axpy(t[i], -q, t[row]);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return HnfResult{std::move(a), std::move(t), row, std::move(pivots)};
}

/// Basis (as rows) of the integer right-kernel {x in Z^n : A x = 0}.
inline IntMat integer_right_kernel(const IntMat& a) {
  IntMat at = int_transpose(a);
  if (at.empty()) return {};
  HnfResult res = hermite_normal_form(at);
  IntMat kernel;
  for (std::size_t i = res.rank; i < res.h.size(); ++i)
    kernel.push_back(res.t[i]);
  return kernel;
}

/// Saturation of the row space: rowspace_Q(A) intersected with Z^n,
/// returned as a basis of rows. Equals the integer vectors orthogonal to
/// the rational kernel of A.
inline IntMat saturate_rowspace(const IntMat& a) {
  IntMat k = integer_right_kernel(a);  // rows span ker(A) over Q
  if (k.empty()) {
    // full rank: saturation is all of Z^n
    return int_identity(a.empty() ? 0 : a[0].size());
  }
  // v in the saturation iff v is orthogonal to every kernel row
  return integer_right_kernel(k);
}

/// Membership of `target` in the lattice generated by the rows of `gens`.
/// On success returns coefficients y with y * gens = target.
inline std::optional<IntRow> lattice_membership(const IntMat& gens,
                                                const IntRow& target) {
  if (gens.empty()) {
    for (const Int& x : target)
      if (x != 0) return std::nullopt;
    return IntRow{};
  }
  HnfResult res = hermite_normal_form(gens);
  IntRow residual = target;
  IntRow coeff_h(gens.size(), 0);
  for (std::size_t i = 0; i < res.rank; ++i) {
    std::size_t p = res.pivot_cols[i];
    Int q = residual[p] / res.h[i][p];
    if (residual[p] - q * res.h[i][p] != 0) return std::nullopt;
    if (q != 0) detail::row_axpy(residual, -q, res.h[i]);
    coeff_h[i] = q;
  }
  for (const Int& x : residual)
    if (x != 0) return std::nullopt;
  // Map back through the transform: target = sum coeff_h[i] * h_i
  //                                        = (coeff_h * T) * gens.
  IntRow y(gens.size(), 0);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j)
      y[j] += coeff_h[i] * res.t[i][j];
  return y;
}

/// Diagonal of a Smith-style diagonalization U A V = diag(s_1..s_t)
/// (invariant factors, nonnegative, with the divisibility chain enforced).
inline std::vector<Int> smith_diagonal(IntMat a) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  std::vector<Int> diag;
  std::size_t top = 0;
  auto nonzero_at_or_after = [&](std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 &&
            (!found || boost::multiprecision::abs(a[i][j]) <
                           boost::multiprecision::abs(a[pi][pj]))) {
          pi = i;
          pj = j;
          found = true;
        }
    return found;
  };
  while (top < m && top < n) {
    std::size_t pi = top, pj = top;
    if (!nonzero_at_or_after(top, pi, pj)) break;
    std::swap(a[top], a[pi]);
    for (std::size_t i = 0; i < m; ++i) std::swap(a[i][top], a[i][pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = top + 1; i < m; ++i) {
        if (a[i][top] == 0) continue;
        Int q = a[i][top] / a[top][top];
        detail::row_axpy(a[i], -q, a[top]);
        if (a[i][top] != 0) {
          std::swap(a[top], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = top + 1; j < n; ++j) {
        if (a[top][j] == 0) continue;
        Int q = a[top][j] / a[top][top];
        for (std::size_t i = 0; i < m; ++i) a[i][j] -= q * a[i][top];
        if (a[top][j] != 0) {
          for (std::size_t i = 0; i < m; ++i) std::swap(a[i][top], a[i][j]);
          clean = false;
        }
      }
    }
    diag.push_back(boost::multiprecision::abs(a[top][top]));
    ++top;
  }
  // Enforce the divisibility chain s_i | s_{i+1}. All entries collected
  // above are nonzero.
  for (std::size_t i = 0; i + 1 < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[j] % diag[i] != 0) {
        Int g = boost::multiprecision::gcd(diag[i], diag[j]);
        diag[j] = diag[i] / g * diag[j];
        diag[i] = g;
      }
    }
  return diag;
}

inline std::size_t integer_rank(const IntMat& a) {
  return hermite_normal_form(a).rank;
}

/// Exact determinant of a square rational matrix (Gaussian elimination
/// over Q).
inline Rat rational_determinant(std::vector<std::vector<Rat>> a) {
  const std::size_t n = a.size();
  Rat det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      Rat f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

/// Incremental rational-span tracker over integer rows. Rows are kept
/// gcd-normalized in echelon form; `add` returns true when the vector
/// enlarged the span. Membership in the rational span is exact.
class IntRowSpan {
 public:
  explicit IntRowSpan(std::size_t width) : width_(width) {}

  std::size_t dim() const { return rows_.size(); }
  std::size_t width() const { return width_; }

  bool contains(IntRow v) const { return reduce(v); }

  bool add(IntRow v) {
    if (reduce(v)) return false;
    Int g = content_gcd(v);
    if (g > 1)
      for (auto& x : v) x /= g;
    std::size_t lead = leading(v);
    if (v[lead] < 0)
      for (auto& x : v) x = -x;
    auto it = rows_.begin();
    while (it != rows_.end() && leading(*it) < lead) ++it;
    rows_.insert(it, std::move(v));
    return true;
  }

  const std::vector<IntRow>& rows() const { return rows_; }

 private:
  std::size_t leading(const IntRow& v) const {
    for (std::size_t j = 0; j < width_; ++j)
      if (v[j] != 0) return j;
    return width_;
  }

  // Reduces v against the stored rows (cross-multiplication, then gcd
  // normalization). Returns true iff v lies in the span.
  bool reduce(IntRow& v) const {
    for (const IntRow& p : rows_) {
      std::size_t c = leading(p);
      if (v[c] == 0) continue;
      Int a = p[c], b = v[c];
      Int g = boost::multiprecision::gcd(a, b);
      Int ma = a / g, mb = b / g;
      for (std::size_t j = 0; j < width_; ++j) v[j] = v[j] * ma - p[j] * mb;
      Int cg = content_gcd(v);
      if (cg > 1)
        for (auto& x : v) x /= cg;
    }
    for (const Int& x : v)
      if (x != 0) return false;
    return true;
  }

  std::size_t width_;
  std::vector<IntRow> rows_;  // sorted by leading column
};

}  // namespace symp
