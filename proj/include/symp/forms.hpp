#pragma once

// Symplectic forms <.,.>^g = (g v1)^T J_n (g v2), their cached Gram
// matrices, target interval grids, and the rationality test.

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "symp/errors.hpp"
#include "symp/exact.hpp"
#include "symp/linalg.hpp"

namespace symp {

class SymplecticForm {
 public:
  /// Form conjugated by g in SL_{2n}(R). Validates |det g - 1| <= det_tol
  /// and the skew-symmetry / non-degeneracy of the cached Gram matrix.
  static SymplecticForm from_g(const MatrixXd& g, int n,
                               double det_tol = 1e-9) {
    check_n(n);
    if (g.rows() != g.cols()) throw DimensionError("form: g must be square");
    if (g.rows() % 2 != 0) throw DimensionError("form: g has odd size");
    if (g.rows() != 2 * n) throw DimensionError("form: g size != 2n");
    double det = g.determinant();
    if (std::abs(det - 1.0) > det_tol)
      throw DeterminantError("form: |det g - 1| exceeds tolerance");
    MatrixXd gram = g.transpose() * standard_j(n) * g;
    return SymplecticForm(n, g, std::move(gram), det_tol);
  }

  /// Form given directly by a skew-symmetric Gram matrix (no g available).
  static SymplecticForm from_gram(const MatrixXd& gram, int n,
                                  double det_tol = 1e-9) {
    check_n(n);
    if (gram.rows() != 2 * n || gram.cols() != 2 * n)
      throw DimensionError("form: gram size != 2n");
    SymplecticForm f(n, std::nullopt, gram, det_tol);
    return f;
  }

  static SymplecticForm standard(int n) {
    return from_g(MatrixXd::Identity(2 * n, 2 * n), n);
  }

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  bool has_g() const { return g_.has_value(); }

  const MatrixXd& g() const {
    if (!g_) throw Error("form: no g available (gram-only form)");
    return *g_;
  }

  const MatrixXd& gram() const { return gram_; }
  double det_tol() const { return det_tol_; }

  /// <v1, v2>^g = v1^T M v2 with the cached Gram matrix M.
  double evaluate(const VectorXd& v1, const VectorXd& v2) const {
    if (v1.size() != dim() || v2.size() != dim())
      throw DimensionError("evaluate: vector length != 2n");
    return v1.dot(gram_ * v2);
  }

  /// Values (<v_i, v_j>^g)_{i<j} in lexicographic (i, j) order.
  std::vector<double> pair_values(const std::vector<VectorXd>& tuple) const {
    if (tuple.size() < 2) throw DimensionError("pair_values: need k >= 2");
    for (const auto& v : tuple)
      if (v.size() != dim())
        throw DimensionError("pair_values: vector length != 2n");
    std::vector<double> out;
    out.reserve(tuple.size() * (tuple.size() - 1) / 2);
    for (std::size_t i = 0; i < tuple.size(); ++i)
      for (std::size_t j = i + 1; j < tuple.size(); ++j)
        out.push_back(tuple[i].dot(gram_ * tuple[j]));
    return out;
  }

 private:
  SymplecticForm(int n, std::optional<MatrixXd> g, MatrixXd gram,
                 double det_tol)
      : n_(n), g_(std::move(g)), gram_(std::move(gram)), det_tol_(det_tol) {
    validate_gram();
  }

  static void check_n(int n) {
    if (n < 1) throw DimensionError("form: n must be >= 1");
  }

  void validate_gram() const {
    double scale = gram_.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw ZeroFormError("form: gram matrix is zero");
    double skew = (gram_ + gram_.transpose()).cwiseAbs().maxCoeff();
    if (skew > 1e-12 * scale)
      throw Error("form: gram matrix is not skew-symmetric");
    double det = gram_.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-6)
      throw DeterminantError("form: |det gram| != 1");
  }

  int n_;
  std::optional<MatrixXd> g_;
  MatrixXd gram_;
  double det_tol_;
};

/// Target intervals (a_ij, b_ij), 1 <= i < j <= k, all pairs present.
class IntervalGrid {
 public:
  IntervalGrid(int k, std::vector<std::pair<double, double>> bounds)
      : k_(k), bounds_(std::move(bounds)) {
    if (k < 2) throw DimensionError("grid: k must be >= 2");
    if (bounds_.size() != static_cast<std::size_t>(pair_count()))
      throw DimensionError("grid: need k(k-1)/2 intervals");
    for (auto& [a, b] : bounds_) {
      if (!std::isfinite(a) || !std::isfinite(b))
        throw Error("grid: intervals must be bounded");
      if (!(a < b)) throw Error("grid: need a < b");
    }
  }

  static IntervalGrid uniform(int k, double a, double b) {
    if (k < 2) throw DimensionError("grid: k must be >= 2");
    return IntervalGrid(
        k, std::vector<std::pair<double, double>>(k * (k - 1) / 2, {a, b}));
  }

  int k() const { return k_; }
  int pair_count() const { return k_ * (k_ - 1) / 2; }

  /// Flat index of the pair (i, j), 1-based, in lexicographic order.
  int pair_index(int i, int j) const {
    if (!(1 <= i && i < j && j <= k_)) throw DimensionError("grid: bad pair");
    return (i - 1) * k_ - (i * (i - 1)) / 2 + (j - i - 1);
  }

  const std::pair<double, double>& bounds(int i, int j) const {
    return bounds_[pair_index(i, j)];
  }
  const std::pair<double, double>& bounds_flat(int idx) const {
    return bounds_[idx];
  }

  bool contains(int i, int j, double value) const {
    const auto& [a, b] = bounds(i, j);
    return a < value && value < b;
  }

  double width_product() const {
    double p = 1.0;
    for (auto& [a, b] : bounds_) p *= (b - a);
    return p;
  }

  /// Smallest N with all intervals inside [-N, N].
  double interval_bound() const {
    double n = 0.0;
    for (auto& [a, b] : bounds_) n = std::max({n, std::abs(a), std::abs(b)});
    return n;
  }

 private:
  int k_;
  std::vector<std::pair<double, double>> bounds_;  // lex order by (i, j)
};

/// One entry of an ExactGram: exact rational or a float flagged inexact.
struct ExactScalar {
  bool exact = false;
  Rat value = 0;       // meaningful when exact
  double approx = 0.0; // always meaningful

  static ExactScalar rational(Rat v) {
    ExactScalar s;
    s.exact = true;
    s.value = v;
    s.approx = static_cast<double>(v);
    return s;
  }
  static ExactScalar inexact(double v) {
    ExactScalar s;
    s.exact = false;
    s.approx = v;
    return s;
  }
  bool is_zero() const { return exact ? value == 0 : approx == 0.0; }
};

/// Skew-symmetric Gram matrix with exact-or-flagged entries, the input of
/// the rationality test.
class ExactGram {
 public:
  ExactGram(int n, std::vector<std::vector<ExactScalar>> entries)
      : n_(n), entries_(std::move(entries)) {
    const int d = 2 * n;
    if (n < 1) throw DimensionError("exact gram: n must be >= 1");
    if (entries_.size() != static_cast<std::size_t>(d))
      throw DimensionError("exact gram: wrong size");
    for (auto& row : entries_)
      if (row.size() != static_cast<std::size_t>(d))
        throw DimensionError("exact gram: wrong size");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (entries_[i][j].exact && entries_[j][i].exact &&
            entries_[i][j].value != -entries_[j][i].value)
          throw Error("exact gram: exact entries not skew-symmetric");
      }
  }

  static ExactGram from_double(const MatrixXd& m, int n) {
    std::vector<std::vector<ExactScalar>> e(
        2 * n, std::vector<ExactScalar>(2 * n));
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        e[i][j] = ExactScalar::inexact(m(i, j));
    return ExactGram(n, std::move(e));
  }

  static ExactGram from_rational(const std::vector<std::vector<Rat>>& m,
                                 int n) {
    std::vector<std::vector<ExactScalar>> e(
        2 * n, std::vector<ExactScalar>(2 * n));
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        e[i][j] = ExactScalar::rational(m[i][j]);
    return ExactGram(n, std::move(e));
  }

  bool all_exact() const {
    for (auto& row : entries_)
      for (auto& e : row)
        if (!e.exact) return false;
    return true;
  }

  /// Exact |det| = 1 check; only meaningful when every entry is exact.
  bool unimodular_exact() const {
    std::vector<std::vector<Rat>> m(dim(), std::vector<Rat>(dim()));
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) m[i][j] = entries_[i][j].value;
    Rat det = rational_determinant(m);
    return det == 1 || det == -1;
  }

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const ExactScalar& at(int i, int j) const { return entries_[i][j]; }

  /// Upper-triangle entries (i < j), lexicographic.
  std::vector<ExactScalar> upper_entries() const {
    std::vector<ExactScalar> out;
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j) out.push_back(entries_[i][j]);
    return out;
  }

 private:
  int n_;
  std::vector<std::vector<ExactScalar>> entries_;
};

enum class RationalityKind { Rational, Irrational, Inconclusive };

struct RationalityVerdict {
  RationalityKind kind;
  double scale = 0.0;  // c with form = c * (integer form); set for Rational
};

namespace detail {

enum class CfOutcome { Terminated, BoundedNonTerminating, Ambiguous };

/// Continued-fraction probe of x: does the expansion terminate (within
/// tol), keep producing bounded partial quotients to full depth, or hit a
/// near-termination ambiguity? On termination, `den` is the convergent's
/// denominator.
inline CfOutcome continued_fraction_probe(double x, int depth, double tol,
                                          long long& den) {
  double q0 = 1, q1 = 0;  // convergent denominators k_{-2}, k_{-1}
  double quotient_bound = 1.0 / std::sqrt(tol);
  for (int step = 0; step < depth; ++step) {
    double a = std::floor(x);
    double next_q = a * q1 + q0;
    q0 = q1;
    q1 = next_q;
    double frac = x - a;
    if (frac <= tol) {
      den = static_cast<long long>(q1);
      return CfOutcome::Terminated;
    }
    x = 1.0 / frac;
    if (x > quotient_bound) return CfOutcome::Ambiguous;
  }
  return CfOutcome::BoundedNonTerminating;
}

}  // namespace detail

/// Three-way rationality verdict. Exact-rational input always decides;
/// float input is classified heuristically by continued fractions of
/// entry ratios (a finite-precision test cannot prove irrationality).
inline RationalityVerdict rationality_test(const ExactGram& gram,
                                           int cf_depth = 24,
                                           double tol = 1e-9) {
  std::vector<ExactScalar> entries = gram.upper_entries();
  std::vector<ExactScalar> nonzero;
  for (auto& e : entries)
    if (!e.is_zero()) nonzero.push_back(e);
  if (nonzero.empty()) throw ZeroFormError("rationality: all entries zero");

  bool all_exact = true;
  for (auto& e : nonzero) all_exact = all_exact && e.exact;
  if (all_exact) {
    Int l = 1;
    for (auto& e : nonzero)
      l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(e.value));
    return {RationalityKind::Rational, 1.0 / static_cast<double>(l)};
  }

  // Reference entry: largest magnitude (stable ratios).
  double ref = 0.0;
  for (auto& e : nonzero)
    if (std::abs(e.approx) > std::abs(ref)) ref = e.approx;

  bool saw_bounded_nonterminating = false;
  bool all_terminated = true;
  long long den_lcm = 1;
  for (auto& e : nonzero) {
    double ratio = e.approx / ref;
    long long den = 1;
    auto outcome =
        detail::continued_fraction_probe(std::abs(ratio), cf_depth, tol, den);
    switch (outcome) {
      case detail::CfOutcome::Terminated:
        den_lcm = std::lcm(den_lcm, den);
        break;
      case detail::CfOutcome::BoundedNonTerminating:
        saw_bounded_nonterminating = true;
        all_terminated = false;
        break;
      case detail::CfOutcome::Ambiguous:
        all_terminated = false;
        break;
    }
  }
  if (all_terminated)
    return {RationalityKind::Rational, std::abs(ref) / double(den_lcm)};
  if (saw_bounded_nonterminating) return {RationalityKind::Irrational, 0.0};
  return {RationalityKind::Inconclusive, 0.0};
}

}  // namespace symp
