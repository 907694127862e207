#pragma once

// Enumeration of integer vectors in balls and counting of ordered
// k-tuples whose pairwise symplectic values land in an interval grid.
// The k=2 kernel is the throughput-critical path: the T=12, dim-4
// experiments touch on the order of 1e10 vector pairs.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "symp/errors.hpp"
#include "symp/forms.hpp"
#include "symp/parallel.hpp"

namespace symp {

struct VectorClass {
  enum class Kind { All, Primitive, Congruence };

  Kind kind = Kind::All;
  std::vector<std::int64_t> v0;  // congruence residue, entrywise
  std::int64_t modulus = 1;

  static VectorClass all() { return {}; }

  static VectorClass primitive() {
    VectorClass c;
    c.kind = Kind::Primitive;
    return c;
  }

  static VectorClass congruence(std::vector<std::int64_t> v0,
                                std::int64_t modulus) {
    if (modulus < 1) throw Error("class: modulus must be positive");
    std::int64_t g = 0;
    for (auto x : v0) g = std::gcd(g, x);
    if (std::gcd(g, modulus) != 1)
      throw Error("class: gcd(v0, N) must be 1");
    VectorClass c;
    c.kind = Kind::Congruence;
    c.v0 = std::move(v0);
    c.modulus = modulus;
    return c;
  }

  bool accepts(const std::int64_t* coords, int dim) const {
    switch (kind) {
      case Kind::All:
        return true;
      case Kind::Primitive: {
        std::int64_t g = 0;
        for (int d = 0; d < dim; ++d) g = std::gcd(g, coords[d]);
        return g == 1;
      }
      case Kind::Congruence: {
        if (static_cast<int>(v0.size()) != dim)
          throw DimensionError("class: v0 length != dim");
        for (int d = 0; d < dim; ++d) {
          std::int64_t r = (coords[d] - v0[d]) % modulus;
          if (r != 0) return false;
        }
        return true;
      }
    }
    return false;
  }
};

struct EnumOptions {
  bool include_zero = false;       // literal-set mode of the counting region
  std::int64_t max_points = 20'000'000;
};

/// Integer vectors stored row-major, with a structure-of-arrays shadow for
/// the pair kernel.
class PointSet {
 public:
  PointSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::int64_t size() const {
    return static_cast<std::int64_t>(coords_.size()) / dim_;
  }
  const std::int64_t* point(std::int64_t i) const {
    return coords_.data() + i * dim_;
  }
  void push(const std::int64_t* c) {
    coords_.insert(coords_.end(), c, c + dim_);
  }

  std::vector<VectorXd> as_vectors() const {
    std::vector<VectorXd> out;
    out.reserve(size());
    for (std::int64_t i = 0; i < size(); ++i) {
      VectorXd v(dim_);
      for (int d = 0; d < dim_; ++d) v(d) = double(point(i)[d]);
      out.push_back(std::move(v));
    }
    return out;
  }

  /// Column-major double copies for the fused dot-product kernel.
  std::vector<std::vector<double>> columns() const {
    std::vector<std::vector<double>> cols(dim_,
                                          std::vector<double>(size()));
    for (std::int64_t i = 0; i < size(); ++i)
      for (int d = 0; d < dim_; ++d) cols[d][i] = double(point(i)[d]);
    return cols;
  }

 private:
  int dim_;
  std::vector<std::int64_t> coords_;
};

namespace detail {

inline std::int64_t largest_int_below(double r2) {
  // largest m >= 0 with m*m < r2
  if (r2 <= 0) return -1;
  auto m = static_cast<std::int64_t>(std::floor(std::sqrt(r2)));
  while (double(m) * double(m) >= r2) --m;
  while (double(m + 1) * double(m + 1) < r2) ++m;
  return m;
}

inline double predicted_ball_count(int dim, double T,
                                   const VectorClass& cls) {
  double pred = unit_ball_volume(dim) * std::pow(T, dim);
  // surface correction for small T
  pred += unit_ball_volume(dim) * dim * std::pow(T + 1.0, dim - 1) + 16.0;
  if (cls.kind == VectorClass::Kind::Congruence)
    pred /= std::pow(double(cls.modulus), dim);
  return pred;
}

}  // namespace detail

/// All v in Z^dim with ||v|| < T (strict), zero excluded unless
/// include_zero, filtered by class, in lexicographic order.
inline PointSet enum_ball(int dim, double T, const VectorClass& cls,
                          const EnumOptions& opt = {}) {
  if (dim < 1) throw DimensionError("enum_ball: dim must be >= 1");
  if (!(T > 0)) throw Error("enum_ball: T must be positive");
  if (detail::predicted_ball_count(dim, T, cls) >
      double(opt.max_points))
    throw CapacityError("enum_ball: predicted count exceeds budget");

  PointSet pts(dim);
  std::vector<std::int64_t> c(dim, 0);
  const double t2 = T * T;
  const bool congruent = cls.kind == VectorClass::Kind::Congruence;

  auto recurse = [&](auto&& self, int level, double partial) -> void {
    std::int64_t m = detail::largest_int_below(t2 - partial);
    if (m < 0) return;
    std::int64_t lo = -m, step = 1;
    if (congruent) {
      // first value >= -m congruent to v0[level] mod N
      std::int64_t n = cls.modulus;
      std::int64_t r = ((cls.v0[level] % n) + n) % n;
      std::int64_t delta = ((r + m) % n + n) % n;
      lo = -m + delta;
      step = n;
    }
    for (std::int64_t v = lo; v <= m; v += step) {
      c[level] = v;
      double p = partial + double(v) * double(v);
      if (p >= t2) continue;
      if (level + 1 == dim) {
        bool zero = true;
        for (int d = 0; d < dim; ++d) zero = zero && c[d] == 0;
        if (zero && !opt.include_zero) continue;
        if (cls.kind == VectorClass::Kind::Primitive) {
          std::int64_t g = 0;
          for (int d = 0; d < dim; ++d) g = std::gcd(g, c[d]);
          if (g != 1) continue;
        }
        pts.push(c.data());
      } else {
        self(self, level + 1, p);
      }
    }
  };
  recurse(recurse, 0, 0.0);
  return pts;
}

struct CountQuery {
  SymplecticForm form;
  IntervalGrid grid;
  double T = 0;
  VectorClass cls;
  EnumOptions options;
  int threads = 0;  // 0 = hardware concurrency

  CountQuery(SymplecticForm f, IntervalGrid g, double T_,
             VectorClass c = VectorClass::all())
      : form(std::move(f)), grid(std::move(g)), T(T_), cls(std::move(c)) {
    if (!(T > 0)) throw Error("query: T must be positive");
  }
};

struct CountReport {
  std::int64_t count = 0;
  double T = 0;
  double elapsed = 0;  // seconds
  std::optional<double> main_term;
  std::optional<double> ratio;

  void attach_main_term(double m) {
    main_term = m;
    if (m != 0.0) ratio = double(count) / m;
  }
};

namespace detail {

/// Ordered-pair kernel. Vectors are processed as v1 = point i against all
/// j > i with w = M^T v1 precomputed once; the reverse orientation is
/// folded in through <v2,v1> = -<v1,v2>. Diagonal pairs (v,v) contribute
/// when the interval contains 0.
inline std::int64_t count_pairs(const PointSet& pts, const MatrixXd& gram,
                                double a, double b, int threads) {
  const std::int64_t n = pts.size();
  const int dim = pts.dim();
  std::int64_t total = 0;
  if (a < 0.0 && 0.0 < b) total += n;  // v1 == v2
  if (n == 0) return total;

  auto cols = pts.columns();
  std::vector<const double*> col(dim);
  for (int d = 0; d < dim; ++d) col[d] = cols[d].data();
  MatrixXd mt = gram.transpose();

  std::atomic<std::int64_t> shared{0};
  // Block size balances scheduling overhead against tail imbalance.
  const std::int64_t block = 64;
  parallel_chunks(n, block, threads, [&](std::int64_t i0, std::int64_t i1) {
    std::int64_t local = 0;
    std::vector<double> w(dim);
    for (std::int64_t i = i0; i < i1; ++i) {
      for (int d = 0; d < dim; ++d) {
        double s = 0;
        for (int e = 0; e < dim; ++e) s += mt(d, e) * col[e][i];
        w[d] = s;
      }
      if (dim == 4) {
        const double w0 = w[0], w1 = w[1], w2 = w[2], w3 = w[3];
        const double *x0 = col[0], *x1 = col[1], *x2 = col[2],
                     *x3 = col[3];
        for (std::int64_t j = i + 1; j < n; ++j) {
          double s = w0 * x0[j] + w1 * x1[j] + w2 * x2[j] + w3 * x3[j];
          local += (a < s) & (s < b);
          local += (a < -s) & (-s < b);
        }
      } else {
        for (std::int64_t j = i + 1; j < n; ++j) {
          double s = 0;
          for (int d = 0; d < dim; ++d) s += w[d] * col[d][j];
          local += (a < s) & (s < b);
          local += (a < -s) & (-s < b);
        }
      }
    }
    shared.fetch_add(local, std::memory_order_relaxed);
  });
  return total + shared.load();
}

/// Depth-first tuple extension for k >= 3: a partial tuple dies as soon
/// as a pairwise constraint fails, checked against the most recently
/// added vector first.
inline std::int64_t count_tuples_dfs(const PointSet& pts,
                                     const MatrixXd& gram,
                                     const IntervalGrid& grid, int threads) {
  const std::int64_t n = pts.size();
  const int dim = pts.dim();
  const int k = grid.k();
  if (n == 0) return 0;

  auto cols = pts.columns();
  std::vector<const double*> col(dim);
  for (int d = 0; d < dim; ++d) col[d] = cols[d].data();
  MatrixXd mt = gram.transpose();

  std::atomic<std::int64_t> shared{0};
  parallel_chunks(n, 16, threads, [&](std::int64_t i0, std::int64_t i1) {
    std::int64_t local = 0;
    // w[l] = M^T v_{choice l}
    std::vector<std::vector<double>> w(k, std::vector<double>(dim));
    auto fill_w = [&](int level, std::int64_t j) {
      for (int d = 0; d < dim; ++d) {
        double s = 0;
        for (int e = 0; e < dim; ++e) s += mt(d, e) * col[e][j];
        w[level][d] = s;
      }
    };
    auto extend = [&](auto&& self, int level) -> void {
      for (std::int64_t j = 0; j < n; ++j) {
        bool ok = true;
        for (int t = level - 1; t >= 0 && ok; --t) {
          double s = 0;
          for (int d = 0; d < dim; ++d) s += w[t][d] * col[d][j];
          ok = grid.contains(t + 1, level + 1, s);
        }
        if (!ok) continue;
        if (level + 1 == k) {
          ++local;
        } else {
          fill_w(level, j);
          self(self, level + 1);
        }
      }
    };
    for (std::int64_t i = i0; i < i1; ++i) {
      fill_w(0, i);  // level 0 fixed to i; levels 1..k-1 chosen by DFS
      extend(extend, 1);
    }
    shared.fetch_add(local, std::memory_order_relaxed);
  });
  return shared.load();
}

}  // namespace detail

inline std::int64_t theoretical_exponent(int n, int k) {
  return std::int64_t(2) * n * k - std::int64_t(k) * (k - 1);
}

/// Count of ordered k-tuples from the class with all norms < T and all
/// pairwise values inside the grid.
inline CountReport count_tuples(const CountQuery& q) {
  auto t0 = std::chrono::steady_clock::now();
  if (q.grid.k() < 2) throw DimensionError("count: k must be >= 2");
  PointSet pts = enum_ball(q.form.dim(), q.T, q.cls, q.options);
  std::int64_t count;
  if (q.grid.k() == 2) {
    auto [a, b] = q.grid.bounds(1, 2);
    count = detail::count_pairs(pts, q.form.gram(), a, b, q.threads);
  } else {
    count = detail::count_tuples_dfs(pts, q.form.gram(), q.grid, q.threads);
  }
  CountReport rep;
  rep.count = count;
  rep.T = q.T;
  rep.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

struct CountSeries {
  std::vector<CountReport> reports;
  double fitted_exponent = 0;
};

/// Per-T counts plus the least-squares slope of log(count) against
/// log(T); cg (when given) fills main terms and ratios.
inline CountSeries count_series(const CountQuery& base,
                                const std::vector<double>& Ts,
                                std::optional<double> cg = std::nullopt) {
  if (Ts.size() < 3) throw FitError("series: need at least 3 T values");
  for (std::size_t i = 1; i < Ts.size(); ++i)
    if (!(Ts[i] > Ts[i - 1]))
      throw Error("series: Ts must be strictly increasing");
  CountSeries out;
  const int n = base.form.n();
  const int k = base.grid.k();
  for (double T : Ts) {
    CountQuery q = base;
    q.T = T;
    CountReport rep = count_tuples(q);
    if (cg)
      rep.attach_main_term(*cg * base.grid.width_product() *
                           std::pow(T, double(theoretical_exponent(n, k))));
    out.reports.push_back(rep);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : out.reports) {
    if (r.count <= 0) continue;
    double x = std::log(r.T), y = std::log(double(r.count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) throw FitError("series: fewer than 3 nonzero counts");
  double denom = sxx - sx * sx / m;
  out.fitted_exponent = (sxy - sx * sy / m) / denom;
  return out;
}

struct PrimitiveRatio {
  double ratio = 0;
  double reference = 0;  // 1 / zeta(2n)^k
  std::int64_t count_primitive = 0;
  std::int64_t count_all = 0;
};

inline PrimitiveRatio primitive_ratio(const SymplecticForm& form,
                                      const IntervalGrid& grid, double T,
                                      int threads = 0,
                                      const EnumOptions& opt = {}) {
  CountQuery qa(form, grid, T, VectorClass::all());
  qa.threads = threads;
  qa.options = opt;
  CountQuery qp(form, grid, T, VectorClass::primitive());
  qp.threads = threads;
  qp.options = opt;
  PrimitiveRatio out;
  out.count_all = count_tuples(qa).count;
  out.count_primitive = count_tuples(qp).count;
  if (out.count_all == 0)
    throw DivisionError("primitive_ratio: count(All) is zero");
  out.ratio = double(out.count_primitive) / double(out.count_all);
  out.reference =
      1.0 / std::pow(std::riemann_zeta(double(2 * form.n())), grid.k());
  return out;
}

}  // namespace symp
