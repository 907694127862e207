#pragma once

// Cone-integral estimation of the main-term coefficient c_g, the volume
// main term, direct rejection Monte Carlo of the region volume, and the
// smoothing error budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

#include "symp/errors.hpp"
#include "symp/forms.hpp"
#include "symp/linalg.hpp"
#include "symp/parallel.hpp"
#include "symp/rng.hpp"

namespace symp {

/// Ball window h (sharp indicator or a smooth one-sided approximation)
/// with an optional transform: h_g(v) = h(g^{-1} v).
class WindowFunction {
 public:
  enum class Kind { SharpBall, SmoothedBall };
  enum class Side { Lower, Upper };

  static WindowFunction sharp(double radius,
                              std::optional<MatrixXd> g = std::nullopt) {
    return WindowFunction(Kind::SharpBall, Side::Lower, 0.0, radius,
                          std::move(g));
  }
  static WindowFunction smoothed_lower(double delta, double radius,
                                       std::optional<MatrixXd> g = std::nullopt) {
    return WindowFunction(Kind::SmoothedBall, Side::Lower, delta, radius,
                          std::move(g));
  }
  static WindowFunction smoothed_upper(double delta, double radius,
                                       std::optional<MatrixXd> g = std::nullopt) {
    return WindowFunction(Kind::SmoothedBall, Side::Upper, delta, radius,
                          std::move(g));
  }

  Kind kind() const { return kind_; }
  Side side() const { return side_; }
  double delta() const { return delta_; }
  double radius() const { return radius_; }

  /// Sup norm S_0.
  double s0() const { return 1.0; }

  /// Gradient sup bound S_1; infinite for the sharp window.
  double s1() const {
    if (kind_ == Kind::SharpBall)
      return std::numeric_limits<double>::infinity();
    return 1.5 / (delta_ * radius_);
  }

  double evaluate(const VectorXd& v) const {
    double r = transform_inv_ ? (*transform_inv_ * v).norm() : v.norm();
    if (kind_ == Kind::SharpBall) return r <= radius_ ? 1.0 : 0.0;
    double lo, hi;
    if (side_ == Side::Lower) {
      lo = (1.0 - delta_) * radius_;
      hi = radius_;
    } else {
      lo = radius_;
      hi = (1.0 + delta_) * radius_;
    }
    if (r <= lo) return 1.0;
    if (r >= hi) return 0.0;
    double t = (hi - r) / (hi - lo);
    return t * t * (3.0 - 2.0 * t);  // smoothstep ramp
  }

 private:
  WindowFunction(Kind kind, Side side, double delta, double radius,
                 std::optional<MatrixXd> g)
      : kind_(kind), side_(side), delta_(delta), radius_(radius) {
    if (!(radius > 0)) throw Error("window: radius must be positive");
    if (kind == Kind::SmoothedBall && !(delta > 0 && delta < 1))
      throw Error("window: delta must lie in (0,1)");
    if (g) transform_inv_ = g->inverse();
  }

  Kind kind_;
  Side side_;
  double delta_;
  double radius_;
  std::optional<MatrixXd> transform_inv_;
};

/// S_t of a window list: max over t-subsets I of prod_{i in I} S_1(h_i)
/// times prod of the other sup norms. Subsets must avoid sharp windows
/// (their S_1 is undefined); returns nullopt when no such subset exists.
inline std::optional<double> windows_st(const std::vector<WindowFunction>& hs,
                                        int t) {
  if (t == 0) {
    double p = 1.0;
    for (auto& h : hs) p *= h.s0();
    return p;
  }
  std::vector<double> ratios;  // s1/s0 of the smooth windows
  double base = 1.0;
  for (auto& h : hs) {
    base *= h.s0();
    if (h.kind() == WindowFunction::Kind::SmoothedBall)
      ratios.push_back(h.s1() / h.s0());
  }
  if (static_cast<int>(ratios.size()) < t) return std::nullopt;
  std::sort(ratios.rbegin(), ratios.rend());
  for (int i = 0; i < t; ++i) base *= ratios[i];
  return base;
}

/// One draw from the rank-k cone of the standard form: w_1 uniform in the
/// radius ball, w_l uniform in the radius ball of
/// W_l = intersection of kernels of <w_i, .> for i < l. The attached
/// cone weight is prod_{l=1}^{k-1} det(Gram(w_1..w_l))^{-1/2}: the value
/// coordinate t_il of the pair (i, l) rides along J w_i, so each
/// constraint line contributes the reciprocal parallelepiped volume
/// (1/||w_1|| for k = 2).
struct ConeSample {
  std::vector<VectorXd> vectors;
  std::vector<MatrixXd> bases;  // orthonormal basis of each W_l (columns)
  double weight = 1.0;
};

namespace detail {

/// prod_{l=1}^{k-1} det(Gram(w_1..w_l))^{-1/2}
inline double cone_weight(const std::vector<VectorXd>& w, int k) {
  double weight = 1.0;
  const int d = static_cast<int>(w[0].size());
  MatrixXd stacked(d, k - 1);
  for (int l = 1; l <= k - 1; ++l) {
    stacked.col(l - 1) = w[l - 1];
    MatrixXd gram =
        stacked.leftCols(l).transpose() * stacked.leftCols(l);
    double det = gram.determinant();
    if (det <= 0) return 0.0;  // numerically degenerate tuple
    weight /= std::sqrt(det);
  }
  return weight;
}

}  // namespace detail

inline ConeSample sample_cone(int n, double radius, int k, Rng& rng) {
  if (n < 2) throw RangeError("cone: n must be >= 2");
  if (k < 2 || k > 2 * n - 1)
    throw RangeError("cone: need 2 <= k <= 2n-1");
  if (!(radius > 0)) throw Error("cone: radius must be positive");
  const int d = 2 * n;
  const MatrixXd j = standard_j(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    ConeSample s;
    s.bases.push_back(MatrixXd::Identity(d, d));
    VectorXd w1 = radius * ball_point(d, rng);
    if (w1.norm() < 1e-8 * radius) continue;
    s.vectors.push_back(w1);
    bool ok = true;
    for (int l = 2; l <= k && ok; ++l) {
      MatrixXd span(d, l - 1);
      for (int i = 0; i < l - 1; ++i) span.col(i) = j * s.vectors[i];
      try {
        MatrixXd basis = orthogonal_complement(span);
        VectorXd u = ball_point(d - l + 1, rng);
        VectorXd wl = basis * (radius * u);
        if (l < k && wl.norm() < 1e-8 * radius) {
          ok = false;
          break;
        }
        s.bases.push_back(std::move(basis));
        s.vectors.push_back(std::move(wl));
      } catch (const DegenerateError&) {
        ok = false;
      }
    }
    if (!ok) continue;
    s.weight = detail::cone_weight(s.vectors, k);
    if (s.weight == 0.0) continue;
    return s;
  }
  throw DegenerateError("cone: repeated degenerate draws");
}

struct Estimate {
  double value = 0;
  double stderr_ = 0;
};

namespace detail {

static constexpr int kRadialStrata = 16;

/// Cone-sample chain with w_1 drawn from a prescribed radial stratum of
/// the outer ball (equal-volume shells; the weight is radially monotone).
inline double cone_chain_value(int n, int k, double radius,
                               const MatrixXd& ginv, double f_lo,
                               double f_hi, Rng& rng, const MatrixXd& j) {
  const int d = 2 * n;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<VectorXd> w;
    VectorXd w1 = radius * shell_point(d, f_lo, f_hi, rng);
    if (w1.norm() < 1e-10 * radius) continue;
    w.push_back(w1);
    bool ok = true;
    for (int l = 2; l <= k; ++l) {
      MatrixXd span(d, l - 1);
      for (int i = 0; i < l - 1; ++i) span.col(i) = j * w[i];
      try {
        MatrixXd basis = orthogonal_complement(span);
        VectorXd u = ball_point(d - l + 1, rng);
        w.push_back(basis * (radius * u));
      } catch (const DegenerateError&) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double f = cone_weight(w, k);
    if (f == 0.0) continue;
    for (int l = 0; l < k; ++l)
      if ((ginv * w[l]).norm() > 1.0) return 0.0;
    return f;
  }
  throw DegenerateError("cone: repeated degenerate draws");
}

}  // namespace detail

/// Monte Carlo estimate of c_g = J(h_{0,g}, ..., h_{0,g}) over the
/// standard cone, with w_1 stratified into radial shells.
inline Estimate estimate_cg(const SymplecticForm& form, int k,
                            std::int64_t samples, Rng& rng,
                            int threads = 0) {
  if (samples < 10'000) throw Error("estimate_cg: need samples >= 1e4");
  const int n = form.n();
  if (k < 2 || k > 2 * n - 2)
    throw RangeError("estimate_cg: need 2 <= k <= 2n-2");
  const int d = 2 * n;
  const MatrixXd j = standard_j(n);
  const double radius = operator_norm(form.g());
  const MatrixXd ginv = form.g().inverse();

  double scale = 1.0;
  for (int l = 1; l <= k; ++l) {
    int dl = d - l + 1;
    scale *= std::pow(radius, double(dl)) * unit_ball_volume(dl);
  }

  constexpr int S = detail::kRadialStrata;
  const std::int64_t chunk = 4096;
  const std::int64_t nchunks = (samples + chunk - 1) / chunk;
  struct Acc {
    double sum[S] = {0};
    double sumsq[S] = {0};
    std::int64_t cnt[S] = {0};
  };
  std::vector<Acc> accs(nchunks);
  parallel_indexed(nchunks, threads, [&](std::int64_t c) {
    Rng sub = rng.substream(c);
    Acc& a = accs[c];
    std::int64_t lo = c * chunk, hi = std::min(samples, lo + chunk);
    for (std::int64_t s = lo; s < hi; ++s) {
      int stratum = int(s % S);
      double f = detail::cone_chain_value(n, k, radius, ginv,
                                          double(stratum) / S,
                                          double(stratum + 1) / S, sub, j);
      a.sum[stratum] += f;
      a.sumsq[stratum] += f * f;
      a.cnt[stratum] += 1;
    }
  });
  double mean = 0, var_of_mean = 0;
  for (int s = 0; s < S; ++s) {
    double sum = 0, sumsq = 0;
    std::int64_t cnt = 0;
    for (auto& a : accs) {
      sum += a.sum[s];
      sumsq += a.sumsq[s];
      cnt += a.cnt[s];
    }
    double m = sum / double(cnt);
    double v = std::max(0.0, sumsq / double(cnt) - m * m);
    mean += m / S;
    var_of_mean += v / (double(S) * S * double(cnt));
  }
  return Estimate{scale * mean, scale * std::sqrt(var_of_mean)};
}

/// Main term c_g * prod (b_ij - a_ij) * T^{2nk - k(k-1)}.
inline double main_term(double cg, const IntervalGrid& grid, double T, int n,
                        int k) {
  if (!(T > 0)) throw Error("main_term: T must be positive");
  return cg * grid.width_product() *
         std::pow(T, double(2 * n * k - k * (k - 1)));
}

struct RegionVolume {
  double volume = 0;
  double stderr_ = 0;
  std::int64_t accepted = 0;
  std::int64_t samples = 0;
  bool zero_acceptance = false;
};

/// Rejection Monte Carlo of the region volume: k points uniform in the
/// T-ball, accepted when every pairwise value lies in the grid.
inline RegionVolume estimate_region_volume(const SymplecticForm& form,
                                           const IntervalGrid& grid, double T,
                                           std::int64_t samples, Rng& rng,
                                           int threads = 0) {
  if (samples < 100'000)
    throw Error("estimate_region_volume: need samples >= 1e5");
  const int d = form.dim();
  const int k = grid.k();
  const MatrixXd& gram = form.gram();

  const std::int64_t chunk = 8192;
  const std::int64_t nchunks = (samples + chunk - 1) / chunk;
  std::vector<std::int64_t> acc(nchunks, 0);
  parallel_indexed(nchunks, threads, [&](std::int64_t c) {
    Rng sub = rng.substream(c);
    std::int64_t lo = c * chunk, hi = std::min(samples, lo + chunk);
    std::int64_t hits = 0;
    std::vector<VectorXd> v(k);
    std::vector<VectorXd> mv(k);
    for (std::int64_t s = lo; s < hi; ++s) {
      bool ok = true;
      for (int l = 0; l < k && ok; ++l) {
        v[l] = T * ball_point(d, sub);
        mv[l] = gram * v[l];
        for (int i = 0; i < l && ok; ++i)
          ok = grid.contains(i + 1, l + 1, v[i].dot(mv[l]));
      }
      hits += ok;
    }
    acc[c] = hits;
  });
  std::int64_t accepted = 0;
  for (auto h : acc) accepted += h;

  double cell = std::pow(unit_ball_volume(d) * std::pow(T, double(d)),
                         double(k));
  double p = double(accepted) / double(samples);
  RegionVolume out;
  out.accepted = accepted;
  out.samples = samples;
  out.volume = p * cell;
  out.stderr_ = cell * std::sqrt(std::max(0.0, p * (1.0 - p)) /
                                 double(samples));
  out.zero_acceptance = accepted == 0;
  return out;
}

/// Smoothing error budget with unit implicit constants:
/// S_0 T^{Q-(2n-k-1)} + sum_t S_t T^{Q-2t}, Q = 2nk - k(k-1), plus the
/// smoothing gap delta * T^Q when smoothed windows are present (the term
/// the delta = T^{-1} / T^{-1/2} choices balance against). Gradient
/// terms are skipped when no t-subset of smooth windows exists.
inline double error_budget(const std::vector<WindowFunction>& windows,
                           double T, int n, int k) {
  if (static_cast<int>(windows.size()) != k)
    throw DimensionError("error_budget: need k windows");
  double q = double(2 * n * k - k * (k - 1));
  double s0 = *windows_st(windows, 0);
  double budget = s0 * std::pow(T, q - double(2 * n - k - 1));
  for (int t = 1; t <= k - 1; ++t) {
    auto st = windows_st(windows, t);
    if (!st) continue;
    budget += *st * std::pow(T, q - 2.0 * t);
  }
  double delta_max = 0;
  for (const auto& h : windows)
    if (h.kind() == WindowFunction::Kind::SmoothedBall)
      delta_max = std::max(delta_max, h.delta());
  budget += delta_max * std::pow(T, q);
  return budget;
}

struct VolumeReport {
  double T = 0;
  double cg = 0;
  double cg_stderr = 0;
  double main_term = 0;
  std::optional<double> direct;
  std::optional<double> direct_stderr;
  std::optional<double> ratio;  // direct / main_term
};

/// Closed-form c_I for k = 2: V_{2n-1} times the radial integral of the
/// weight 1/||v|| over the unit ball of R^{2n}, i.e.
/// V_{2n-1} * 2n V_{2n} / (2n-1).
inline double cg_identity_k2(int n) {
  int d = 2 * n;
  return unit_ball_volume(d - 1) * double(d) * unit_ball_volume(d) /
         double(d - 1);
}

}  // namespace symp
