#pragma once

// Random unimodular lattices (exact Haar in dimension 2, Siegel-set
// approximation above), rank-k Siegel transforms over them, and empirical
// moments.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "symp/enumeration.hpp"
#include "symp/errors.hpp"
#include "symp/forms.hpp"
#include "symp/lattice.hpp"
#include "symp/linalg.hpp"
#include "symp/parallel.hpp"
#include "symp/rng.hpp"

namespace symp {

struct UnimodularLattice {
  int dim = 2;
  MatrixXd basis;  // columns, |det - 1| <= 1e-9
  bool reduced = false;
};

struct SamplerSpec {
  enum class Mode { Exact2D, SiegelApprox };
  int dim = 2;
  Mode mode = Mode::Exact2D;
  std::uint64_t seed = 0;

  SamplerSpec(int d, Mode m, std::uint64_t s = 0)
      : dim(d), mode(m), seed(s) {
    if (d < 2) throw DimensionError("sampler: dim must be >= 2");
    if (m == Mode::Exact2D && d != 2)
      throw DimensionError("sampler: Exact2D requires dim 2");
  }
};

namespace detail {

/// Haar-uniform element of SO(d): QR of a Gaussian matrix with the sign
/// convention fixed, then one column negated if det = -1.
inline MatrixXd haar_rotation(int d, Rng& rng) {
  MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(a);
  MatrixXd q = qr.householderQ();
  MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace detail

/// Exact2D: tau = x + iy from the modular fundamental domain with density
/// 1/y^2 plus a uniform rotation. SiegelApprox: Iwasawa coordinates over
/// a Siegel set with the Haar density in those coordinates, LLL-reduced;
/// approximately Haar only (finite Siegel-set multiplicity).
inline UnimodularLattice sample_lattice(const SamplerSpec& spec, Rng& rng) {
  if (spec.mode == SamplerSpec::Mode::Exact2D) {
    const double y0 = std::sqrt(3.0) / 2.0;
    double x, y;
    do {
      double u;
      do {
        u = rng.uniform();
      } while (u == 0.0);
      y = y0 / u;  // density ~ 1/y^2 on [y0, inf)
      x = rng.uniform(-0.5, 0.5);
    } while (x * x + y * y < 1.0);
    double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double c = std::cos(theta), s = std::sin(theta);
    MatrixXd rot(2, 2), b(2, 2);
    rot << c, -s, s, c;
    double sy = std::sqrt(y);
    b << 1.0 / sy, x / sy, 0.0, sy;
    UnimodularLattice lat;
    lat.dim = 2;
    lat.basis = rot * b;
    lat.reduced = true;
    return lat;
  }

  const int d = spec.dim;
  const double cap = 2.0 / std::sqrt(3.0);
  // ratios t_m = a_m / a_{m+1} on (0, cap] with density ~ t^{m(d-m)-1}
  std::vector<double> t(d - 1);
  for (int m = 1; m <= d - 1; ++m) {
    double u;
    do {
      u = rng.uniform();
    } while (u == 0.0);
    t[m - 1] = cap * std::pow(u, 1.0 / double(m * (d - m)));
  }
  std::vector<double> a(d, 1.0);
  for (int i = d - 2; i >= 0; --i) a[i] = a[i + 1] * t[i];
  double logsum = 0;
  for (double ai : a) logsum += std::log(ai);
  double norm = std::exp(logsum / d);
  for (double& ai : a) ai /= norm;  // det 1

  MatrixXd nmat = MatrixXd::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) nmat(i, j) = rng.uniform(-0.5, 0.5);
  MatrixXd adiag = MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) adiag(i, i) = a[i];

  MatrixXd basis = detail::haar_rotation(d, rng) * adiag * nmat;
  LllResult red = lll_reduce(basis);
  MatrixXd rb = red.basis;
  double det = rb.determinant();
  if (det < 0) {
    rb.col(0) = -rb.col(0);
    det = -det;
  }
  rb /= std::pow(det, 1.0 / d);  // remove floating drift
  UnimodularLattice lat;
  lat.dim = d;
  lat.basis = std::move(rb);
  lat.reduced = true;
  return lat;
}

/// Bounded region for the rank-k transform: a radial shell
/// lo <= ||v|| < hi per slot, plus an optional pairwise symplectic grid.
struct RegionSpec {
  std::vector<std::pair<double, double>> shells;  // size k
  std::optional<SymplecticForm> form;
  std::optional<IntervalGrid> grid;

  static RegionSpec shell_product(int k, double lo, double hi) {
    RegionSpec r;
    r.shells.assign(k, {lo, hi});
    return r;
  }

  /// Annulus of prescribed area in R^2 starting at inner radius r_in.
  static RegionSpec annulus2d(double r_in, double area) {
    double r_out = std::sqrt(r_in * r_in + area / std::numbers::pi);
    return shell_product(1, r_in, r_out);
  }

  int k() const { return static_cast<int>(shells.size()); }

  double bounding_radius() const {
    double r = 0;
    for (auto& [lo, hi] : shells) r = std::max(r, hi);
    return r;
  }

  bool slot_accepts(int slot, double norm) const {
    auto& [lo, hi] = shells[slot];
    return lo <= norm && norm < hi;
  }
};

/// Rank-k Siegel transform of the region indicator at a lattice: the
/// number of k-tuples of nonzero lattice points (class-filtered on
/// integer coordinates) satisfying the region predicate.
inline std::int64_t siegel_transform(const UnimodularLattice& lat,
                                     const RegionSpec& region, int k,
                                     const VectorClass& cls = VectorClass::all(),
                                     std::int64_t max_points = 5'000'000) {
  if (region.k() != k) throw DimensionError("siegel: region rank != k");
  if (region.form && region.form->dim() != lat.dim)
    throw DimensionError("siegel: form dim != lattice dim");
  const double radius = region.bounding_radius();
  if (radius <= 0) return 0;

  double predicted =
      unit_ball_volume(lat.dim) * std::pow(radius, lat.dim) + 16.0;
  if (predicted > double(max_points))
    throw CapacityError("siegel: predicted point count exceeds budget");

  LllResult red = lll_reduce(lat.basis);
  // enumeration coefficients x map to integer coordinates u*x in the
  // stored basis; classes act on those coordinates.
  std::vector<VectorXd> pts;
  std::vector<double> norms;
  std::vector<std::vector<std::int64_t>> coords;
  enumerate_lattice_ball(
      red.basis, radius, false, [&](const std::vector<std::int64_t>& x) {
        std::vector<std::int64_t> c(lat.dim, 0);
        for (int i = 0; i < lat.dim; ++i)
          for (int j = 0; j < lat.dim; ++j)
            c[i] += std::int64_t(red.u(i, j)) * x[j];
        if (!cls.accepts(c.data(), lat.dim)) return;
        VectorXd p = VectorXd::Zero(lat.dim);
        for (int j = 0; j < lat.dim; ++j)
          p += double(x[j]) * red.basis.col(j);
        pts.push_back(std::move(p));
        norms.push_back(pts.back().norm());
        coords.push_back(std::move(c));
      });

  const std::int64_t npts = static_cast<std::int64_t>(pts.size());
  // eligible points per slot
  std::vector<std::vector<std::int64_t>> slot(k);
  for (int l = 0; l < k; ++l)
    for (std::int64_t i = 0; i < npts; ++i)
      if (region.slot_accepts(l, norms[i])) slot[l].push_back(i);

  if (!region.grid) {
    std::int64_t prod = 1;
    for (int l = 0; l < k; ++l)
      prod *= static_cast<std::int64_t>(slot[l].size());
    return prod;
  }

  const IntervalGrid& grid = *region.grid;
  const MatrixXd& gram = region.form->gram();

  // fused kernel for pairs: w = M^T v_i once per i, contiguous scan of
  // the second slot
  if (k == 2) {
    auto [a, b] = grid.bounds(1, 2);
    const int d = lat.dim;
    std::vector<std::vector<double>> cols(d);
    for (int c = 0; c < d; ++c) {
      cols[c].resize(slot[1].size());
      for (std::size_t j = 0; j < slot[1].size(); ++j)
        cols[c][j] = pts[slot[1][j]](c);
    }
    MatrixXd mt = gram.transpose();
    std::int64_t count = 0;
    VectorXd w(d);
    for (std::int64_t i : slot[0]) {
      w.noalias() = mt * pts[i];
      const std::size_t nscan = slot[1].size();
      if (d == 4) {
        const double w0 = w(0), w1 = w(1), w2 = w(2), w3 = w(3);
        const double *x0 = cols[0].data(), *x1 = cols[1].data(),
                     *x2 = cols[2].data(), *x3 = cols[3].data();
        for (std::size_t j = 0; j < nscan; ++j) {
          double s = w0 * x0[j] + w1 * x1[j] + w2 * x2[j] + w3 * x3[j];
          count += (a < s) & (s < b);
        }
      } else {
        for (std::size_t j = 0; j < nscan; ++j) {
          double s = 0;
          for (int c = 0; c < d; ++c) s += w(c) * cols[c][j];
          count += (a < s) & (s < b);
        }
      }
    }
    return count;
  }

  std::vector<VectorXd> gram_pts(pts.size());
  std::vector<std::int64_t> choice(k, -1);
  std::int64_t count = 0;
  auto rec = [&](auto&& self, int level) -> void {
    for (std::int64_t idx : slot[level]) {
      bool ok = true;
      for (int t = level - 1; t >= 0 && ok; --t) {
        double val = gram_pts[choice[t]].dot(pts[idx]);
        ok = grid.contains(t + 1, level + 1, val);
      }
      if (!ok) continue;
      if (level + 1 == k) {
        ++count;
      } else {
        choice[level] = idx;
        if (gram_pts[idx].size() == 0)
          gram_pts[idx] = gram.transpose() * pts[idx];
        self(self, level + 1);
      }
    }
  };
  rec(rec, 0);
  return count;
}

struct MomentEstimate {
  double mean = 0;
  double variance = 0;  // sample variance
  double stderr_ = 0;
  std::vector<std::int64_t> values;  // per-trial transform values
};

/// Sample mean/variance of the Siegel transform over `trials` sampled
/// lattices. Per-trial substreams make the result independent of the
/// worker count.
inline MomentEstimate empirical_moment(const SamplerSpec& spec,
                                       const RegionSpec& region, int k,
                                       const VectorClass& cls,
                                       std::int64_t trials, Rng& rng,
                                       int threads = 0) {
  if (trials < 100) throw Error("empirical_moment: need trials >= 100");
  MomentEstimate out;
  out.values.assign(trials, 0);
  parallel_indexed(trials, threads, [&](std::int64_t t) {
    Rng sub = rng.substream(t);
    UnimodularLattice lat = sample_lattice(spec, sub);
    out.values[t] = siegel_transform(lat, region, k, cls);
  });
  double sum = 0;
  for (auto v : out.values) sum += double(v);
  out.mean = sum / double(trials);
  double ss = 0;
  for (auto v : out.values) {
    double d = double(v) - out.mean;
    ss += d * d;
  }
  out.variance = trials > 1 ? ss / double(trials - 1) : 0.0;
  out.stderr_ = std::sqrt(out.variance / double(trials));
  return out;
}

}  // namespace symp
