#pragma once

// Canned experiments mirroring the headline results at desk scale. Both
// the CLI `recipe` subcommand and the acceptance suite run these; all
// scales are parameters with defaults matching the acceptance setup.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "symp/density.hpp"
#include "symp/enumeration.hpp"
#include "symp/forms.hpp"
#include "symp/randlat.hpp"
#include "symp/rng.hpp"
#include "symp/volume.hpp"

namespace symp::recipes {

/// Random counting form g = exp(S), S small traceless, det corrected.
inline SymplecticForm random_form(int n, double scale, Rng& rng) {
  MatrixXd s = random_traceless(2 * n, scale, rng);
  MatrixXd g = matrix_exp(s);
  double det = g.determinant();
  g /= std::pow(std::abs(det), 1.0 / (2 * n));
  return SymplecticForm::from_g(g, n);
}

// ---------------------------------------------------------------------
// Counting growth (rank-2 pairs, dimension 4)

struct CountingGrowthConfig {
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::vector<double> Ts = {6.0, 8.0, 10.0, 12.0};
  double interval_lo = 0.5;
  double interval_hi = 1.5;
  double generator_scale = 0.2;
  std::int64_t cg_samples = 1'000'000;
  int threads = 0;
};

struct CountingGrowthSeedResult {
  std::uint64_t seed = 0;
  double cg = 0;
  double cg_stderr = 0;
  double fitted_exponent = 0;
  std::vector<CountReport> reports;
  bool ratio_improves = false;  // |ratio(T_max)-1| < |ratio(T_min)-1|
};

inline std::vector<CountingGrowthSeedResult> run_counting_growth(
    const CountingGrowthConfig& cfg) {
  std::vector<CountingGrowthSeedResult> out;
  for (std::uint64_t seed : cfg.seeds) {
    Rng rng(seed);
    auto form = random_form(2, cfg.generator_scale, rng);
    auto grid = IntervalGrid::uniform(2, cfg.interval_lo, cfg.interval_hi);
    CountingGrowthSeedResult res;
    res.seed = seed;
    auto cg = estimate_cg(form, 2, cfg.cg_samples, rng, cfg.threads);
    res.cg = cg.value;
    res.cg_stderr = cg.stderr_;
    CountQuery query(form, grid, cfg.Ts.front());
    query.threads = cfg.threads;
    auto series = count_series(query, cfg.Ts, cg.value);
    res.fitted_exponent = series.fitted_exponent;
    res.reports = series.reports;
    double first_gap = std::abs(*res.reports.front().ratio - 1.0);
    double last_gap = std::abs(*res.reports.back().ratio - 1.0);
    res.ratio_improves = last_gap < first_gap;
    out.push_back(std::move(res));
  }
  return out;
}

// ---------------------------------------------------------------------
// Volume formula (direct Monte Carlo against the main term, n = 3)

struct VolumeConvergenceConfig {
  int n = 3;
  std::vector<double> Ts = {5.0, 10.0, 20.0};
  double interval_lo = -0.5;
  double interval_hi = 0.5;
  std::int64_t samples = 10'000'000;
  std::uint64_t seed = 17;
  int threads = 0;
};

struct VolumePoint {
  double T = 0;
  double direct = 0;
  double direct_stderr = 0;
  double main = 0;
  double ratio = 0;
};

inline std::vector<VolumePoint> run_volume_convergence(
    const VolumeConvergenceConfig& cfg) {
  auto form = SymplecticForm::standard(cfg.n);
  auto grid = IntervalGrid::uniform(2, cfg.interval_lo, cfg.interval_hi);
  double cg = cg_identity_k2(cfg.n);
  Rng rng(cfg.seed);
  std::vector<VolumePoint> out;
  for (double T : cfg.Ts) {
    auto rv = estimate_region_volume(form, grid, T, cfg.samples, rng,
                                     cfg.threads);
    VolumePoint p;
    p.T = T;
    p.direct = rv.volume;
    p.direct_stderr = rv.stderr_;
    p.main = main_term(cg, grid, T, cfg.n, 2);
    p.ratio = rv.volume / p.main;
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------
// Identity-form coefficient (closed-form check inputs)

struct CgCheckResult {
  int n = 0;
  double estimate = 0;
  double stderr_ = 0;
};

inline std::vector<CgCheckResult> run_cg_checks(std::vector<int> ns,
                                                std::int64_t samples,
                                                std::uint64_t seed,
                                                int threads = 0) {
  std::vector<CgCheckResult> out;
  for (int n : ns) {
    Rng rng(seed + n);
    auto est = estimate_cg(SymplecticForm::standard(n), 2, samples, rng,
                           threads);
    out.push_back({n, est.value, est.stderr_});
  }
  return out;
}

// ---------------------------------------------------------------------
// Primitive and congruence factors at T = 12

struct ClassFactorConfig {
  double T = 12.0;
  double interval_lo = 0.5;
  double interval_hi = 1.5;
  std::uint64_t seed = 5;
  double generator_scale = 0.2;
  std::int64_t modulus = 2;                       // congruence only
  std::vector<std::int64_t> v0 = {1, 1, 1, 1};    // congruence only
  int threads = 0;
};

struct ClassFactorResult {
  double ratio = 0;       // class count / all count
  double reference = 0;   // 1/zeta(2n)^k or N^{-2nk}
  std::int64_t count_class = 0;
  std::int64_t count_all = 0;
};

inline ClassFactorResult run_primitive_factor(const ClassFactorConfig& cfg) {
  Rng rng(cfg.seed);
  auto form = random_form(2, cfg.generator_scale, rng);
  auto grid = IntervalGrid::uniform(2, cfg.interval_lo, cfg.interval_hi);
  auto pr = primitive_ratio(form, grid, cfg.T, cfg.threads);
  return {pr.ratio, pr.reference, pr.count_primitive, pr.count_all};
}

inline ClassFactorResult run_congruence_factor(const ClassFactorConfig& cfg) {
  Rng rng(cfg.seed);
  auto form = random_form(2, cfg.generator_scale, rng);
  auto grid = IntervalGrid::uniform(2, cfg.interval_lo, cfg.interval_hi);
  CountQuery all(form, grid, cfg.T, VectorClass::all());
  all.threads = cfg.threads;
  CountQuery cong(form, grid, cfg.T,
                  VectorClass::congruence(cfg.v0, cfg.modulus));
  cong.threads = cfg.threads;
  ClassFactorResult out;
  out.count_all = count_tuples(all).count;
  out.count_class = count_tuples(cong).count;
  if (out.count_all == 0)
    throw DivisionError("congruence factor: count(All) is zero");
  out.ratio = double(out.count_class) / double(out.count_all);
  out.reference = std::pow(double(cfg.modulus), -4.0 * grid.k());
  return out;
}

// ---------------------------------------------------------------------
// Siegel mean values on the modular surface (exact sampler)

struct Siegel2dConfig {
  std::vector<double> areas = {1.0, 4.0};
  double inner_radius = 0.8;
  std::int64_t trials = 10'000;
  std::uint64_t seed = 23;
  int threads = 0;
};

struct Siegel2dResult {
  double area = 0;
  double mean_all = 0;
  double stderr_all = 0;
  double mean_primitive = 0;
  double stderr_primitive = 0;
};

inline std::vector<Siegel2dResult> run_siegel2d(const Siegel2dConfig& cfg) {
  SamplerSpec spec(2, SamplerSpec::Mode::Exact2D, cfg.seed);
  std::vector<Siegel2dResult> out;
  Rng rng(cfg.seed);
  for (double area : cfg.areas) {
    auto region = RegionSpec::annulus2d(cfg.inner_radius, area);
    auto all = empirical_moment(spec, region, 1, VectorClass::all(),
                                cfg.trials, rng, cfg.threads);
    auto prim = empirical_moment(spec, region, 1, VectorClass::primitive(),
                                 cfg.trials, rng, cfg.threads);
    out.push_back({area, all.mean, all.stderr_, prim.mean, prim.stderr_});
  }
  return out;
}

}  // namespace symp::recipes
