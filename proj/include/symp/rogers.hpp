#pragma once

// Rogers-formula machinery: enumeration of the canonical matrix families
// D^k_{r,q}, exact weights c_D, congruence and primitive admissibility,
// truncated first-moment assembly, the explicit variance-bound constant,
// and the exponent window of the counting proof.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "symp/errors.hpp"
#include "symp/exact.hpp"
#include "symp/forms.hpp"
#include "symp/linalg.hpp"
#include "symp/parallel.hpp"
#include "symp/rng.hpp"
#include "symp/volume.hpp"

namespace symp {

/// Weight c_D = index^{-d} kept as the exact pair (index, d).
struct RogersWeight {
  Int index = 1;
  int d = 0;

  double as_double() const {
    return std::pow(static_cast<double>(index), -double(d));
  }
  /// Exact comparison c_D <= q^{-d}  <=>  index >= q.
  bool le_q_pow(std::int64_t q) const { return index >= q; }
};

struct CongruenceVerdict {
  bool admissible = false;             // literal condition, minimality kept
  bool admissible_no_minimality = false;
  bool verdicts_differ = false;
  std::vector<std::int64_t> witness;   // set when admissible
};

struct PrimitiveWitness {
  // r vectors in Z^d (row-major) whose image tuple x (D/q) is integral
  // and primitive columnwise.
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> images;  // k vectors in Z^d, row-major
};

/// One matrix D in D^k_{r,q} (D/q in reduced row-echelon form of rank r,
/// gcd(entries of D, q) = 1) with its exact weight and admissibility
/// flags.
struct RrefTerm {
  int r = 0;
  int k = 0;
  std::int64_t q = 1;
  std::vector<std::int64_t> d;  // r*k, row-major
  RogersWeight weight;          // filled by weight_cd
  std::optional<CongruenceVerdict> congruence;
  std::optional<PrimitiveWitness> primitive_certificate;

  std::int64_t at(int i, int j) const { return d[i * k + j]; }

  IntMat as_int_mat() const {
    IntMat m(r, IntRow(k));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = d[i * k + j];
    return m;
  }
};

/// All canonical (D, q) with |entries| <= entry_bound, deterministic
/// order: pivot-column sets lexicographic, then free entries odometer.
inline std::vector<RrefTerm> enum_rref_terms(int k, int r, std::int64_t q,
                                             std::int64_t entry_bound) {
  if (r < 1 || r > k) throw RangeError("rref: need 1 <= r <= k");
  if (q < 1) throw RangeError("rref: q must be positive");
  if (entry_bound < q) throw RangeError("rref: entry_bound must be >= q");

  std::vector<RrefTerm> out;
  std::vector<int> pivots(r);
  for (int i = 0; i < r; ++i) pivots[i] = i;

  auto emit_for_pivots = [&]() {
    // free positions: (i, j) with j > pivots[i] and j not a pivot column
    std::vector<bool> is_pivot(k, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < r; ++i)
      for (int j = pivots[i] + 1; j < k; ++j)
        if (!is_pivot[j]) free_pos.emplace_back(i, j);

    std::vector<std::int64_t> vals(free_pos.size(), -entry_bound);
    for (;;) {
      RrefTerm term;
      term.r = r;
      term.k = k;
      term.q = q;
      term.d.assign(std::size_t(r) * k, 0);
      for (int i = 0; i < r; ++i) term.d[i * k + pivots[i]] = q;
      for (std::size_t f = 0; f < free_pos.size(); ++f)
        term.d[free_pos[f].first * k + free_pos[f].second] = vals[f];
      std::int64_t content = 0;
      for (auto e : term.d) content = std::gcd(content, e);
      if (std::gcd(content, q) == 1) out.push_back(std::move(term));

      // odometer
      std::size_t pos = 0;
      while (pos < vals.size() && vals[pos] == entry_bound) {
        vals[pos] = -entry_bound;
        ++pos;
      }
      if (pos == vals.size()) break;
      ++vals[pos];
    }
  };

  // iterate pivot-column combinations in lexicographic order
  for (;;) {
    emit_for_pivots();
    int i = r - 1;
    while (i >= 0 && pivots[i] == k - r + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (int j = i + 1; j < r; ++j) pivots[j] = pivots[j - 1] + 1;
  }
  return out;
}

/// Exact weight: index of {x in Z^r : x D = 0 mod q} inside Z^r, via the
/// Smith diagonal of D (index = q^r / prod gcd(s_i, q)), raised to -d.
inline RogersWeight weight_cd(const IntMat& d_mat, std::int64_t q, int d) {
  const std::size_t r = d_mat.size();
  std::vector<Int> diag = smith_diagonal(d_mat);
  if (diag.size() != r) throw RankError("weight: rank(D) < r");
  Int index = 1;
  for (std::size_t i = 0; i < r; ++i) index *= Int(q);
  for (const Int& s : diag) index /= boost::multiprecision::gcd(s, Int(q));
  return RogersWeight{index, d};
}

inline RogersWeight weight_cd(const RrefTerm& term, int d) {
  return weight_cd(term.as_int_mat(), term.q, d);
}

namespace detail {

/// Lattice Lambda_D = R^r D cap Z^k as HNF rows (saturation of the row
/// space), plus the generator of its first-coordinate projections.
struct SaturationData {
  IntMat hnf_rows;         // basis of Lambda_D in row HNF
  Int first_coord_gcd;     // d1 with {v.e1 : v in Lambda_D} = d1 Z
  IntRow particular;       // p with p.e1 = d1 (when d1 > 0)
  IntMat zero_sublattice;  // basis of {v in Lambda_D : v.e1 = 0}
};

inline SaturationData saturate(const IntMat& d_mat) {
  IntMat sat = saturate_rowspace(d_mat);
  HnfResult h = hermite_normal_form(sat);
  SaturationData out;
  out.hnf_rows.assign(h.h.begin(), h.h.begin() + h.rank);
  if (!h.pivot_cols.empty() && h.pivot_cols[0] == 0) {
    out.first_coord_gcd = out.hnf_rows[0][0];
    out.particular = out.hnf_rows[0];
    out.zero_sublattice.assign(out.hnf_rows.begin() + 1, out.hnf_rows.end());
  } else {
    out.first_coord_gcd = 0;
    out.zero_sublattice = out.hnf_rows;
  }
  return out;
}

inline bool verify_congruence_witness(const IntRow& v, std::int64_t n_mod,
                                      const Int& d1) {
  if (boost::multiprecision::abs(v[0]) != d1) return false;
  if (boost::multiprecision::gcd(v[0], Int(n_mod)) != 1) return false;
  for (std::size_t j = 1; j < v.size(); ++j)
    if ((v[j] - v[0]) % n_mod != 0) return false;
  return true;
}

}  // namespace detail

/// Congruence admissibility of D for modulus N: existence of
/// v in Lambda_D with gcd(v_1, N) = 1, all coordinates congruent mod N,
/// and |v_1| minimal positive over the lattice. The verdict without the
/// minimality clause is evaluated too and a difference is flagged (the
/// source condition is compressed; we implement it literally).
inline CongruenceVerdict congruence_admissible(const IntMat& d_mat,
                                               std::int64_t q,
                                               std::int64_t n_mod) {
  (void)q;  // Lambda_D depends only on the row space of D
  if (n_mod < 1) throw RangeError("congruence: N must be positive");
  if (integer_rank(d_mat) != d_mat.size())
    throw RankError("congruence: rank(D) < r");
  const std::size_t k = d_mat.empty() ? 0 : d_mat[0].size();
  detail::SaturationData sat = detail::saturate(d_mat);

  CongruenceVerdict verdict;
  if (n_mod == 1) {
    verdict.admissible = true;
    verdict.admissible_no_minimality = true;
    verdict.witness.assign(k, 0);
    const IntRow& w =
        sat.first_coord_gcd > 0 ? sat.particular : sat.hnf_rows[0];
    for (std::size_t j = 0; j < k; ++j)
      verdict.witness[j] = static_cast<std::int64_t>(w[j]);
    return verdict;
  }

  // Literal verdict: witness first coordinate must equal +-d1.
  if (sat.first_coord_gcd > 0 &&
      boost::multiprecision::gcd(sat.first_coord_gcd, Int(n_mod)) == 1) {
    // Solve p + u = d1 * (1,...,1) mod N with u in the zero sublattice:
    // membership of d1*1 - p in  rowlattice(zero_sublattice) + N Z^k.
    IntMat gens = sat.zero_sublattice;
    for (std::size_t j = 0; j < k; ++j) {
      IntRow e(k, 0);
      e[j] = n_mod;
      gens.push_back(std::move(e));
    }
    IntRow target(k);
    for (std::size_t j = 0; j < k; ++j)
      target[j] = sat.first_coord_gcd - sat.particular[j];
    if (auto y = lattice_membership(gens, target)) {
      IntRow witness = sat.particular;
      for (std::size_t g = 0; g < sat.zero_sublattice.size(); ++g)
        for (std::size_t j = 0; j < k; ++j)
          witness[j] += (*y)[g] * sat.zero_sublattice[g][j];
      if (!detail::verify_congruence_witness(witness, n_mod,
                                             sat.first_coord_gcd))
        throw Error("congruence: internal witness verification failed");
      verdict.admissible = true;
      verdict.witness.assign(k, 0);
      for (std::size_t j = 0; j < k; ++j)
        verdict.witness[j] = static_cast<std::int64_t>(witness[j]);
    }
  }

  // Relaxed verdict: any unit residue class c with c*(1,...,1) reachable.
  {
    IntMat gens = sat.hnf_rows;
    for (std::size_t j = 0; j < k; ++j) {
      IntRow e(k, 0);
      e[j] = n_mod;
      gens.push_back(std::move(e));
    }
    for (std::int64_t c = 1; c <= n_mod && !verdict.admissible_no_minimality;
         ++c) {
      if (std::gcd(c, n_mod) != 1) continue;
      IntRow target(k, c);
      if (lattice_membership(gens, target))
        verdict.admissible_no_minimality = true;
    }
  }
  verdict.verdicts_differ =
      verdict.admissible != verdict.admissible_no_minimality;
  return verdict;
}

inline CongruenceVerdict congruence_admissible(const RrefTerm& term,
                                               std::int64_t n_mod) {
  return congruence_admissible(term.as_int_mat(), term.q, n_mod);
}

/// Bounded search for x in (Z^d)^r with every column of x (D/q) integral
/// and primitive. Returns the first witness in odometer order, or
/// nothing when the height budget is exhausted.
inline std::optional<PrimitiveWitness> primitive_admissible_search(
    const RrefTerm& term, int d, std::int64_t height_bound) {
  if (height_bound < 1)
    throw RangeError("primitive: height_bound must be >= 1");
  const int r = term.r;
  const int k = term.k;
  const std::size_t nvars = std::size_t(r) * d;
  std::vector<std::int64_t> x(nvars, -height_bound);

  auto check = [&]() -> std::optional<PrimitiveWitness> {
    PrimitiveWitness w;
    w.x = x;
    w.images.assign(std::size_t(k) * d, 0);
    for (int j = 0; j < k; ++j) {
      std::int64_t g = 0;
      for (int c = 0; c < d; ++c) {
        std::int64_t y = 0;
        for (int i = 0; i < r; ++i) y += x[std::size_t(i) * d + c] * term.at(i, j);
        if (y % term.q != 0) return std::nullopt;
        std::int64_t img = y / term.q;
        w.images[std::size_t(j) * d + c] = img;
        g = std::gcd(g, img);
      }
      if (g != 1) return std::nullopt;
    }
    return w;
  };

  for (;;) {
    if (auto w = check()) return w;
    std::size_t pos = 0;
    while (pos < nvars && x[pos] == height_bound) {
      x[pos] = -height_bound;
      ++pos;
    }
    if (pos == nvars) return std::nullopt;
    ++x[pos];
  }
}

struct Truncation {
  std::int64_t q_max = 8;
  std::int64_t entry_bound = 8;
};

struct MomentAssembly {
  int k = 1;
  int d = 2;
  double f0 = 0;  // F at the zero tuple
  double main_integral = 0;
  double main_stderr = 0;
  struct Term {
    RrefTerm term;
    double cd = 0;
    double integral = 0;
    double stderr_ = 0;
  };
  std::vector<Term> terms;
  Truncation truncation;
  double tail_bound = 0;
  bool truncation_warning = false;

  double expectation() const {
    double e = f0 + main_integral;
    for (const auto& t : terms) e += t.cd * t.integral;
    return e;
  }
};

namespace detail {

/// Monte Carlo of int F((v_1..v_r) D/q) over (B_T)^r for the region
/// indicator F (pairwise grid + norm balls).
inline std::pair<double, double> term_integral_mc(
    const SymplecticForm& form, const IntervalGrid& grid, double T,
    const RrefTerm& term, std::int64_t samples, Rng rng) {
  const int dd = form.dim();
  const int r = term.r;
  const int k = term.k;
  const MatrixXd& gram = form.gram();
  std::int64_t hits = 0;
  std::vector<VectorXd> v(r), w(k);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < r; ++i) v[i] = T * ball_point(dd, rng);
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      w[j] = VectorXd::Zero(dd);
      for (int i = 0; i < r; ++i)
        if (term.at(i, j) != 0)
          w[j] += (double(term.at(i, j)) / double(term.q)) * v[i];
      ok = w[j].norm() < T;
    }
    for (int i = 0; i < k && ok; ++i)
      for (int j = i + 1; j < k && ok; ++j)
        ok = grid.contains(i + 1, j + 1, w[i].dot(gram * w[j]));
    hits += ok;
  }
  double cell = std::pow(unit_ball_volume(dd) * std::pow(T, dd), r);
  double p = double(hits) / double(samples);
  return {p * cell,
          cell * std::sqrt(std::max(0.0, p * (1 - p)) / double(samples))};
}

inline double binomial(int n, int k) {
  double b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

}  // namespace detail

/// Truncated rank-k first-moment assembly for the counting region
/// F = chi{pairwise values in grid, norms < T}. Terms beyond the
/// truncation are covered by an explicit tail bound using c_D <= q^{-d}
/// and the counting constants of the variance-bound proof.
inline MomentAssembly assemble_first_moment(
    const SymplecticForm& form, const std::optional<IntervalGrid>& grid,
    double T, int k, Truncation trunc, std::int64_t main_samples, Rng& rng,
    std::int64_t term_samples = 50'000, int threads = 0) {
  if (k < 1) throw RangeError("moment: k must be >= 1");
  if (k >= 2 && (!grid || grid->k() != k))
    throw DimensionError("moment: grid required with matching k");
  MomentAssembly out;
  out.k = k;
  out.d = form.dim();
  out.truncation = trunc;

  double ball = unit_ball_volume(out.d) * std::pow(T, out.d);
  if (k == 1) {
    out.f0 = 1.0;
    out.main_integral = ball;  // exact for the plain ball region
    out.main_stderr = 0;
    return out;
  }

  out.f0 = 1.0;
  for (int i = 1; i <= k && out.f0 > 0; ++i)
    for (int j = i + 1; j <= k && out.f0 > 0; ++j)
      if (!grid->contains(i, j, 0.0)) out.f0 = 0.0;

  RegionVolume main =
      estimate_region_volume(form, *grid, T, main_samples, rng, threads);
  out.main_integral = main.volume;
  out.main_stderr = main.stderr_;

  std::vector<RrefTerm> all_terms;
  for (int r = 1; r <= k - 1; ++r)
    for (std::int64_t q = 1; q <= trunc.q_max; ++q) {
      std::int64_t bound = std::max<std::int64_t>(q, trunc.entry_bound);
      auto terms = enum_rref_terms(k, r, q, bound);
      all_terms.insert(all_terms.end(), terms.begin(), terms.end());
    }
  out.terms.resize(all_terms.size());
  parallel_indexed(static_cast<std::int64_t>(all_terms.size()), threads,
                   [&](std::int64_t idx) {
                     MomentAssembly::Term t;
                     t.term = all_terms[idx];
                     t.term.weight = weight_cd(t.term, out.d);
                     t.cd = t.term.weight.as_double();
                     auto [integral, se] = detail::term_integral_mc(
                         form, *grid, T, t.term, term_samples,
                         rng.substream(1000 + idx));
                     t.integral = integral;
                     t.stderr_ = se;
                     out.terms[idx] = std::move(t);
                   });

  // Tail bound: q beyond q_max (entries of any size) plus oversized
  // entries at retained q. Both use term <= min(q^{-d}, (l/q)^{-d} q^{-d}
  // cap) * V_r with the 5/2-power counting bound.
  double tail = 0;
  for (int r = 1; r <= k - 1; ++r) {
    double vr = std::pow(ball, r);
    double nrk = detail::binomial(k, r);
    int e = r * (k - r);
    auto count_pow = [&](double x) { return std::pow(2.5 * x, e); };
    for (std::int64_t q = trunc.q_max + 1; q <= trunc.q_max + 4000; ++q) {
      double add = nrk * count_pow(double(q)) * std::pow(double(q), -out.d) * vr;
      tail += add;
      if (add < 1e-14 * (tail + 1e-300)) break;
    }
    for (std::int64_t l = trunc.entry_bound + 1;
         l <= trunc.entry_bound + 4000; ++l) {
      double add = double(trunc.q_max) * nrk * count_pow(double(l)) *
                   std::pow(double(l), -out.d) * vr;
      tail += add;
      if (add < 1e-14 * (tail + 1e-300)) break;
    }
  }
  out.tail_bound = tail;
  out.truncation_warning = tail > 0.01 * std::abs(out.main_integral);
  return out;
}

/// Explicit constant of the variance bound:
/// C = N * sum_{r=1}^{2k-1} (20 * 5^{r(2k-r)} 2^{-2n} + 3^{r(2k-r)}),
/// N = max binomial(2k, r).
inline double variance_bound_constant(int n, int k) {
  double nmax = 0;
  for (int r = 1; r <= 2 * k - 1; ++r)
    nmax = std::max(nmax, detail::binomial(2 * k, r));
  double c = 0;
  for (int r = 1; r <= 2 * k - 1; ++r) {
    double e = double(r) * (2 * k - r);
    c += 20.0 * std::pow(5.0, e) * std::pow(2.0, -2.0 * n) +
         std::pow(3.0, e);
  }
  return nmax * c;
}

/// C * max{ vol(E_{r1}) vol(E_{r2}) : 1 <= r1+r2 <= 2k-1, 0 <= r1,r2 <= k }
/// with vol(E_0) = 1. `volumes[r-1]` holds vol(E_r), r = 1..k.
inline double variance_bound(const std::vector<double>& volumes, int n,
                             int k) {
  if (static_cast<int>(volumes.size()) != k)
    throw MissingVolumeError("variance_bound: need volumes for r = 1..k");
  auto vol = [&](int r) { return r == 0 ? 1.0 : volumes[r - 1]; };
  double vmax = 0;
  for (int r1 = 0; r1 <= k; ++r1)
    for (int r2 = 0; r2 <= k; ++r2) {
      int s = r1 + r2;
      if (s < 1 || s > 2 * k - 1) continue;
      vmax = std::max(vmax, vol(r1) * vol(r2));
    }
  return variance_bound_constant(n, k) * vmax;
}

/// Exponent-window data of the counting proof.
struct ExponentWindow {
  int n = 0;
  int k = 0;
  double delta_min = 0;
  double delta = 0;  // the delta the alpha range was evaluated at
  std::pair<double, double> alpha_range;
  double variance_exponent = 0;  // 2n(2k-1) - 2k^2
};

/// delta_min and the alpha interval from the two displayed inequalities
/// of the proof; HypothesisError outside 2n >= k^2 + 3.
inline ExponentWindow exponent_window(int n, int k,
                                      std::optional<double> delta_opt =
                                          std::nullopt) {
  if (k < 1 || n < 1) throw RangeError("window: need n, k >= 1");
  if (2 * n < k * k + 3)
    throw HypothesisError("window: requires 2n >= k^2 + 3");
  const double q = double(2 * n * k - k * (k - 1));
  const double ve = double(2 * n * (2 * k - 1) - 2 * k * k);
  const double p = double((n + 1) * (2 * n - 1));
  ExponentWindow w;
  w.n = n;
  w.k = k;
  w.variance_exponent = ve;
  w.delta_min = (p * q + ve + q) / (p * q + 3.0 * q);
  w.delta = delta_opt ? *delta_opt : 0.5 * (w.delta_min + 1.0);
  if (!(w.delta > w.delta_min && w.delta < 1.0))
    throw RangeError("window: delta must lie in (delta_min, 1)");
  double lo = std::max(1.0, (p + 1.0) / (2.0 * w.delta * q - ve));
  double hi = 1.0 / ((1.0 - w.delta) * q);
  w.alpha_range = {lo, hi};
  return w;
}

}  // namespace symp
