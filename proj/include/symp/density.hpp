#pragma once

// Constructive side of the density theorem: real tuples hitting exact
// pairwise targets via the kernel-affine construction, and a budgeted
// depth-first search for integer tuples approximating targets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "symp/errors.hpp"
#include "symp/forms.hpp"
#include "symp/linalg.hpp"
#include "symp/rng.hpp"

namespace symp {

/// Pairwise targets xi_ij (1 <= i < j <= k) with tolerance eps.
struct TargetMatrix {
  int k = 2;
  std::vector<double> xi;  // lex order by (i, j)
  double eps = 1e-9;

  TargetMatrix(int k_, std::vector<double> targets, double eps_)
      : k(k_), xi(std::move(targets)), eps(eps_) {
    if (k < 2) throw DimensionError("targets: k must be >= 2");
    if (xi.size() != std::size_t(k) * (k - 1) / 2)
      throw DimensionError("targets: need k(k-1)/2 values");
    for (double t : xi)
      if (!std::isfinite(t)) throw Error("targets: values must be finite");
    if (!(eps > 0)) throw Error("targets: eps must be positive");
  }

  static TargetMatrix uniform(int k, double value, double eps) {
    return TargetMatrix(k, std::vector<double>(std::size_t(k) * (k - 1) / 2,
                                               value),
                        eps);
  }

  int pair_index(int i, int j) const {
    if (!(1 <= i && i < j && j <= k))
      throw DimensionError("targets: bad pair");
    return (i - 1) * k - (i * (i - 1)) / 2 + (j - i - 1);
  }
  double at(int i, int j) const { return xi[pair_index(i, j)]; }
};

/// Real tuple v_1..v_k with <v_i, v_j>^g = xi_ij, built one vector at a
/// time: a least-norm particular solution of the stacked linear map plus
/// a kernel perturbation keeping the tuple independent while l <= n+1.
inline std::vector<VectorXd> real_solution(const SymplecticForm& form,
                                           const TargetMatrix& targets,
                                           Rng rng = Rng(20240901)) {
  const int n = form.n();
  const int k = targets.k;
  const int d = form.dim();
  if (n < 2) throw RangeError("real_solution: n must be >= 2");
  if (n == 2 ? k > 3 : k > n + 2)
    throw RangeError("real_solution: k outside the guaranteed range");
  const MatrixXd& m = form.gram();

  double xi_scale = 1.0;
  for (double t : targets.xi) xi_scale = std::max(xi_scale, std::abs(t));

  std::vector<VectorXd> v;
  v.push_back(VectorXd::Unit(d, 0));

  for (int l = 1; l < k; ++l) {
    MatrixXd lmap(l, d);  // rows v_i^T M
    VectorXd rhs(l);
    for (int i = 0; i < l; ++i) {
      lmap.row(i) = v[i].transpose() * m;
      rhs(i) = targets.at(i + 1, l + 1);
    }
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(lmap);
    if (cod.rank() < l)
      throw SolveError("real_solution: stacked map lost rank");
    VectorXd particular = cod.solve(rhs);

    // kernel basis of the stacked map
    MatrixXd kernel = orthogonal_complement(lmap.transpose());
    const bool need_independent = (l + 1) <= n + 1;
    bool placed = false;
    for (int attempt = 0; attempt < 10 && !placed; ++attempt) {
      VectorXd cand = particular;
      if (kernel.cols() > 0) {
        VectorXd coeff(kernel.cols());
        for (int c = 0; c < kernel.cols(); ++c) coeff(c) = rng.normal();
        double scale = std::max(1.0, particular.norm());
        if (attempt == 0) coeff *= 0.5;  // mild first try
        cand += kernel * (scale * coeff);
      }
      if (need_independent) {
        MatrixXd stacked(d, l + 1);
        for (int i = 0; i < l; ++i) stacked.col(i) = v[i];
        stacked.col(l) = cand;
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> rk(stacked);
        if (rk.rank() < l + 1) continue;
      }
      v.push_back(cand);
      placed = true;
    }
    if (!placed)
      throw SolveError("real_solution: could not keep tuple independent");
  }

  // verify residuals
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      double got = v[i - 1].dot(m * v[j - 1]);
      if (std::abs(got - targets.at(i, j)) > 1e-9 * std::max(1.0, xi_scale))
        throw SolveError("real_solution: residual check failed");
    }
  return v;
}

struct SearchResult {
  bool found = false;
  std::vector<std::vector<std::int64_t>> tuple;  // k vectors in Z^{2n}
  std::vector<double> residuals;                 // |value - target|, lex
  double max_residual = 0;
  std::int64_t nodes = 0;  // nodes expanded
};

namespace detail {

struct SearchState {
  const MatrixXd* gram = nullptr;
  const TargetMatrix* targets = nullptr;
  int dim = 0;
  int k = 0;
  std::int64_t budget = 0;
  std::int64_t nodes = 0;
  bool out_of_budget = false;

  std::vector<std::vector<std::int64_t>> best_tuple;
  double best_resid = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::int64_t>> hit;  // first exact hit
  bool found = false;

  bool tick() {
    ++nodes;
    if (nodes >= budget) {
      out_of_budget = true;
      return false;
    }
    return true;
  }

  void offer(const std::vector<std::vector<std::int64_t>>& tuple) {
    double worst = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        double val = 0;
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            val += double(tuple[i][a]) * (*gram)(a, b) * double(tuple[j][b]);
        worst = std::max(worst, std::abs(val - targets->at(i + 1, j + 1)));
      }
    if (worst < best_resid) {
      best_resid = worst;
      best_tuple = tuple;
    }
    if (worst < targets->eps && !found) {
      found = true;
      hit = tuple;
    }
  }
};

}  // namespace detail

/// Depth-first integer search: vectors placed one at a time over
/// expanding boxes (later vectors expand faster), coordinates ordered by
/// influence, branches pruned when a settled pairwise constraint can no
/// longer reach its target. Seeded by rounding real_solution output.
/// Exhausted(best tuple) is a value, not an error.
inline SearchResult integer_approx_search(const SymplecticForm& form,
                                          const TargetMatrix& targets,
                                          std::int64_t budget) {
  if (budget < 1) throw Error("search: budget must be >= 1");
  const int dim = form.dim();
  const int k = targets.k;
  const MatrixXd& m = form.gram();

  detail::SearchState st;
  st.gram = &m;
  st.targets = &targets;
  st.dim = dim;
  st.k = k;
  st.budget = budget;

  // Seed: rounded real solutions with a few deterministic jitters.
  try {
    std::vector<VectorXd> u = real_solution(form, targets);
    const double jit[4] = {0.0, 0.25, -0.25, 0.5};
    for (double j : jit) {
      std::vector<std::vector<std::int64_t>> cand(
          k, std::vector<std::int64_t>(dim, 0));
      for (int l = 0; l < k; ++l)
        for (int c = 0; c < dim; ++c)
          cand[l][c] = std::llround(u[l](c) + j);
      st.offer(cand);
      st.tick();
      if (st.found) break;
    }
  } catch (const Error&) {
    // out of the constructive range (or solver hiccup): DFS only
  }

  std::vector<std::vector<std::int64_t>> tuple(
      k, std::vector<std::int64_t>(dim, 0));
  std::vector<VectorXd> w;  // M^T v_i for settled vectors

  // Per-stage box radii: the first vector stays small, later vectors
  // expand geometrically.
  auto stage_radius = [&](int vec, int stage) -> std::int64_t {
    if (vec == 0) return std::min<std::int64_t>(1 + stage, 3);
    if (vec + 1 < k) return std::min<std::int64_t>(4LL << stage, 32);
    return 4LL << stage;
  };
  const int max_stage = 7;  // last-vector radius up to 512

  // log2 estimate of the subtree under a given first vector: each later
  // vector scans its active coordinates except the pinned last one.
  auto subtree_bits = [&](int active_first, int stage) -> double {
    double bits = 0;
    for (int l = 1; l < k; ++l) {
      int act = (l == k - 1) ? active_first : dim;
      bits += double(std::max(0, act - 1)) *
              std::log2(double(2 * stage_radius(l, stage) + 1));
    }
    return bits;
  };

  std::vector<std::int64_t> radius(k), prev_radius(k);

  // place vector `level` coordinate by coordinate, then recurse;
  // declared below, invoked per (first vector, stage) pair.
  // (v1, stage) pairs are swept in doubling effort classes so that cheap
  // sparse-weight subtrees at large radii run before expensive dense
  // ones exhaust the budget.
  for (double effort = 8.0;
       effort <= 40.0 && !st.found && !st.out_of_budget; effort += 4.0) {
    for (int stage = 0;
         stage <= max_stage && !st.found && !st.out_of_budget; ++stage) {
    for (int l = 0; l < k; ++l) {
      radius[l] = stage_radius(l, stage);
      prev_radius[l] = stage > 0 ? stage_radius(l, stage - 1) : 0;
    }

    // place vector `level` coordinate by coordinate, then recurse
    auto place_vector = [&](auto&& place, int level, bool any_new) -> void {
      if (st.found || st.out_of_budget) return;
      const std::int64_t r = radius[level];
      const std::int64_t pr = prev_radius[level];

      // influence of each coordinate on the settled constraints
      std::vector<double> influence(dim, 0.0);
      for (int i = 0; i < level; ++i)
        for (int c = 0; c < dim; ++c)
          influence[c] += std::abs(w[i](c));
      std::vector<int> order(dim);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return influence[a] > influence[b];
      });
      // zero-influence coordinates of the last vector cannot change any
      // value; pin them to zero
      int active = dim;
      if (level == k - 1) {
        while (active > 0 && influence[order[active - 1]] == 0.0) --active;
      }
      for (int c = active; c < dim; ++c) tuple[level][order[c]] = 0;

      // suffix slack per settled constraint for the chosen order
      std::vector<std::vector<double>> slack(
          level, std::vector<double>(active + 1, 0.0));
      for (int i = 0; i < level; ++i)
        for (int pos = active - 1; pos >= 0; --pos)
          slack[i][pos] =
              slack[i][pos + 1] + std::abs(w[i](order[pos])) * double(r);

      std::vector<double> partial(level, 0.0);
      auto assign = [&](auto&& self, int pos, bool vec_new) -> void {
        if (st.found || st.out_of_budget) return;
        if (pos == active) {
          bool tuple_new = any_new || vec_new;
          if (level + 1 == k) {
            if (!tuple_new) return;  // revisit of an earlier stage
            // exact residual check on the settled constraints
            for (int i = 0; i < level; ++i)
              if (std::abs(partial[i] - targets.at(i + 1, level + 1)) >=
                  targets.eps)
                return;
            st.offer(tuple);
          } else {
            VectorXd vl(dim);
            for (int c = 0; c < dim; ++c) vl(c) = double(tuple[level][c]);
            w.push_back(m.transpose() * vl);
            place(place, level + 1, tuple_new);
            w.pop_back();
          }
          return;
        }
        const int c = order[pos];
        std::int64_t val_lo = -r, val_hi = r;
        if (pos == active - 1 && level > 0) {
          // last free coordinate: the feasible set is an interval per
          // constraint; intersect instead of scanning the whole box
          double lo = -double(r), hi = double(r);
          for (int i = 0; i < level; ++i) {
            double wc = w[i](c);
            double a = targets.at(i + 1, level + 1) - targets.eps -
                       partial[i];
            double b = targets.at(i + 1, level + 1) + targets.eps -
                       partial[i];
            if (wc == 0.0) {
              if (!(a < 0.0 && 0.0 < b)) {
                lo = 1.0;
                hi = 0.0;
              }
              continue;
            }
            double l = a / wc, h = b / wc;
            if (l > h) std::swap(l, h);
            lo = std::max(lo, l);
            hi = std::min(hi, h);
          }
          if (lo > hi) return;
          val_lo = std::max<std::int64_t>(
              val_lo, std::int64_t(std::ceil(lo - 1e-9)));
          val_hi = std::min<std::int64_t>(
              val_hi, std::int64_t(std::floor(hi + 1e-9)));
        }
        for (std::int64_t val = val_lo; val <= val_hi; ++val) {
          if (!st.tick()) return;
          tuple[level][c] = val;
          bool feasible = true;
          for (int i = 0; i < level && feasible; ++i) {
            double p = partial[i] + w[i](c) * double(val);
            double miss =
                std::abs(p - targets.at(i + 1, level + 1));
            feasible = miss < targets.eps + slack[i][pos + 1];
          }
          if (!feasible) continue;
          for (int i = 0; i < level; ++i)
            partial[i] += w[i](c) * double(val);
          self(self, pos + 1,
               vec_new || std::llabs(val) > pr);
          for (int i = 0; i < level; ++i)
            partial[i] -= w[i](c) * double(val);
          if (st.found || st.out_of_budget) return;
        }
      };
      assign(assign, 0, false);
    };

    // first-vector candidates in this stage's box, sparse weights first
    struct FirstVec {
      std::vector<std::int64_t> coords;
      VectorXd wvec;
      int active = 0;
      std::int64_t linf = 0;
    };
    std::vector<FirstVec> firsts;
    {
      const std::int64_t r1 = radius[0];
      std::vector<std::int64_t> c(dim, -r1);
      for (;;) {
        FirstVec fv;
        fv.coords = c;
        VectorXd v(dim);
        for (int d2 = 0; d2 < dim; ++d2) {
          v(d2) = double(c[d2]);
          fv.linf = std::max<std::int64_t>(fv.linf, std::llabs(c[d2]));
        }
        fv.wvec = m.transpose() * v;
        for (int d2 = 0; d2 < dim; ++d2)
          fv.active += fv.wvec(d2) != 0.0;
        firsts.push_back(std::move(fv));
        int pos = 0;
        while (pos < dim && c[pos] == r1) {
          c[pos] = -r1;
          ++pos;
        }
        if (pos == dim) break;
        ++c[pos];
      }
      std::stable_sort(firsts.begin(), firsts.end(),
                       [](const FirstVec& a, const FirstVec& b) {
                         if (a.active != b.active) return a.active < b.active;
                         return a.linf < b.linf;
                       });
    }

    for (const FirstVec& fv : firsts) {
      if (st.found || st.out_of_budget) break;
      double bits = subtree_bits(fv.active, stage);
      if (bits > effort || (effort > 8.0 && bits <= effort - 4.0))
        continue;  // not this pair's effort class
      if (!st.tick()) break;
      tuple[0] = fv.coords;
      w.assign(1, fv.wvec);
      bool v1_new = fv.linf > prev_radius[0];
      place_vector(place_vector, 1, v1_new);
    }
    }
  }

  SearchResult out;
  out.nodes = st.nodes;
  out.found = st.found;
  out.tuple = st.found ? st.hit : st.best_tuple;
  if (out.tuple.empty())
    out.tuple.assign(k, std::vector<std::int64_t>(dim, 0));
  out.residuals.clear();
  double worst = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      double val = 0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          val += double(out.tuple[i][a]) * m(a, b) * double(out.tuple[j][b]);
      double res = std::abs(val - targets.at(i + 1, j + 1));
      out.residuals.push_back(res);
      worst = std::max(worst, res);
    }
  out.max_residual = worst;
  return out;
}

}  // namespace symp
