#pragma once

// Exact verification of the restricted-root decomposition of sp(2n,R),
// the weight decomposition of its complement W inside sl(2n,R), the
// bracket identity table, invariance, and irreducibility of W.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symp/errors.hpp"
#include "symp/exact.hpp"
#include "symp/rng.hpp"

namespace symp::lie {

/// Square matrix with exact rational entries.
class ExactMatrix {
 public:
  explicit ExactMatrix(int size) : size_(size), e_(std::size_t(size) * size, 0) {}

  int size() const { return size_; }
  Rat& at(int i, int j) { return e_[std::size_t(i) * size_ + j]; }
  const Rat& at(int i, int j) const { return e_[std::size_t(i) * size_ + j]; }

  bool is_zero() const {
    for (const Rat& x : e_)
      if (x != 0) return false;
    return true;
  }

  ExactMatrix operator+(const ExactMatrix& o) const {
    check(o);
    ExactMatrix r(size_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] + o.e_[t];
    return r;
  }
  ExactMatrix operator-(const ExactMatrix& o) const {
    check(o);
    ExactMatrix r(size_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] - o.e_[t];
    return r;
  }
  ExactMatrix operator*(const ExactMatrix& o) const {
    check(o);
    ExactMatrix r(size_);
    for (int i = 0; i < size_; ++i)
      for (int l = 0; l < size_; ++l) {
        const Rat& a = at(i, l);
        if (a == 0) continue;
        for (int j = 0; j < size_; ++j) {
          const Rat& b = o.at(l, j);
          if (b != 0) r.at(i, j) += a * b;
        }
      }
    return r;
  }
  ExactMatrix scaled(const Rat& c) const {
    ExactMatrix r(size_);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] * c;
    return r;
  }
  bool operator==(const ExactMatrix& o) const {
    return size_ == o.size_ && e_ == o.e_;
  }

  /// Flattened integer row (entries times the lcm of denominators), the
  /// representation used by span arithmetic.
  IntRow flatten() const {
    Int l = 1;
    for (const Rat& x : e_)
      l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
    IntRow row(e_.size());
    for (std::size_t t = 0; t < e_.size(); ++t)
      row[t] = boost::multiprecision::numerator(e_[t]) *
               (l / boost::multiprecision::denominator(e_[t]));
    return row;
  }

 private:
  void check(const ExactMatrix& o) const {
    if (size_ != o.size_) throw DimensionError("exact matrix: size mismatch");
  }
  int size_;
  std::vector<Rat> e_;
};

/// Commutator [X, Y] = XY - YX.
inline ExactMatrix bracket(const ExactMatrix& x, const ExactMatrix& y) {
  if (x.size() != y.size()) throw DimensionError("bracket: size mismatch");
  return x * y - y * x;
}

namespace detail {

/// 2n x 2n matrix from the four n x n blocks written as entry lists
/// (i, j, value); block tags: 0 = A (top-left), 1 = B (top-right),
/// 2 = C (bottom-left), 3 = D (bottom-right).
struct Entry {
  int block, i, j;
  int value;
};

inline ExactMatrix from_entries(int n, const std::vector<Entry>& entries) {
  ExactMatrix m(2 * n);
  for (const auto& e : entries) {
    int ri = e.i + (e.block >= 2 ? n : 0);
    int cj = e.j + (e.block == 1 || e.block == 3 ? n : 0);
    m.at(ri, cj) += e.value;
  }
  return m;
}

}  // namespace detail

/// Labeled generator of a root/weight space: the integer coefficients
/// over (f_1, ..., f_n) and the matrix.
struct WeightVector {
  enum class Space { SpRoot, WWeight, WZero };
  std::vector<int> label;  // length n
  ExactMatrix matrix;
  Space space;
  std::string name;
};

struct LieBases {
  std::vector<ExactMatrix> sp;      // dim n(2n+1)
  std::vector<ExactMatrix> w;       // dim 2n^2 - n - 1
  std::vector<ExactMatrix> cartan;  // dim n
  std::vector<ExactMatrix> sl;      // dim 4n^2 - 1
};

/// Exact bases of sp(2n,R), its complement W, the split torus, and
/// sl(2n,R); block conventions D = -A^T / B, C symmetric for sp and
/// D = A^T / B, C antisymmetric for W.
inline LieBases bases(int n) {
  if (n < 2) throw RangeError("lie: n must be >= 2");
  LieBases b;
  using detail::Entry;
  auto mk = [&](std::vector<Entry> e) {
    return detail::from_entries(n, std::move(e));
  };

  // sp: A arbitrary (D = -A^T), B and C symmetric
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b.sp.push_back(mk({{0, i, j, 1}, {3, j, i, -1}}));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j) {
        b.sp.push_back(mk({{1, i, i, 1}}));
        b.sp.push_back(mk({{2, i, i, 1}}));
      } else {
        b.sp.push_back(mk({{1, i, j, 1}, {1, j, i, 1}}));
        b.sp.push_back(mk({{2, i, j, 1}, {2, j, i, 1}}));
      }
    }

  // W: A traceless (D = A^T), B and C antisymmetric
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) b.w.push_back(mk({{0, i, j, 1}, {3, j, i, 1}}));
  for (int i = 0; i + 1 < n; ++i)
    b.w.push_back(mk({{0, i, i, 1},
                      {0, i + 1, i + 1, -1},
                      {3, i, i, 1},
                      {3, i + 1, i + 1, -1}}));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      b.w.push_back(mk({{1, i, j, 1}, {1, j, i, -1}}));
      b.w.push_back(mk({{2, i, j, 1}, {2, j, i, -1}}));
    }

  for (int i = 0; i < n; ++i)
    b.cartan.push_back(mk({{0, i, i, 1}, {3, i, i, -1}}));

  const int d = 2 * n;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) {
        ExactMatrix m(d);
        m.at(i, j) = 1;
        b.sl.push_back(std::move(m));
      }
  for (int i = 0; i + 1 < d; ++i) {
    ExactMatrix m(d);
    m.at(i, i) = 1;
    m.at(i + 1, i + 1) = -1;
    b.sl.push_back(std::move(m));
  }
  return b;
}

/// Root-space generators of sp(2n,R) with their labels.
inline std::vector<WeightVector> sp_root_generators(int n) {
  std::vector<WeightVector> out;
  using detail::Entry;
  auto label = [&](int i, int j, int si, int sj) {
    std::vector<int> l(n, 0);
    l[i] += si;
    l[j] += sj;
    return l;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        out.push_back({label(i, j, 1, -1),
                       detail::from_entries(n, {{0, i, j, 1}, {3, j, i, -1}}),
                       WeightVector::Space::SpRoot,
                       "sp f" + std::to_string(i + 1) + "-f" +
                           std::to_string(j + 1)});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<Entry> up =
          i == j ? std::vector<Entry>{{1, i, i, 1}}
                 : std::vector<Entry>{{1, i, j, 1}, {1, j, i, 1}};
      std::vector<Entry> dn =
          i == j ? std::vector<Entry>{{2, i, i, 1}}
                 : std::vector<Entry>{{2, i, j, 1}, {2, j, i, 1}};
      out.push_back({label(i, j, 1, 1), detail::from_entries(n, up),
                     WeightVector::Space::SpRoot,
                     "sp f" + std::to_string(i + 1) + "+f" +
                         std::to_string(j + 1)});
      out.push_back({label(i, j, -1, -1), detail::from_entries(n, dn),
                     WeightVector::Space::SpRoot,
                     "sp -f" + std::to_string(i + 1) + "-f" +
                         std::to_string(j + 1)});
    }
  return out;
}

/// Weight-space generators of W (including the zero-weight space W_0).
inline std::vector<WeightVector> w_weight_generators(int n) {
  std::vector<WeightVector> out;
  auto label = [&](int i, int j, int si, int sj) {
    std::vector<int> l(n, 0);
    l[i] += si;
    l[j] += sj;
    return l;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        out.push_back({label(i, j, 1, -1),
                       detail::from_entries(n, {{0, i, j, 1}, {3, j, i, 1}}),
                       WeightVector::Space::WWeight,
                       "W f" + std::to_string(i + 1) + "-f" +
                           std::to_string(j + 1)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.push_back({label(i, j, 1, 1),
                     detail::from_entries(n, {{1, i, j, 1}, {1, j, i, -1}}),
                     WeightVector::Space::WWeight,
                     "W f" + std::to_string(i + 1) + "+f" +
                         std::to_string(j + 1)});
      out.push_back({label(i, j, -1, -1),
                     detail::from_entries(n, {{2, i, j, 1}, {2, j, i, -1}}),
                     WeightVector::Space::WWeight,
                     "W -f" + std::to_string(i + 1) + "-f" +
                         std::to_string(j + 1)});
    }
  for (int i = 0; i + 1 < n; ++i)
    out.push_back({std::vector<int>(n, 0),
                   detail::from_entries(n, {{0, i, i, 1},
                                            {0, i + 1, i + 1, -1},
                                            {3, i, i, 1},
                                            {3, i + 1, i + 1, -1}}),
                   WeightVector::Space::WZero,
                   "W_0 #" + std::to_string(i + 1)});
  return out;
}

struct LieReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::pair<std::string, long>> stats;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
  void stat(std::string key, long value) {
    stats.emplace_back(std::move(key), value);
  }
};

namespace detail {

inline IntRowSpan span_of(const std::vector<ExactMatrix>& mats, int size) {
  IntRowSpan span(std::size_t(size) * size);
  for (const auto& m : mats) span.add(m.flatten());
  return span;
}

}  // namespace detail

/// Eigen-equation check ad(a) X = label(a) X for every listed generator
/// and every Cartan element, plus exhaustion of sp and W by the listed
/// spaces (dimension counts) and the direct-sum check sp + W = sl.
inline LieReport verify_decomposition(int n) {
  LieReport rep;
  LieBases b = bases(n);
  const int d = 2 * n;
  const long dim_sp = long(n) * (2 * n + 1);
  const long dim_w = 2L * n * n - n - 1;
  const long dim_sl = 4L * n * n - 1;

  rep.stat("dim_sp", long(b.sp.size()));
  rep.stat("dim_w", long(b.w.size()));
  rep.stat("dim_cartan", long(b.cartan.size()));
  rep.stat("dim_sl", long(b.sl.size()));
  if (long(b.sp.size()) != dim_sp) rep.fail("sp basis has wrong size");
  if (long(b.w.size()) != dim_w) rep.fail("W basis has wrong size");
  if (long(b.sl.size()) != dim_sl) rep.fail("sl basis has wrong size");

  IntRowSpan direct_sum(std::size_t(d) * d);
  for (const auto& m : b.sp) direct_sum.add(m.flatten());
  for (const auto& m : b.w) direct_sum.add(m.flatten());
  rep.stat("rank_sp_plus_w", long(direct_sum.dim()));
  if (long(direct_sum.dim()) != dim_sl)
    rep.fail("sp + W does not span sl exactly");

  auto check_family = [&](const std::vector<WeightVector>& gens) {
    for (const auto& g : gens) {
      for (int t = 0; t < n; ++t) {
        ExactMatrix lhs = bracket(b.cartan[t], g.matrix);
        ExactMatrix rhs = g.matrix.scaled(Rat(g.label[t]));
        if (!(lhs == rhs)) rep.fail("eigen-equation fails for " + g.name);
      }
    }
  };
  auto sp_gens = sp_root_generators(n);
  auto w_gens = w_weight_generators(n);
  check_family(sp_gens);
  check_family(w_gens);

  // the listed spaces exhaust sp and W
  long sp_root_count = long(sp_gens.size());
  rep.stat("sp_root_spaces", sp_root_count);
  if (sp_root_count != dim_sp - n)
    rep.fail("sp root spaces do not exhaust sp minus the torus");
  long w_count = long(w_gens.size());
  rep.stat("w_weight_spaces_with_zero", w_count);
  if (w_count != dim_w) rep.fail("W weight spaces do not exhaust W");

  IntRowSpan sp_span = detail::span_of(b.sp, d);
  for (const auto& g : sp_gens)
    if (!sp_span.contains(g.matrix.flatten()))
      rep.fail("root generator outside sp: " + g.name);
  IntRowSpan w_span = detail::span_of(b.w, d);
  for (const auto& g : w_gens)
    if (!w_span.contains(g.matrix.flatten()))
      rep.fail("weight generator outside W: " + g.name);
  return rep;
}

/// Invariance [sp, W] within W (exact), and irreducibility: the closure
/// of each single weight generator under ad(sp) reaches all of W.
inline LieReport verify_irreducible(int n) {
  LieReport rep;
  LieBases b = bases(n);
  const int d = 2 * n;
  const long dim_w = 2L * n * n - n - 1;

  IntRowSpan w_span = detail::span_of(b.w, d);
  for (const auto& s : b.sp)
    for (const auto& x : b.w) {
      ExactMatrix br = bracket(s, x);
      if (!br.is_zero() && !w_span.contains(br.flatten())) {
        rep.fail("invariance fails: [sp, W] leaves W");
        break;
      }
    }

  auto closure_dim = [&](const ExactMatrix& start) -> long {
    IntRowSpan span(std::size_t(d) * d);
    std::vector<ExactMatrix> worklist;
    if (span.add(start.flatten())) worklist.push_back(start);
    while (!worklist.empty()) {
      ExactMatrix y = std::move(worklist.back());
      worklist.pop_back();
      for (const auto& s : b.sp) {
        ExactMatrix z = bracket(s, y);
        if (z.is_zero()) continue;
        if (span.add(z.flatten())) worklist.push_back(std::move(z));
      }
    }
    return long(span.dim());
  };

  auto w_gens = w_weight_generators(n);
  for (const auto& g : w_gens) {
    long dim = closure_dim(g.matrix);
    if (dim != dim_w)
      rep.fail("closure from " + g.name + " stalls at dimension " +
               std::to_string(dim));
  }
  rep.stat("w_generators_checked", long(w_gens.size()));
  rep.stat("dim_w", dim_w);
  return rep;
}

/// The listed bracket identities moving between weight spaces of W,
/// checked exactly for every valid index combination.
inline LieReport verify_bracket_table(int n) {
  LieReport rep;
  if (n < 2) throw RangeError("lie: n must be >= 2");
  using detail::Entry;
  auto mk = [&](std::vector<Entry> e) {
    return detail::from_entries(n, std::move(e));
  };
  auto sp_diag = [&](int a, int c) {  // diag(E_ac, -E_ca) in sp
    return mk({{0, a, c, 1}, {3, c, a, -1}});
  };
  auto w_diag = [&](int a, int c) {  // diag(E_ac, E_ca) in W
    return mk({{0, a, c, 1}, {3, c, a, 1}});
  };
  auto w_upper = [&](int a, int c) {  // antisym E_ac - E_ca, upper-right
    return mk({{1, a, c, 1}, {1, c, a, -1}});
  };
  auto w_lower = [&](int a, int c) {
    return mk({{2, a, c, 1}, {2, c, a, -1}});
  };
  auto w_zero_pair = [&](int a, int c) {  // diag(E_aa - E_cc, E_aa - E_cc)
    return mk({{0, a, a, 1}, {0, c, c, -1}, {3, a, a, 1}, {3, c, c, -1}});
  };
  long checked = 0;
  auto expect = [&](const ExactMatrix& lhs, const ExactMatrix& rhs,
                    const std::string& label) {
    ++checked;
    if (!(lhs == rhs)) rep.fail("bracket identity fails: " + label);
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // between f_i - f_j weight vectors and W_0
      expect(bracket(sp_diag(j, i), w_diag(i, j)),
             w_zero_pair(i, j).scaled(Rat(-1)), "to W_0");
      expect(bracket(sp_diag(i, j), w_zero_pair(i, j)),
             w_diag(i, j).scaled(Rat(-2)), "from W_0");
      // between f_i - f_j and f_i + f_j
      expect(bracket(mk({{1, j, j, 1}}), w_diag(i, j)),
             w_upper(i, j).scaled(Rat(-1)), "diag to upper");
      expect(bracket(mk({{2, j, j, 1}}), w_upper(i, j)),
             w_diag(i, j).scaled(Rat(-1)), "upper to diag");
      // between f_i - f_j and -f_i - f_j
      expect(bracket(mk({{2, i, i, 1}}), w_diag(i, j)), w_lower(i, j),
             "diag to lower");
      expect(bracket(mk({{1, i, i, 1}}), w_lower(i, j)), w_diag(i, j),
             "lower to diag");
      for (int l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        // among the f_i - f_j family
        expect(bracket(sp_diag(j, l), w_diag(i, j)),
               w_diag(i, l).scaled(Rat(-1)), "diag family 1");
        expect(bracket(sp_diag(l, i), w_diag(i, j)), w_diag(l, j),
               "diag family 2");
        if (i < j) {
          // among the f_i + f_j family and the -f_i - f_j family
          expect(bracket(sp_diag(l, j), w_upper(i, j)), w_upper(i, l),
                 "upper family 1");
          expect(bracket(sp_diag(l, i), w_upper(i, j)), w_upper(l, j),
                 "upper family 2");
          expect(bracket(sp_diag(j, l), w_lower(i, j)),
                 w_lower(i, l).scaled(Rat(-1)), "lower family 1");
          expect(bracket(sp_diag(i, l), w_lower(i, j)), w_lower(j, l),
                 "lower family 2");
        }
      }
    }
  rep.stat("identities_checked", checked);
  return rep;
}

/// Consequence check: sp plus any nonzero element of W generates all of
/// sl(2n,R) under bracket span.
inline LieReport verify_maximality(int n, int trials, Rng& rng) {
  LieReport rep;
  LieBases b = bases(n);
  const int d = 2 * n;
  const long dim_sl = 4L * n * n - 1;

  for (int trial = 0; trial < trials; ++trial) {
    ExactMatrix x(d);
    bool nonzero = false;
    while (!nonzero) {
      x = ExactMatrix(d);
      for (const auto& wb : b.w) {
        long c = long(rng.uniform_index(7)) - 3;  // small rational coeffs
        if (c != 0) x = x + wb.scaled(Rat(c));
      }
      nonzero = !x.is_zero();
    }

    IntRowSpan span(std::size_t(d) * d);
    std::vector<ExactMatrix> elements;
    for (const auto& s : b.sp) {
      if (span.add(s.flatten())) elements.push_back(s);
    }
    std::vector<ExactMatrix> worklist;
    if (span.add(x.flatten())) {
      elements.push_back(x);
      worklist.push_back(x);
    }
    while (!worklist.empty() && long(span.dim()) < dim_sl) {
      ExactMatrix y = std::move(worklist.back());
      worklist.pop_back();
      std::size_t snapshot = elements.size();
      for (std::size_t idx = 0; idx < snapshot; ++idx) {
        ExactMatrix z = bracket(elements[idx], y);
        if (z.is_zero()) continue;
        if (span.add(z.flatten())) {
          elements.push_back(z);
          worklist.push_back(std::move(z));
        }
      }
    }
    if (long(span.dim()) != dim_sl)
      rep.fail("maximality closure stalls at dimension " +
               std::to_string(span.dim()) + " on trial " +
               std::to_string(trial));
  }
  rep.stat("trials", trials);
  return rep;
}

}  // namespace symp::lie
