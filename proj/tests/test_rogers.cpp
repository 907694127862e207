#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "helpers.hpp"
#include "symp/rogers.hpp"

using namespace symp;

namespace {

/// Brute-force index oracle: number of x in [0,q)^r with x D = 0 mod q,
/// index = q^r / #solutions.
Int brute_index(const RrefTerm& term) {
  const int r = term.r, k = term.k;
  const std::int64_t q = term.q;
  std::vector<std::int64_t> x(r, 0);
  std::int64_t solutions = 0;
  for (;;) {
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      std::int64_t s = 0;
      for (int i = 0; i < r; ++i) s += x[i] * term.at(i, j);
      ok = (s % q) == 0;
    }
    solutions += ok;
    int pos = 0;
    while (pos < r && x[pos] == q - 1) {
      x[pos] = 0;
      ++pos;
    }
    if (pos == r) break;
    ++x[pos];
  }
  Int total = 1;
  for (int i = 0; i < r; ++i) total *= q;
  REQUIRE(total % solutions == 0);
  return total / solutions;
}

RrefTerm make_term(int r, int k, std::int64_t q,
                   std::vector<std::int64_t> entries) {
  RrefTerm t;
  t.r = r;
  t.k = k;
  t.q = q;
  t.d = std::move(entries);
  return t;
}

}  // namespace

TEST_CASE("rref enumeration examples") {
  for (std::int64_t b : {2, 3, 5}) {
    auto terms = enum_rref_terms(2, 1, 1, b);
    CHECK(std::int64_t(terms.size()) == 2 * b + 2);
  }
  auto full = enum_rref_terms(2, 2, 1, 1);
  REQUIRE(full.size() == 1);
  CHECK(full[0].at(0, 0) == 1);
  CHECK(full[0].at(1, 1) == 1);
  CHECK(full[0].at(0, 1) == 0);

  // q = 2: rows (2, c) with c odd, plus nothing from the zero-pivot side
  auto q2 = enum_rref_terms(2, 1, 2, 2);
  REQUIRE(q2.size() == 2);
  for (auto& t : q2) {
    CHECK(t.at(0, 0) == 2);
    CHECK(std::abs(t.at(0, 1)) == 1);
  }

  CHECK_THROWS_AS(enum_rref_terms(2, 3, 1, 1), RangeError);
  CHECK_THROWS_AS(enum_rref_terms(2, 1, 2, 1), RangeError);
}

TEST_CASE("no two canonical terms share a rational matrix") {
  const int k = 3;
  std::set<std::vector<std::pair<long long, long long>>> seen;
  for (int r = 1; r <= k; ++r)
    for (std::int64_t q = 1; q <= 3; ++q)
      for (auto& t : enum_rref_terms(k, r, q, 3)) {
        std::vector<std::pair<long long, long long>> ratmat;
        for (auto e : t.d) {
          std::int64_t g = std::gcd(e, t.q);
          ratmat.emplace_back(e / g, t.q / g);
        }
        // include the rank so different r do not collide
        ratmat.emplace_back(r, 0);
        CHECK(seen.insert(ratmat).second);
      }
}

TEST_CASE("weight_cd examples") {
  auto id3 = make_term(3, 3, 1, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  CHECK(weight_cd(id3, 4).index == 1);

  auto d11q2 = make_term(1, 2, 2, {1, 1});
  auto w = weight_cd(d11q2, 5);
  CHECK(w.index == 2);
  CHECK(w.as_double() == Catch::Approx(std::pow(2.0, -5.0)));

  auto d11q1 = make_term(1, 2, 1, {1, 1});
  CHECK(weight_cd(d11q1, 4).index == 1);

  auto rank_def = make_term(2, 2, 1, {1, 1, 1, 1});
  CHECK_THROWS_AS(weight_cd(rank_def, 4), RankError);
}

TEST_CASE("weight_cd equals the brute-force index oracle") {
  // every canonical D with k <= 3, r <= 2, q <= 4, |entries| <= 4
  long checked = 0;
  for (int k = 2; k <= 3; ++k)
    for (int r = 1; r <= std::min(2, k); ++r)
      for (std::int64_t q = 1; q <= 4; ++q)
        for (auto& t : enum_rref_terms(k, r, q, 4)) {
          auto w = weight_cd(t, 4);
          CHECK(w.index == brute_index(t));
          CHECK(w.le_q_pow(q));  // c_D <= q^{-d} exactly
          ++checked;
        }
  CHECK(checked > 500);
}

TEST_CASE("block multiplicativity of weights") {
  Rng rng(77);
  auto pool1 = enum_rref_terms(2, 1, 2, 3);
  auto pool2 = enum_rref_terms(2, 1, 3, 4);
  auto pool3 = enum_rref_terms(3, 2, 2, 3);
  std::vector<RrefTerm> pool;
  pool.insert(pool.end(), pool1.begin(), pool1.end());
  pool.insert(pool.end(), pool2.begin(), pool2.end());
  pool.insert(pool.end(), pool3.begin(), pool3.end());
  REQUIRE(pool.size() >= 10);

  for (int trial = 0; trial < 50; ++trial) {
    const RrefTerm& a = pool[rng.uniform_index(pool.size())];
    const RrefTerm& b = pool[rng.uniform_index(pool.size())];
    std::int64_t q = std::lcm(a.q, b.q);
    int r = a.r + b.r, k = a.k + b.k;
    RrefTerm block;
    block.r = r;
    block.k = k;
    block.q = q;
    block.d.assign(std::size_t(r) * k, 0);
    for (int i = 0; i < a.r; ++i)
      for (int j = 0; j < a.k; ++j)
        block.d[i * k + j] = (q / a.q) * a.at(i, j);
    for (int i = 0; i < b.r; ++i)
      for (int j = 0; j < b.k; ++j)
        block.d[(a.r + i) * k + (a.k + j)] = (q / b.q) * b.at(i, j);
    const int d = 4;
    // scaled blocks inside the lcm-q matrix keep their own (D_i, q_i)
    // weights: c_{D3} = c_{D1} c_{D2} exactly
    CHECK(weight_cd(block, d).index ==
          weight_cd(a, d).index * weight_cd(b, d).index);
  }
}

TEST_CASE("congruence admissibility examples") {
  auto d11 = make_term(1, 2, 1, {1, 1});
  auto v11 = congruence_admissible(d11, 2);
  CHECK(v11.admissible);
  REQUIRE(v11.witness.size() == 2);
  CHECK(v11.witness[0] == 1);
  CHECK(v11.witness[1] == 1);

  auto d12 = make_term(1, 2, 1, {1, 2});
  auto v12 = congruence_admissible(d12, 2);
  CHECK(!v12.admissible);
  CHECK(!v12.admissible_no_minimality);

  // N = 1 is vacuous for any D
  for (auto& t : enum_rref_terms(3, 2, 2, 2))
    CHECK(congruence_admissible(t, 1).admissible);

  // first column of the lattice identically zero: no valid witness
  auto d01 = make_term(1, 2, 1, {0, 1});
  CHECK(!congruence_admissible(d01, 2).admissible);

  // identity is admissible for every modulus
  auto id2 = make_term(2, 2, 1, {1, 0, 0, 1});
  for (std::int64_t n : {2, 3, 4, 5})
    CHECK(congruence_admissible(id2, n).admissible);
}

TEST_CASE("congruence block closure") {
  // if D1, D2 are congruence admissible for N then so is the block
  // matrix with q = lcm(q1, q2)
  for (std::int64_t n_mod : {2, 3, 4}) {
    std::vector<RrefTerm> pool;
    for (std::int64_t q : {1, 2, 3})
      for (auto& t : enum_rref_terms(2, 1, q, 3)) pool.push_back(t);
    std::vector<const RrefTerm*> adm;
    for (auto& t : pool)
      if (congruence_admissible(t, n_mod).admissible) adm.push_back(&t);
    REQUIRE(adm.size() >= 3);
    int checked = 0;
    for (std::size_t ia = 0; ia < adm.size() && checked < 25; ia += 2)
      for (std::size_t ib = 0; ib < adm.size() && checked < 25; ib += 3) {
        const RrefTerm &a = *adm[ia], &b = *adm[ib];
        std::int64_t q = std::lcm(a.q, b.q);
        int r = a.r + b.r, k = a.k + b.k;
        RrefTerm block;
        block.r = r;
        block.k = k;
        block.q = q;
        block.d.assign(std::size_t(r) * k, 0);
        for (int i = 0; i < a.r; ++i)
          for (int j = 0; j < a.k; ++j)
            block.d[i * k + j] = (q / a.q) * a.at(i, j);
        for (int i = 0; i < b.r; ++i)
          for (int j = 0; j < b.k; ++j)
            block.d[(a.r + i) * k + (a.k + j)] = (q / b.q) * b.at(i, j);
        CHECK(congruence_admissible(block, n_mod).admissible);
        ++checked;
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("primitive admissibility search") {
  auto id4 = make_term(4, 4, 1,
                       {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  auto cert = primitive_admissible_search(id4, 4, 1);
  REQUIRE(cert.has_value());
  // verify the witness independently
  for (int j = 0; j < 4; ++j) {
    std::int64_t g = 0;
    for (int c = 0; c < 4; ++c) g = std::gcd(g, cert->images[j * 4 + c]);
    CHECK(g == 1);
  }

  auto d11q2 = make_term(1, 2, 2, {1, 1});
  auto c2 = primitive_admissible_search(d11q2, 2, 2);
  REQUIRE(c2.has_value());
  for (int j = 0; j < 2; ++j) {
    std::int64_t g = 0;
    for (int c = 0; c < 2; ++c) g = std::gcd(g, c2->images[j * 2 + c]);
    CHECK(g == 1);
  }

  // (u, 2u) can never be primitive in both columns: always Unknown
  auto d12q3 = make_term(1, 2, 3, {1, 2});
  CHECK(!primitive_admissible_search(d12q3, 2, 1).has_value());
  CHECK(!primitive_admissible_search(d12q3, 2, 4).has_value());
}

TEST_CASE("first moment assembly, k = 1") {
  auto form = SymplecticForm::standard(2);
  Rng rng(55);
  auto a = assemble_first_moment(form, std::nullopt, 2.0, 1, {}, 100'000,
                                 rng);
  CHECK(a.terms.empty());
  CHECK(a.f0 == 1.0);
  CHECK(a.main_integral ==
        Catch::Approx(unit_ball_volume(4) * 16.0).epsilon(1e-12));
  CHECK(a.expectation() == Catch::Approx(1.0 + unit_ball_volume(4) * 16.0));
}

TEST_CASE("first moment assembly, k = 2 term structure") {
  auto form = SymplecticForm::standard(2);
  Rng rng(56);
  double T = 2.0;
  auto grid0 = IntervalGrid::uniform(2, -0.25, 0.25);  // contains 0
  Truncation trunc;
  trunc.q_max = 2;
  trunc.entry_bound = 2;
  auto a = assemble_first_moment(form, grid0, T, 2, trunc, 200'000, rng,
                                 60'000);
  CHECK(a.f0 == 1.0);
  double ball = unit_ball_volume(4) * std::pow(T, 4.0);

  // the diagonal term D = (1, 1), q = 1 integrates F(v, v): the value
  // <v,v> = 0 lies in the grid, so the integral is the full ball volume
  bool found_diag = false;
  for (auto& t : a.terms) {
    if (t.term.q == 1 && t.term.r == 1 && t.term.at(0, 0) == 1 &&
        t.term.at(0, 1) == 1) {
      found_diag = true;
      CHECK(t.integral == Catch::Approx(ball).epsilon(1e-9));
      CHECK(t.cd == 1.0);
    }
    // far-off-diagonal entries shrink the intersection; integrals stay
    // below the ball product trivially
    CHECK(t.integral <= std::pow(ball, t.term.r) * (1.0 + 1e-9));
  }
  CHECK(found_diag);

  // with a grid missing 0, the diagonal term vanishes
  auto grid1 = IntervalGrid::uniform(2, 0.4, 0.9);
  Rng rng2(57);
  auto b = assemble_first_moment(form, grid1, T, 2, trunc, 200'000, rng2,
                                 60'000);
  CHECK(b.f0 == 0.0);
  for (auto& t : b.terms)
    if (t.term.q == 1 && t.term.at(0, 0) == 1 && t.term.at(0, 1) == 1)
      CHECK(t.integral == 0.0);

  CHECK(a.tail_bound > 0.0);
  CHECK(a.truncation_warning == (a.tail_bound > 0.01 * a.main_integral));
}

TEST_CASE("variance bound constant and maxima") {
  // k = 1: C = binom(2,1) (20 * 5 * 2^{-2n} + 3)
  int n = 3;
  double c1 = variance_bound_constant(n, 1);
  CHECK(c1 == Catch::Approx(2.0 * (100.0 * std::pow(2.0, -6.0) + 3.0)));
  CHECK(variance_bound({7.0}, n, 1) == Catch::Approx(c1 * 7.0));
  CHECK(variance_bound({0.0, 0.0}, n, 2) == 0.0);
  CHECK_THROWS_AS(variance_bound({1.0}, n, 2), MissingVolumeError);

  // growth of the dominant pair for vol(E_r) ~ T^{2nr - r(r-1)}:
  // (r1, r2) = (k, k-1) gives exponent 2n(2k-1) - 2(k-1)^2
  int n2 = 2, k2 = 2;
  auto vols = [&](double T) {
    std::vector<double> v;
    for (int r = 1; r <= k2; ++r)
      v.push_back(std::pow(T, 2.0 * n2 * r - r * (r - 1)));
    return v;
  };
  double b1 = variance_bound(vols(10.0), n2, k2);
  double b2 = variance_bound(vols(20.0), n2, k2);
  double slope = std::log(b2 / b1) / std::log(2.0);
  double dominant = 2.0 * n2 * (2 * k2 - 1) - 2.0 * (k2 - 1) * (k2 - 1);
  CHECK(slope == Catch::Approx(dominant));  // = 10 for n = k = 2
}

TEST_CASE("exponent window across the admissible range") {
  for (int k : {2, 3}) {
    for (int twon = k * k + 3; twon <= 20; ++twon) {
      if (twon % 2 != 0) continue;
      int n = twon / 2;
      auto w = exponent_window(n, k);
      INFO("n=" << n << " k=" << k);
      CHECK(w.delta_min > 0.0);
      CHECK(w.delta_min < 1.0);
      CHECK(w.alpha_range.first < w.alpha_range.second);
      CHECK(w.variance_exponent ==
            Catch::Approx(2.0 * n * (2 * k - 1) - 2.0 * k * k));
      // the chosen delta is the midpoint toward 1
      CHECK(w.delta == Catch::Approx(0.5 * (w.delta_min + 1.0)));
    }
  }
  CHECK_THROWS_AS(exponent_window(2, 2), HypothesisError);  // 2n=4 < 7
  CHECK_THROWS_AS(exponent_window(3, 2), HypothesisError);  // 2n=6 < 7
  CHECK_THROWS_AS(exponent_window(5, 3), HypothesisError);  // 2n=10 < 12
  CHECK_NOTHROW(exponent_window(4, 2));
  // delta outside (delta_min, 1) rejected
  CHECK_THROWS_AS(exponent_window(4, 2, 0.5), RangeError);
}
