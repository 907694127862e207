#include <catch_amalgamated.hpp>

#include "symp/lie.hpp"
#include "symp/rng.hpp"

using namespace symp;
using lie::ExactMatrix;

namespace {

ExactMatrix random_exact(int size, Rng& rng) {
  ExactMatrix m(size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      m.at(i, j) = Rat(long(rng.uniform_index(7)) - 3, 1 + long(rng.uniform_index(3)));
  return m;
}

}  // namespace

TEST_CASE("basis dimensions") {
  auto b2 = lie::bases(2);
  CHECK(b2.sp.size() == 10);
  CHECK(b2.w.size() == 5);
  CHECK(b2.cartan.size() == 2);
  CHECK(b2.sl.size() == 15);

  auto b3 = lie::bases(3);
  CHECK(b3.sp.size() == 21);
  CHECK(b3.w.size() == 14);
  CHECK(b3.cartan.size() == 3);
  CHECK(b3.sl.size() == 35);

  for (int n : {2, 3, 4}) {
    auto b = lie::bases(n);
    IntRowSpan span(std::size_t(2 * n) * (2 * n));
    for (auto& m : b.sp) span.add(m.flatten());
    for (auto& m : b.w) span.add(m.flatten());
    CHECK(long(span.dim()) == 4L * n * n - 1);
  }
  CHECK_THROWS_AS(lie::bases(1), RangeError);
}

TEST_CASE("bracket is exact, antisymmetric, and satisfies Jacobi") {
  Rng rng(501);
  for (int trial = 0; trial < 100; ++trial) {
    int size = 4 + 2 * int(rng.uniform_index(2));
    ExactMatrix x = random_exact(size, rng);
    ExactMatrix y = random_exact(size, rng);
    ExactMatrix z = random_exact(size, rng);
    CHECK(lie::bracket(x, x).is_zero());
    CHECK((lie::bracket(x, y) + lie::bracket(y, x)).is_zero());
    ExactMatrix jac = lie::bracket(x, lie::bracket(y, z)) +
                      lie::bracket(y, lie::bracket(z, x)) +
                      lie::bracket(z, lie::bracket(x, y));
    CHECK(jac.is_zero());
  }
}

TEST_CASE("rational arithmetic is exact") {
  ExactMatrix m(2);
  m.at(0, 0) = Rat(1, 3);
  auto three = m.scaled(Rat(3));
  CHECK(three.at(0, 0) == Rat(1));
  CHECK((m + m).at(0, 0) == Rat(2, 3));
  CHECK((m - m).is_zero());
}

TEST_CASE("weight decomposition verifies exactly") {
  for (int n : {2, 3, 4}) {
    auto rep = lie::verify_decomposition(n);
    INFO("n=" << n);
    for (auto& f : rep.failures) INFO(f);
    CHECK(rep.ok);
  }
  // counting spot checks for n = 2
  auto rep2 = lie::verify_decomposition(2);
  for (auto& [key, value] : rep2.stats) {
    if (key == "sp_root_spaces") CHECK(value == 8);   // 10 - 2
    if (key == "w_weight_spaces_with_zero") CHECK(value == 5);
  }
  CHECK(lie::w_weight_generators(2).size() == 5);
  CHECK(lie::sp_root_generators(2).size() == 8);
}

TEST_CASE("a corrupted eigen-label is detected") {
  auto b = lie::bases(2);
  auto gens = lie::w_weight_generators(2);
  const auto& g = gens[0];  // genuine label (1, -1)
  std::vector<int> wrong = {1, 1};
  bool all_match = true;
  for (int t = 0; t < 2; ++t) {
    ExactMatrix lhs = lie::bracket(b.cartan[t], g.matrix);
    all_match = all_match && (lhs == g.matrix.scaled(Rat(wrong[t])));
  }
  CHECK(!all_match);
}

TEST_CASE("bracket identity table") {
  for (int n : {2, 3, 4}) {
    auto rep = lie::verify_bracket_table(n);
    INFO("n=" << n);
    for (auto& f : rep.failures) INFO(f);
    CHECK(rep.ok);
    for (auto& [key, value] : rep.stats)
      if (key == "identities_checked") CHECK(value > 0);
  }
}

TEST_CASE("invariance and irreducibility of W") {
  for (int n : {2, 3}) {
    auto rep = lie::verify_irreducible(n);
    INFO("n=" << n);
    for (auto& f : rep.failures) INFO(f);
    CHECK(rep.ok);
  }
}

TEST_CASE("maximality closure from random W elements") {
  Rng rng(502);
  for (int n : {2, 3}) {
    auto rep = lie::verify_maximality(n, 3, rng);
    INFO("n=" << n);
    for (auto& f : rep.failures) INFO(f);
    CHECK(rep.ok);
  }
}
