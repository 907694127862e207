#include <catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "symp/forms.hpp"
#include "symp/json_io.hpp"

using namespace symp;
using testutil::random_sl;
using testutil::random_vector;

TEST_CASE("standard_j basic shapes") {
  MatrixXd j1 = standard_j(1);
  CHECK(j1(0, 1) == 1.0);
  CHECK(j1(1, 0) == -1.0);
  CHECK(j1(0, 0) == 0.0);
  CHECK(j1(1, 1) == 0.0);

  MatrixXd j2 = standard_j(2);
  CHECK(j2(0, 2) == 1.0);
  CHECK(j2(1, 3) == 1.0);
  CHECK(j2(2, 0) == -1.0);
  CHECK(j2(3, 1) == -1.0);
  CHECK(j2.cwiseAbs().sum() == 4.0);

  for (int n : {1, 2, 3, 5}) {
    MatrixXd j = standard_j(n);
    CHECK((j.transpose() + j).cwiseAbs().maxCoeff() == 0.0);
    CHECK((j * j + MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() ==
          0.0);
  }
  CHECK_THROWS_AS(standard_j(0), DimensionError);
}

TEST_CASE("form_from_g gram caching and validation") {
  auto id = SymplecticForm::from_g(MatrixXd::Identity(4, 4), 2);
  CHECK((id.gram() - standard_j(2)).cwiseAbs().maxCoeff() == 0.0);

  const double a = std::pow(2.0, 0.25);
  MatrixXd g = MatrixXd::Identity(4, 4);
  g(0, 0) = a;
  g(3, 3) = 1.0 / a;
  auto f = SymplecticForm::from_g(g, 2);
  CHECK(f.gram()(0, 2) == Catch::Approx(a).epsilon(1e-14));
  CHECK(f.gram()(1, 3) == Catch::Approx(1.0 / a).epsilon(1e-14));
  CHECK(f.gram()(2, 0) == Catch::Approx(-a).epsilon(1e-14));
  CHECK(f.gram()(3, 1) == Catch::Approx(-1.0 / a).epsilon(1e-14));

  CHECK_THROWS_AS(SymplecticForm::from_g(2.0 * MatrixXd::Identity(4, 4), 2),
                  DeterminantError);
  CHECK_THROWS_AS(SymplecticForm::from_g(MatrixXd::Identity(3, 3), 1),
                  DimensionError);
  CHECK_THROWS_AS(SymplecticForm::from_g(MatrixXd::Identity(4, 4), 3),
                  DimensionError);
}

TEST_CASE("evaluate on standard and transformed forms") {
  auto f = SymplecticForm::standard(2);
  CHECK(f.evaluate(VectorXd::Unit(4, 0), VectorXd::Unit(4, 2)) == 1.0);

  const double a = std::pow(2.0, 0.25);
  MatrixXd g = MatrixXd::Identity(4, 4);
  g(0, 0) = a;
  g(3, 3) = 1.0 / a;
  auto fd = SymplecticForm::from_g(g, 2);
  CHECK(fd.evaluate(VectorXd::Unit(4, 0), VectorXd::Unit(4, 2)) ==
        Catch::Approx(a).epsilon(1e-14));

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    VectorXd v = random_vector(4, 3.0, rng);
    CHECK(std::abs(f.evaluate(v, v)) <= 1e-12 * v.squaredNorm());
  }
  CHECK_THROWS_AS(f.evaluate(VectorXd::Zero(3), VectorXd::Zero(4)),
                  DimensionError);
}

TEST_CASE("pair_values ordering and consistency") {
  auto f = SymplecticForm::standard(2);
  std::vector<VectorXd> tuple = {VectorXd::Unit(4, 0), VectorXd::Unit(4, 1),
                                 VectorXd::Unit(4, 2)};
  auto vals = f.pair_values(tuple);
  REQUIRE(vals.size() == 3);
  CHECK(vals[0] == 0.0);
  CHECK(vals[1] == 1.0);
  CHECK(vals[2] == 0.0);

  // repeated vector gives an exact zero at that pair
  std::vector<VectorXd> rep = {tuple[0], tuple[2], tuple[0]};
  auto rv = f.pair_values(rep);
  CHECK(rv[1] == 0.0);

  // consistency against independent per-pair evaluate calls
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    std::vector<VectorXd> tup;
    for (int i = 0; i < 4; ++i) tup.push_back(random_vector(4, 2.0, rng));
    auto got = f.pair_values(tup);
    std::size_t idx = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        CHECK(got[idx++] == f.evaluate(tup[i], tup[j]));
  }
  CHECK_THROWS_AS(f.pair_values({tuple[0]}), DimensionError);
}

TEST_CASE("antisymmetry and conjugation consistency on random forms") {
  Rng rng(13);
  auto std4 = SymplecticForm::standard(2);
  for (int t = 0; t < 100; ++t) {
    MatrixXd g = random_sl(4, 0.3, rng);
    auto f = SymplecticForm::from_g(g, 2);
    VectorXd v1 = random_vector(4, 2.0, rng);
    VectorXd v2 = random_vector(4, 2.0, rng);
    double scale = std::max(1.0, v1.norm() * v2.norm());
    CHECK(std::abs(f.evaluate(v1, v2) + f.evaluate(v2, v1)) <=
          1e-12 * scale);
    CHECK(std::abs(f.evaluate(v1, v2) -
                   std4.evaluate(g * v1, g * v2)) <= 1e-10 * scale);
  }
}

TEST_CASE("gram of g and -g coincide") {
  Rng rng(14);
  MatrixXd g = random_sl(4, 0.4, rng);
  auto f1 = SymplecticForm::from_g(g, 2);
  auto f2 = SymplecticForm::from_g(-g, 2);
  CHECK((f1.gram() - f2.gram()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("rationality: exact integer gram") {
  std::vector<std::vector<Rat>> m(4, std::vector<Rat>(4, 0));
  MatrixXd j = standard_j(2);
  for (int i = 0; i < 4; ++i)
    for (int jj = 0; jj < 4; ++jj) m[i][jj] = Rat(int(j(i, jj)));
  auto verdict = rationality_test(ExactGram::from_rational(m, 2));
  CHECK(verdict.kind == RationalityKind::Rational);
  CHECK(verdict.scale == 1.0);
}

TEST_CASE("rationality: inexact entries with rational ratio") {
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 2) = 2.0;
  m(2, 0) = -2.0;
  m(1, 3) = 1.0;
  m(3, 1) = -1.0;
  auto verdict = rationality_test(ExactGram::from_double(m, 2));
  CHECK(verdict.kind == RationalityKind::Rational);
  CHECK(verdict.scale == Catch::Approx(1.0));
}

TEST_CASE("rationality: sqrt(2) ratio flagged irrational") {
  const double a = std::pow(2.0, 0.25);
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 2) = a;
  m(2, 0) = -a;
  m(1, 3) = 1.0 / a;
  m(3, 1) = -1.0 / a;
  auto verdict = rationality_test(ExactGram::from_double(m, 2));
  CHECK(verdict.kind == RationalityKind::Irrational);
}

TEST_CASE("rationality: zero form rejected") {
  MatrixXd z = MatrixXd::Zero(4, 4);
  CHECK_THROWS_AS(rationality_test(ExactGram::from_double(z, 2)),
                  ZeroFormError);
}

TEST_CASE("form JSON round trip") {
  Rng rng(15);
  MatrixXd g = random_sl(4, 0.3, rng);
  auto f = SymplecticForm::from_g(g, 2);
  auto loaded = form_from_json(form_to_json(f));
  CHECK((loaded.form.gram() - f.gram()).cwiseAbs().maxCoeff() <= 1e-12);

  json j;
  j["n"] = 1;
  j["gram"] = json::array({json::array({"0", "1/2"}),
                           json::array({"-1/2", "0"})});
  j["exact"] = true;
  CHECK_THROWS_AS(form_from_json(j), DeterminantError);  // |det| = 1/4

  json ok;
  ok["n"] = 1;
  ok["gram"] = json::array({json::array({"0", "1"}),
                            json::array({"-1", "0"})});
  ok["exact"] = true;
  auto lf = form_from_json(ok);
  REQUIRE(lf.exact_gram.has_value());
  auto verdict = rationality_test(*lf.exact_gram);
  CHECK(verdict.kind == RationalityKind::Rational);
}

TEST_CASE("interval grid accessors") {
  auto grid = IntervalGrid::uniform(3, -0.5, 1.5);
  CHECK(grid.pair_count() == 3);
  CHECK(grid.pair_index(1, 2) == 0);
  CHECK(grid.pair_index(1, 3) == 1);
  CHECK(grid.pair_index(2, 3) == 2);
  CHECK(grid.contains(1, 2, 0.0));
  CHECK(!grid.contains(1, 2, 1.5));  // open interval
  CHECK(grid.width_product() == Catch::Approx(8.0));
  CHECK(grid.interval_bound() == 1.5);
  CHECK_THROWS_AS(IntervalGrid::uniform(1, 0, 1), DimensionError);
  CHECK_THROWS(IntervalGrid(2, {{1.0, 1.0}}));
  CHECK_THROWS(IntervalGrid(
      2, {{0.0, std::numeric_limits<double>::infinity()}}));
}
