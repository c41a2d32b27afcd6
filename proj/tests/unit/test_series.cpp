#include <doctest.h>

#include <cmath>

#include "support/simulate.hpp"
#include "vecmtk/errors.hpp"
#include "vecmtk/series.hpp"

using namespace vecmtk;

TEST_CASE("difference and lag") {
  const std::vector<double> x = {1, 4, 9, 16, 25};
  CHECK(difference(x) == std::vector<double>{3, 5, 7, 9});
  CHECK(difference(x, 2) == std::vector<double>{2, 2, 2});
  CHECK(difference(std::vector<double>{1, 3, 6}) == std::vector<double>{2, 3});
  CHECK(difference(std::vector<double>(6, 4.2), 3) == std::vector<double>(3, 0.0));
  CHECK_THROWS(difference(x, 0));
  CHECK_THROWS(difference(x, 5));

  const auto l0 = lag(x, 0);
  for (std::size_t t = 0; t < x.size(); ++t) CHECK(*l0[t] == x[t]);
  CHECK_THROWS(lag(x, 5));

  const auto l2 = lag(x, 2);
  REQUIRE(l2.size() == 5);
  CHECK(!l2[0].has_value());
  CHECK(!l2[1].has_value());
  CHECK(*l2[2] == 1);
  CHECK(*l2[4] == 9);

  // Lagging a lagged series composes.
  const auto l3 = lag(std::span<const std::optional<double>>(l2), 1);
  CHECK(!l3[2].has_value());
  CHECK(*l3[3] == 1);
}

TEST_CASE("seasonal dummies omit Q4") {
  const auto idx = testing::quarters(8, Quarter(2001, 3));
  const auto d = seasonal_dummies(idx);
  REQUIRE(d.values.rows() == 8);
  REQUIRE(d.values.cols() == 3);
  for (std::size_t t = 0; t < idx.size(); ++t) {
    const auto r = static_cast<Eigen::Index>(t);
    const int q = idx[t].quarter;
    for (int c = 0; c < 3; ++c) CHECK(d.values(r, c) == (q == c + 1 ? 1.0 : 0.0));
  }
  std::vector<Quarter> q4 = {Quarter(1950, 4), Quarter(1951, 4)};
  CHECK(seasonal_dummies(q4).values.isZero());

  // 1950Q1..2017Q1: 68 first quarters, 67 of each other quarter.
  const auto full = seasonal_dummies(testing::quarters(269, Quarter(1950, 1)));
  CHECK(full.values.col(0).sum() == 68);
  CHECK(full.values.col(1).sum() == 67);
  CHECK(full.values.col(2).sum() == 67);

  const auto c = seasonal_dummies(idx, DummyCoding::centered);
  CHECK(c.values(0, 2) == doctest::Approx(0.75));   // 2001Q3
  CHECK(c.values(1, 0) == doctest::Approx(-0.25));  // 2001Q4
}

TEST_CASE("VECM design layout for p=4, k=2, r=3") {
  testing::Rng rng(11);
  std::vector<std::vector<double>> cols;
  for (int j = 0; j < 4; ++j) cols.push_back(testing::random_walk(rng, 40));
  const Panel p = testing::make_panel(cols, {"gdp", "disc_rate", "cpi", "us_pop"});
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(4, 3);
  beta.topRows(3).setIdentity();
  const auto ec = error_correction_terms(p, beta);
  CHECK(std::isnan(ec(0, 0)));
  CHECK(ec(5, 1) == p.values()(4, 1));

  const auto dummies = seasonal_dummies(p.index());
  const auto d = build_vecm_design(p, 2, ec, &dummies);
  CHECK(d.regressors.cols() == 15);
  CHECK(d.regressors.rows() == 40 - 2 - 1);
  CHECK(d.first_row == 3);
  CHECK(d.response_names.front() == "d.gdp");
  const std::vector<std::string> head = {"d.gdp.l1", "d.disc_rate.l1", "d.cpi.l1",
                                         "d.us_pop.l1", "d.gdp.l2"};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(d.regressors.names[i] == head[i]);
  CHECK(d.regressors.names[8] == "const");
  CHECK(d.regressors.names[9] == "sd1");
  CHECK(d.regressors.names[14] == "ec3");

  // Row 0 is panel row 3: the response is y_3 - y_2, lag 2 is y_1 - y_0.
  const auto& v = p.values();
  CHECK(d.responses(0, 0) == doctest::Approx(v(3, 0) - v(2, 0)));
  CHECK(d.regressors.values(0, 4) == doctest::Approx(v(1, 0) - v(0, 0)));
  CHECK(d.regressors.values(0, 12) == doctest::Approx(v(2, 0)));
  CHECK(d.index.front() == p.index()[3]);
}

TEST_CASE("design without dummies or EC terms") {
  testing::Rng rng(12);
  const Panel p = testing::make_panel({testing::random_walk(rng, 20), testing::random_walk(rng, 20)});
  const auto d = build_vecm_design(p, 1, Eigen::MatrixXd(), nullptr);
  CHECK(d.regressors.cols() == 3);
  CHECK(d.regressors.names.back() == "const");
  CHECK(d.regressors.rows() == 18);
}

TEST_CASE("DesignMatrix validation catches duplicates and non-finite cells") {
  DesignMatrix m;
  m.values = Eigen::MatrixXd::Ones(3, 2);
  m.names = {"a", "a"};
  CHECK_THROWS(m.validate());
  m.names = {"a", "b"};
  CHECK_NOTHROW(m.validate());
  m.values(1, 1) = std::nan("");
  CHECK_THROWS(m.validate());
  CHECK(m.index_of("b") == 1);
}
