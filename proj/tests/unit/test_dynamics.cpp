#include <doctest.h>

#include "support/oracles.hpp"
#include "support/simulate.hpp"
#include "support/snapshot.hpp"
#include "vecmtk/dynamics.hpp"
#include "vecmtk/errors.hpp"

using namespace vecmtk;

namespace {

void check_close(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want, double rel) {
  REQUIRE(got.rows() == want.rows());
  REQUIRE(got.cols() == want.cols());
  for (Eigen::Index i = 0; i < got.rows(); ++i) {
    for (Eigen::Index j = 0; j < got.cols(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(rel));
    }
  }
}

void check_var_identity(const VecmModel& m) {
  const auto v = vecm_to_var(m);
  CHECK(v.order() == m.k + 1);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(v.A[0].rows(), v.A[0].cols());
  for (const auto& A : v.A) sum += A;
  const Eigen::MatrixXd want = Eigen::MatrixXd::Identity(sum.rows(), sum.cols()) + m.pi();
  CHECK((sum - want).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + want.cwiseAbs().maxCoeff()));
}

LevelVarModel scalar_ar1() {
  LevelVarModel m;
  m.names = {"y"};
  m.A = {Eigen::MatrixXd::Constant(1, 1, 0.5)};
  m.constant = Eigen::VectorXd::Constant(1, 0.5);
  m.dummy_coefficients = Eigen::MatrixXd(1, 0);
  m.residual_cov = Eigen::MatrixXd::Constant(1, 1, 1.0);
  return m;
}

}  // namespace

// Reference values: statsmodels VECM(k_ar_diff=2, coint_rank=3,
// deterministic="co") on the bundled snapshot without seasonal dummies.
TEST_CASE("no-dummy VECM on the snapshot matches the statsmodels reference") {
  const Panel p = testing::snapshot_panel();
  const auto m = estimate_vecm(p, 3, 2, VecmDeterministics{false});

  Eigen::MatrixXd alpha(4, 3);
  alpha << -3.444908788835e-02, -5.745665864126e+00, 6.173607106508e-01,
      -3.544487005684e-05, -4.036205953693e-02, -3.635679619387e-03,
      1.142835668051e-04, 1.200816342692e-01, -2.145778658296e-03,
      -2.880746175002e-02, -2.404872713125e+00, 2.022952129573e+00;
  check_close(m.alpha, alpha, 1e-7);

  Eigen::MatrixXd beta_pop(1, 3);
  beta_pop << -1.096525715819e-01, 7.392007092280e-05, -1.652441574043e-03;
  check_close(m.beta.bottomRows(1), beta_pop, 1e-7);
  check_close(m.beta.topRows(3), Eigen::MatrixXd::Identity(3, 3), 1e-12);

  Eigen::MatrixXd g1(1, 4);
  g1 << 0.270028365813, 3.319599599737, 5.29258994822, -0.0319682587;
  check_close(m.gamma(1).topRows(1), g1, 1e-7);

  Eigen::MatrixXd sigma(4, 4);
  sigma << 2979.099303916, 4.894164483933, 9.842418115078, 131.0835232885,
      4.894164483933, 0.1453807395615, 0.07320901201358, 0.364683381925,
      9.842418115078, 0.07320901201358, 0.5198276131241, 3.687698921212,
      131.0835232885, 0.364683381925, 3.687698921212, 6693.659903736;
  check_close(m.residual_cov, sigma, 1e-7);

  const auto v = vecm_to_var(m);
  const auto r = irf(v, "disc_rate", 4, {}, true);
  Eigen::MatrixXd h1(1, 4), h4(1, 4);
  h1 << -1.407718023402e-03, 0.5266198751973, 0.1952268701245, 3.722955736656;
  h4 << -15.302102153819, 0.535218447209, 0.594398741172, 10.892291228097;
  check_close(r.responses.row(1), h1, 1e-6);
  check_close(r.responses.row(4), h4, 1e-7);

  const auto f = forecast(v, p, 3);
  Eigen::MatrixXd fc(3, 4);
  fc << 16969.944601, 1.43556845472, 245.095065058, 325660.06763,
      17028.2746273, 1.42567719524, 246.289571547, 326250.006773,
      17088.653112, 1.36468327191, 247.483247725, 326865.102823;
  check_close(f.point, fc, 1e-9);
  CHECK(f.index.front() == Quarter(2017, 2));

  check_var_identity(m);
}

TEST_CASE("level VAR identity holds for every rank, lag and dummy setting") {
  const Panel p = testing::snapshot_panel();
  for (bool seasonal : {false, true}) {
    for (int k : {1, 2, 3}) {
      for (int r : {0, 1, 3, 4}) check_var_identity(estimate_vecm(p, r, k, VecmDeterministics{seasonal}));
    }
  }
}

TEST_CASE("scalar AR(1) forecast from zero") {
  const auto m = scalar_ar1();
  const Panel hist = testing::make_panel({{3.0, 1.0, 0.0}}, {"y"});
  const auto f = forecast(m, hist, 3);
  CHECK(f.point(0, 0) == doctest::Approx(0.5));
  CHECK(f.point(1, 0) == doctest::Approx(0.75));
  CHECK(f.point(2, 0) == doctest::Approx(0.875));
  CHECK(f.index[0] == hist.index().back().next());
}

TEST_CASE("calendar dummies equal explicitly supplied ones") {
  const Panel p = testing::snapshot_panel().head(200);
  const auto v = vecm_to_var(estimate_vecm(p, 2, 2));
  const int h = 6;
  std::vector<Quarter> idx;
  for (Quarter q = p.index().back().next(); static_cast<int>(idx.size()) < h; q = q.next()) idx.push_back(q);
  const auto a = forecast(v, p, h);
  const auto b = forecast(v, p, h, seasonal_dummies(idx));
  CHECK(a.point == b.point);
}

TEST_CASE("evaluate matches actual rows by quarter") {
  const Panel full = testing::snapshot_panel();
  const Panel fit = full.head(full.nobs() - 8);
  auto f = forecast(vecm_to_var(estimate_vecm(fit, 3, 2)), fit, 8);
  evaluate(f, full);
  REQUIRE(f.actual.has_value());
  CHECK((*f.actual)(7, 0) == full.values()(268, 0));
  CHECK(f.rmse.size() == 4);
  CHECK(f.mape(0) > 0.0);
  const Panel too_short = full.head(full.nobs() - 3);
  CHECK_THROWS_AS(evaluate(f, too_short), DataError);
}

TEST_CASE("rmse and mape") {
  const std::vector<double> actual = {100, 200}, pred = {110, 190};
  CHECK(rmse(actual, pred) == doctest::Approx(10.0));
  CHECK(mape(actual, pred) == doctest::Approx(7.5));
  const std::vector<double> zero = {100, 0};
  const std::vector<Quarter> idx = {Quarter(2015, 2), Quarter(2015, 3)};
  try {
    mape(zero, pred, idx);
    FAIL("zero actual accepted");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("2015Q3") != std::string::npos);
  }
}

TEST_CASE("impact matrix reproduces the covariance under any ordering") {
  testing::Rng rng(61);
  const auto m = testing::random_stable_var(rng, 4, 2);
  const Ordering rev = {"v4", "v3", "v2", "v1"};
  for (const Ordering& o : {Ordering{}, rev}) {
    const auto P = impact_matrix(m, o);
    CHECK((P * P.transpose() - m.residual_cov).cwiseAbs().maxCoeff() < 1e-12 * m.residual_cov.norm());
  }
  const auto P = impact_matrix(m, rev);
  CHECK(P(3, 0) == 0.0);  // v4 comes first, so v1's shock cannot move it
  CHECK(P(0, 3) != 0.0);
  CHECK_THROWS_AS(impact_matrix(m, {"v1", "v2"}), ConfigError);
  CHECK_THROWS_AS(impact_matrix(m, {"v1", "v1", "v2", "v3"}), ConfigError);
}

TEST_CASE("impulse responses match a direct simulation") {
  testing::Rng rng(62);
  for (int rep = 0; rep < 10; ++rep) {
    const auto m = testing::random_stable_var(rng, 3, 1 + rep % 3);
    const auto P = impact_matrix(m);
    for (std::size_t j = 0; j < 3; ++j) {
      const Eigen::MatrixXd lv = testing::simulate_impulse(m, P.col(static_cast<Eigen::Index>(j)), 8);
      const auto d = irf(m, m.names[j], 8);
      const auto c = irf(m, m.names[j], 8, {}, true);
      for (int h = 0; h <= 8; ++h) {
        const Eigen::RowVectorXd diff = h == 0 ? lv.row(0) : Eigen::RowVectorXd(lv.row(h) - lv.row(h - 1));
        CHECK((d.responses.row(h) - diff).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((c.responses.row(h) - lv.row(h)).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  CHECK_THROWS(irf(testing::random_stable_var(rng, 2, 1), "nope", 4));
}

TEST_CASE("MA coefficients follow the recursion") {
  testing::Rng rng(63);
  const auto m = testing::random_stable_var(rng, 2, 2);
  const auto phi = ma_coefficients(m, 3);
  REQUIRE(phi.size() == 4);
  CHECK(phi[0] == Eigen::MatrixXd::Identity(2, 2));
  CHECK((phi[1] - m.A[0]).norm() < 1e-15);
  CHECK((phi[2] - (phi[1] * m.A[0] + m.A[1])).norm() < 1e-14);
}

TEST_CASE("FEVD rows are proportions and horizon 1 is triangular") {
  testing::Rng rng(64);
  const auto m = testing::random_stable_var(rng, 4, 2);
  const auto f = fevd(m, 8);
  REQUIRE(f.tables.size() == 4);
  CHECK(f.horizon() == 8);
  for (const auto& t : f.tables) {
    for (Eigen::Index h = 0; h < t.rows(); ++h) {
      CHECK(t.row(h).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(t.row(h).minCoeff() >= 0.0);
    }
  }
  CHECK(f.tables[0](0, 0) == doctest::Approx(1.0));
  CHECK(f.tables[0].row(0).tail(3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.tables[1](0, 2) == 0.0);

  // Reordering moves the exogenous-at-impact variable.
  const auto g = fevd(m, 8, {"v3", "v1", "v2", "v4"});
  CHECK(g.tables[2](0, 2) == doctest::Approx(1.0));
}

TEST_CASE("serialization and rendering") {
  testing::Rng rng(65);
  const auto m = testing::random_stable_var(rng, 2, 1);
  std::ostringstream os;
  write_irf_csv(irf(m, "v1", 3), os);
  CHECK(os.str().rfind("horizon,d.v1,d.v2", 0) == 0);
  const auto j = to_json(fevd(m, 2));
  CHECK(j.is_object());
  const auto text = render_fevd(fevd(m, 2));
  CHECK(text.find("d.v1") != std::string::npos);

  const Panel hist = testing::make_panel({{3.0, 1.0, 0.0}}, {"y"});
  auto f = forecast(scalar_ar1(), hist, 2);
  CHECK(render_forecast(f).find("Predicted") != std::string::npos);
}
